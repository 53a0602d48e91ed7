#include "dicke/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace dicke {

namespace {

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(field) + " must be finite");
  }
}

void check_quantum_numbers(int two_j, int two_m) {
  if (two_j <= 0) {
    throw DomainError("j must be positive");
  }
  if (std::abs(two_m) > two_j) {
    throw DomainError("|m| exceeds j (2m = " + std::to_string(two_m) +
                      ", 2j = " + std::to_string(two_j) + ")");
  }
  if ((two_j - two_m) % 2 != 0) {
    throw DomainError("m - j must be an integer");
  }
}

int doubled(double value, const char* field) {
  require_finite(value, field);
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (twice != rounded || std::abs(rounded) > 1e6) {
    throw DomainError(std::string(field) + " must be a multiple of 1/2");
  }
  return static_cast<int>(rounded);
}

}  // namespace

ModelParams::ModelParams(double omega, double omega0, double gamma, int two_j)
    : omega_(omega),
      omega0_(omega0),
      gamma_(gamma),
      two_j_(two_j),
      gamma_c_(0.5 * std::sqrt(omega * omega0)) {}

ModelParams make_params(double omega, double omega0, double gamma, double j) {
  require_finite(omega, "omega");
  require_finite(omega0, "omega0");
  require_finite(gamma, "gamma");
  if (!(omega > 0.0)) throw DomainError("omega must be > 0");
  if (omega0 < 0.0) throw DomainError("omega0 must be >= 0");
  if (gamma < 0.0) throw DomainError("gamma must be >= 0");
  const int two_j = doubled(j, "j");
  if (two_j <= 0) throw DomainError("j must be > 0");
  return ModelParams(omega, omega0, gamma, two_j);
}

std::string_view to_string(BasisKind kind) noexcept {
  return kind == BasisKind::Fock ? "fock" : "coherent";
}

BasisKind parse_basis(std::string_view name) {
  if (name == "fock") return BasisKind::Fock;
  if (name == "coherent") return BasisKind::Coherent;
  throw DomainError("unknown basis '" + std::string(name) + "'");
}

StateIndex state_index(const ModelParams& params, int x, int two_m) {
  check_quantum_numbers(params.two_j(), two_m);
  if (x < 0) throw DomainError("boson quantum number must be >= 0");
  const auto row = static_cast<std::size_t>((two_m + params.two_j()) / 2);
  return {x, two_m,
          static_cast<std::size_t>(x) * static_cast<std::size_t>(params.spin_dim()) + row};
}

StateIndex decode_flat(const ModelParams& params, std::size_t flat) {
  const auto spin = static_cast<std::size_t>(params.spin_dim());
  const int x = static_cast<int>(flat / spin);
  const int two_m = 2 * static_cast<int>(flat % spin) - params.two_j();
  return {x, two_m, flat};
}

double raising_coefficient_twice(int two_j, int two_m) {
  check_quantum_numbers(two_j, two_m);
  // 4 [j(j+1) - m(m+1)] = 2j(2j+2) - 2m(2m+2), exact in integers.
  const long long quad = static_cast<long long>(two_j) * (two_j + 2) -
                         static_cast<long long>(two_m) * (two_m + 2);
  return 0.5 * std::sqrt(static_cast<double>(quad));
}

double raising_coefficient(double j, double m) {
  return raising_coefficient_twice(doubled(j, "j"), doubled(m, "m"));
}

int parity_sign(int x, int two_m, int two_j) noexcept {
  const int exponent = x + (two_m + two_j) / 2;
  return exponent % 2 == 0 ? 1 : -1;
}

SpinMatrices make_spin_matrices(int two_j) {
  if (two_j <= 0) throw DomainError("j must be positive");
  const int dim = two_j + 1;
  SpinMatrices s;
  s.dim = dim;
  s.jz.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  s.jplus.assign(s.jz.size(), 0.0);
  s.jminus.assign(s.jz.size(), 0.0);
  for (int row = 0; row < dim; ++row) {
    const int two_m = 2 * row - two_j;
    s.jz[row * dim + row] = 0.5 * two_m;
    if (row + 1 < dim) {
      const double c = raising_coefficient_twice(two_j, two_m);
      s.jplus[(row + 1) * dim + row] = c;
      s.jminus[row * dim + (row + 1)] = c;
    }
  }
  return s;
}

std::vector<double> quarter_turn_about_y(int two_j) {
  const SpinMatrices s = make_spin_matrices(two_j);
  const auto n = static_cast<std::size_t>(s.dim);
  constexpr double kQuarterTurn = 1.5707963267948966;

  // A = (pi/2) (J_+ - J_-) / 2 = (pi/2) i J_y, real antisymmetric.
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    a[i] = 0.5 * kQuarterTurn * (s.jplus[i] - s.jminus[i]);
  }
  double norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) row_sum += std::abs(a[r * n + c]);
    norm = std::max(norm, row_sum);
  }
  int squarings = 0;
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  for (double& v : a) v *= scale;

  auto multiply = [n](const std::vector<double>& lhs, const std::vector<double>& rhs) {
    std::vector<double> out(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        const double l = lhs[r * n + k];
        if (l == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) out[r * n + c] += l * rhs[k * n + c];
      }
    }
    return out;
  };

  // Taylor series of exp(A / 2^s), then square s times.
  std::vector<double> result(n * n, 0.0);
  std::vector<double> term(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) result[i * n + i] = term[i * n + i] = 1.0;
  for (int order = 1; order <= 24; ++order) {
    term = multiply(term, a);
    for (double& v : term) v /= order;
    for (std::size_t i = 0; i < n * n; ++i) result[i] += term[i];
  }
  for (int i = 0; i < squarings; ++i) result = multiply(result, result);
  return result;
}

}  // namespace dicke
