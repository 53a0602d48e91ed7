#include <cmath>
#include <string>

#include "dicke/hamiltonian.hpp"
#include "dicke/overlap.hpp"

namespace dicke {

double displacement_unit(const ModelParams& params) noexcept {
  return 2.0 * params.gamma() /
         (params.omega() * std::sqrt(static_cast<double>(params.n_atoms())));
}

SymmetricMatrix build_coherent_hamiltonian(const ModelParams& params, int n_max,
                                           std::size_t cap) {
  if (n_max < 0) throw DomainError("truncation must be >= 0, got " + std::to_string(n_max));
  const std::size_t dim = BasisSpec{BasisKind::Coherent, n_max}.dim(params);
  if (dim > cap) throw CapExceeded(dim, cap);

  SymmetricMatrix h(dim);
  const int two_j = params.two_j();
  const double unit = displacement_unit(params);
  const OverlapKernel kernel(unit, n_max);

  for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
    const double m = 0.5 * two_m;
    const double shift = params.omega() * unit * unit * m * m;
    for (int n = 0; n <= n_max; ++n) {
      h.set_diagonal(state_index(params, n, two_m).flat, params.omega() * n - shift);
    }
    if (two_m == two_j || params.omega0() == 0.0) continue;

    // Block (m+1, m): the two displaced vacua differ by -G.
    const double spin = 0.5 * params.omega0() * raising_coefficient_twice(two_j, two_m);
    for (int bra = 0; bra <= n_max; ++bra) {
      const std::size_t row = state_index(params, bra, two_m + 2).flat;
      for (int ket = 0; ket <= n_max; ++ket) {
        const double value = spin * kernel.minus(bra, ket);
        if (value != 0.0) h.set_pair(row, state_index(params, ket, two_m).flat, value);
      }
    }
  }
  return h;
}

std::vector<double> coherent_to_fock(std::span<const double> coefficients,
                                     const ModelParams& params, int n_max, int n_cut) {
  if (n_max < 0) throw DomainError("N_max must be >= 0");
  const std::size_t spin = static_cast<std::size_t>(params.spin_dim());
  const std::size_t expected = BasisSpec{BasisKind::Coherent, n_max}.dim(params);
  if (coefficients.size() != expected) {
    throw DimensionMismatch("coherent vector has " + std::to_string(coefficients.size()) +
                            " entries, expected " + std::to_string(expected));
  }
  if (n_cut < n_max) throw DomainError("n_cut must be >= N_max");

  const double unit = displacement_unit(params);
  const std::size_t rows = static_cast<std::size_t>(n_cut) + 1;
  const std::size_t layers = static_cast<std::size_t>(n_max) + 1;

  // Undo the displacement per rotated projection m: sum_N <n|D(G m)|N> C[N, m].
  std::vector<double> displaced(rows * spin, 0.0);
  for (std::size_t col = 0; col < spin; ++col) {
    const double m = static_cast<double>(col) - params.j();
    const DisplacementTable table(unit * m, rows, layers);
    for (std::size_t n = 0; n < rows; ++n) {
      double sum = 0.0;
      for (std::size_t layer = 0; layer < layers; ++layer) {
        sum += table(n, layer) * coefficients[layer * spin + col];
      }
      displaced[n * spin + col] = sum;
    }
  }

  // Undo the spin rotation: |m>_rotated = R |m>_z.
  const std::vector<double> rotation = quarter_turn_about_y(params.two_j());
  std::vector<double> fock(rows * spin, 0.0);
  for (std::size_t n = 0; n < rows; ++n) {
    for (std::size_t mz = 0; mz < spin; ++mz) {
      double sum = 0.0;
      for (std::size_t col = 0; col < spin; ++col) {
        sum += rotation[mz * spin + col] * displaced[n * spin + col];
      }
      fock[n * spin + mz] = sum;
    }
  }
  return fock;
}

}  // namespace dicke
