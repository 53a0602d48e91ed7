#include "dicke/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "dicke/hamiltonian.hpp"

namespace dicke {

namespace {

void check_k(std::size_t k, std::size_t dim) {
  if (k < 1 || k > dim) {
    throw DomainError("state number " + std::to_string(k) + " outside 1.." + std::to_string(dim));
  }
}

void check_tolerance(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("tolerance must be positive and finite");
  }
}

std::vector<double> spectrum(const ModelParams& params, BasisKind kind, int x_max, std::size_t cap) {
  return eigvalsh(build_hamiltonian(params, {kind, x_max}, cap));
}

}  // namespace

ProbabilityProfile probability_profile(const EigenSolution& solution, std::size_t k) {
  const auto state = solution.state(k);
  const std::size_t spin = static_cast<std::size_t>(solution.params().spin_dim());
  ProbabilityProfile profile{k, std::vector<double>(static_cast<std::size_t>(solution.basis().x_max) + 1, 0.0)};
  for (std::size_t i = 0; i < state.size(); ++i) {
    profile.p[i / spin] += state[i] * state[i];
  }
  return profile;
}

double delta_p(const EigenSolution& solution, std::size_t k) {
  const auto state = solution.state(k);
  const std::size_t spin = static_cast<std::size_t>(solution.params().spin_dim());
  const std::size_t top = static_cast<std::size_t>(solution.basis().x_max) * spin;
  double weight = 0.0;
  for (std::size_t i = top; i < top + spin; ++i) weight += state[i] * state[i];
  return weight;
}

std::vector<double> delta_p_all(const EigenSolution& solution) {
  std::vector<double> out(solution.dim());
  for (std::size_t k = 1; k <= solution.dim(); ++k) out[k - 1] = delta_p(solution, k);
  return out;
}

std::vector<double> energy_differences(std::span<const double> upper, std::span<const double> lower) {
  const std::size_t n = std::min(upper.size(), lower.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(upper[i] - lower[i]);
  return out;
}

double delta_e(const ModelParams& params, BasisKind kind, int x_max, std::size_t k, std::size_t cap) {
  if (x_max < 1) throw DomainError("delta_e needs x_max >= 1");
  check_k(k, BasisSpec{kind, x_max - 1}.dim(params));
  const auto upper = spectrum(params, kind, x_max, cap);
  const auto lower = spectrum(params, kind, x_max - 1, cap);
  return std::abs(upper[k - 1] - lower[k - 1]);
}

std::size_t count_converged(const EigenSolution& solution, double epsilon) {
  check_tolerance(epsilon);
  std::size_t count = 0;
  for (std::size_t k = 1; k <= solution.dim(); ++k) {
    if (delta_p(solution, k) < epsilon) ++count;
  }
  return count;
}

std::size_t count_converged_prefix(const EigenSolution& solution, double epsilon) {
  check_tolerance(epsilon);
  std::size_t count = 0;
  while (count < solution.dim() && delta_p(solution, count + 1) < epsilon) ++count;
  return count;
}

MinTruncation find_min_truncation(const ModelParams& params, BasisKind kind, std::size_t k,
                                  double epsilon, Criterion criterion,
                                  const SearchOptions& options) {
  check_tolerance(epsilon);
  if (k < 1) throw DomainError("state numbers start at 1");
  if (options.stride < 1) throw DomainError("search stride must be >= 1");

  // Smallest truncation whose run (and, for delta_e, the run below) holds state k.
  const auto spin = static_cast<std::size_t>(params.spin_dim());
  int earliest = static_cast<int>((k + spin - 1) / spin) - 1;
  if (criterion == Criterion::Energy) earliest += 1;
  const int start = std::max(options.start, earliest);

  std::map<int, std::vector<double>> spectra;
  auto energies_at = [&](int x) -> const std::vector<double>& {
    auto it = spectra.find(x);
    if (it == spectra.end()) it = spectra.emplace(x, spectrum(params, kind, x, options.cap)).first;
    return it->second;
  };

  std::map<int, double> evaluated;
  auto evaluate = [&](int x) {
    if (auto it = evaluated.find(x); it != evaluated.end()) return it->second;
    double value = 0.0;
    if (criterion == Criterion::Energy) {
      value = std::abs(energies_at(x)[k - 1] - energies_at(x - 1)[k - 1]);
      spectra.erase(x - 1);
    } else {
      value = delta_p(solve(params, {kind, x}, options.cap), k);
    }
    evaluated.emplace(x, value);
    return value;
  };

  MinTruncation result;
  int previous = start - 1;
  for (int x = start; x <= options.max_truncation; x += options.stride) {
    if (evaluate(x) < epsilon) {
      result.converged = true;
      result.x_max = x;
      for (int refine = std::max(start, previous + 1); refine < x; ++refine) {
        if (evaluate(refine) < epsilon) {
          result.x_max = refine;
          break;
        }
      }
      break;
    }
    previous = x;
  }
  for (const auto& [x, value] : evaluated) result.trace.push_back({x, value});
  return result;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("fit: xs and ys differ in length");
  if (xs.size() < 2) throw DomainError("fit: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (sxx == 0.0) throw DomainError("fit: all xs are equal");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    sse += r * r;
  }
  fit.rms_residual = std::sqrt(sse / n);
  fit.points = xs.size();
  return fit;
}

ConvergenceReport make_report(const EigenSolution& solution, std::span<const double> tolerances,
                              bool with_delta_e, std::size_t cap) {
  for (double eps : tolerances) check_tolerance(eps);
  ConvergenceReport report{solution.params(), solution.basis(),
                           std::vector<double>(tolerances.begin(), tolerances.end()), {}, {}, {}};

  std::vector<double> differences;
  if (with_delta_e) {
    if (solution.basis().x_max < 1) throw DomainError("delta_e needs x_max >= 1");
    const auto lower = spectrum(solution.params(), solution.basis().kind,
                                solution.basis().x_max - 1, cap);
    differences = energy_differences(solution.energies(), lower);
  }

  const auto energies = solution.energies();
  report.rows.reserve(solution.dim());
  for (std::size_t k = 1; k <= solution.dim(); ++k) {
    StateRow row{k, energies[k - 1], delta_p(solution, k), std::nullopt, false};
    if (k <= differences.size()) {
      const double de = differences[k - 1];
      row.delta_e = de;
      const double window = 10.0 * de;
      const bool below = k > 1 && std::abs(energies[k - 1] - energies[k - 2]) < window;
      const bool above = k < energies.size() && std::abs(energies[k] - energies[k - 1]) < window;
      row.degenerate_suspect = below || above;
    }
    report.rows.push_back(row);
  }

  for (double eps : report.tolerances) {
    std::size_t by_p = 0;
    std::size_t by_e = 0;
    for (const auto& row : report.rows) {
      if (row.delta_p < eps) ++by_p;
      if (row.delta_e && *row.delta_e < eps) ++by_e;
    }
    report.converged_p.push_back(by_p);
    if (with_delta_e) report.converged_e.push_back(by_e);
  }
  return report;
}

std::vector<ScanPoint> truncation_scan(const ModelParams& params, BasisKind kind, std::size_t k,
                                       int x_lo, int x_hi, std::size_t cap) {
  if (x_lo < 0 || x_hi < x_lo) throw DomainError("truncation range is empty or negative");
  std::vector<ScanPoint> scan;
  std::vector<double> lower;
  if (x_lo >= 1 && BasisSpec{kind, x_lo - 1}.dim(params) >= k) {
    lower = spectrum(params, kind, x_lo - 1, cap);
  }
  for (int x = x_lo; x <= x_hi; ++x) {
    const EigenSolution solution = solve(params, {kind, x}, cap);
    ScanPoint point{x, delta_p(solution, k), std::nullopt};
    if (lower.size() >= k) point.delta_e = std::abs(solution.energy(k) - lower[k - 1]);
    lower.assign(solution.energies().begin(), solution.energies().end());
    scan.push_back(point);
  }
  return scan;
}

LogFit fit_delta_p_vs_truncation(std::span<const ScanPoint> scan) {
  LogFit out;
  for (const auto& point : scan) {
    if (!(point.delta_p > 0.0)) {
      ++out.skipped;
      continue;
    }
    out.xs.push_back(point.x_max);
    out.ys.push_back(-std::log10(point.delta_p));
  }
  out.fit = linear_fit(out.xs, out.ys);
  return out;
}

LogFit fit_delta_p_vs_delta_e(const ConvergenceReport& report, double energy_tolerance,
                              std::size_t max_states) {
  check_tolerance(energy_tolerance);
  LogFit out;
  std::size_t taken = 0;
  for (const auto& row : report.rows) {
    if (taken == max_states) break;
    if (!row.delta_e || !(*row.delta_e < energy_tolerance)) continue;
    ++taken;
    if (!(*row.delta_e > 0.0) || !(row.delta_p > 0.0)) {
      ++out.skipped;
      continue;
    }
    out.xs.push_back(std::log10(*row.delta_e));
    out.ys.push_back(-std::log10(row.delta_p));
    out.ks.push_back(row.k);
  }
  out.fit = linear_fit(out.xs, out.ys);
  return out;
}

}  // namespace dicke
