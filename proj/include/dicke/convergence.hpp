#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dicke/eigensolver.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// P_{k,x} = sum_m |C^k_{m,x}|^2 for x = 0..x_max.
struct ProbabilityProfile {
  std::size_t k = 0;
  std::vector<double> p;
};

ProbabilityProfile probability_profile(const EigenSolution& solution, std::size_t k);

/// Weight of state k on the topmost retained boson layer x_max. This needs a
/// single diagonalization only.
double delta_p(const EigenSolution& solution, std::size_t k);
/// delta_p for every state, index k-1.
std::vector<double> delta_p_all(const EigenSolution& solution);

/// |E_k(x_max) - E_k(x_max - 1)|, states matched by ascending order.
/// Throws DomainError for x_max < 1 or k beyond the smaller run.
double delta_e(const ModelParams& params, BasisKind kind, int x_max, std::size_t k,
               std::size_t cap = kDefaultDimensionCap);
/// Elementwise |upper[i] - lower[i]| over the shorter of the two spectra.
std::vector<double> energy_differences(std::span<const double> upper, std::span<const double> lower);

/// Number of states with delta_p < epsilon. Throws DomainError if epsilon <= 0.
std::size_t count_converged(const EigenSolution& solution, double epsilon);

/// Length of the run k = 1, 2, ... whose delta_p stays below epsilon.
std::size_t count_converged_prefix(const EigenSolution& solution, double epsilon);

/// Which diagonalization a reported truncation x_max refers to when judging
/// wave-function precision. TopLayer probes layer x_max of the x_max run.
/// NextLayer probes layer x_max + 1 of the x_max + 1 run, i.e. the weight the
/// expansion truncated at x_max is missing once one more layer is admitted.
enum class LayerReading { TopLayer, NextLayer };

constexpr int probed_truncation(int x_max, LayerReading reading) noexcept {
  return reading == LayerReading::NextLayer ? x_max + 1 : x_max;
}

enum class Criterion { Energy, Probability };

struct SearchOptions {
  /// First truncation scanned; negative picks the smallest valid one.
  int start = -1;
  /// Coarse stride; a hit is refined back with step 1.
  int stride = 1;
  /// Largest truncation tried before giving up.
  int max_truncation = 200;
  std::size_t cap = kDefaultDimensionCap;
};

struct TracePoint {
  int x_max = 0;
  double value = 0.0;
};

/// converged == false means the cap was reached; x_max is then -1. The trace
/// lists every truncation evaluated, in ascending x_max order.
struct MinTruncation {
  bool converged = false;
  int x_max = -1;
  std::vector<TracePoint> trace;
};

MinTruncation find_min_truncation(const ModelParams& params, BasisKind kind, std::size_t k,
                                  double epsilon, Criterion criterion,
                                  const SearchOptions& options = {});

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x. Throws DomainError for
/// fewer than two points, mismatched lengths, or all-equal xs.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

struct StateRow {
  std::size_t k = 0;
  double energy = 0.0;
  double delta_p = 0.0;
  std::optional<double> delta_e;
  /// A neighbour lies within 10 delta_e, so order-matching across truncations
  /// may have swapped labels.
  bool degenerate_suspect = false;
};

struct ConvergenceReport {
  ModelParams params;
  BasisSpec basis;
  std::vector<double> tolerances;
  std::vector<StateRow> rows;
  /// Per tolerance: rows with delta_p < tolerance.
  std::vector<std::size_t> converged_p;
  /// Per tolerance: rows with delta_e < tolerance (empty without delta_e).
  std::vector<std::size_t> converged_e;
};

/// Per-state table of one diagonalization. With with_delta_e the run at
/// x_max - 1 is also diagonalized and matched by order (needs x_max >= 1).
ConvergenceReport make_report(const EigenSolution& solution, std::span<const double> tolerances,
                              bool with_delta_e, std::size_t cap = kDefaultDimensionCap);

struct ScanPoint {
  int x_max = 0;
  double delta_p = 0.0;
  std::optional<double> delta_e;
};

/// delta_p (and delta_e where x_max - 1 can hold state k) of state k for
/// every truncation in [x_lo, x_hi].
std::vector<ScanPoint> truncation_scan(const ModelParams& params, BasisKind kind, std::size_t k,
                                       int x_lo, int x_hi, std::size_t cap = kDefaultDimensionCap);

/// Fit inputs and result for a log-space relation. Points whose logarithm is
/// undefined (a zero criterion) are skipped and counted.
struct LogFit {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::size_t> ks;
  std::size_t skipped = 0;
  LinearFit fit;
};

/// (x_max, -log10 delta_p) of state k along [x_lo, x_hi].
LogFit fit_delta_p_vs_truncation(std::span<const ScanPoint> scan);

/// (log10 delta_e, -log10 delta_p) over the first max_states states with
/// delta_e < energy_tolerance.
LogFit fit_delta_p_vs_delta_e(const ConvergenceReport& report, double energy_tolerance,
                              std::size_t max_states);

}  // namespace dicke
