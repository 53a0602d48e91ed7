#include "dicke/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dicke/errors.hpp"

namespace dicke {

double assoc_laguerre(int n, double k, double x) {
  if (n < 0) throw DomainError("Laguerre degree must be >= 0");
  if (n == 0) return 1.0;
  double previous = 1.0;
  double current = 1.0 + k - x;
  for (int i = 1; i < n; ++i) {
    const double next = ((2.0 * i + 1.0 + k - x) * current - (i + k) * previous) / (i + 1.0);
    previous = current;
    current = next;
  }
  return current;
}

double displaced_overlap(int n_bra, int n_ket, double alpha) {
  if (n_bra < 0 || n_ket < 0) throw DomainError("overlap indices must be >= 0");
  if (!std::isfinite(alpha)) throw DomainError("displacement must be finite");
  if (alpha == 0.0) return n_bra == n_ket ? 1.0 : 0.0;

  const int lower = std::min(n_bra, n_ket);
  const int upper = std::max(n_bra, n_ket);
  const int gap = upper - lower;
  // N >= N' carries (-alpha)^gap; the transposed case carries alpha^gap.
  const double signed_alpha = n_ket >= n_bra ? -alpha : alpha;

  const double log_magnitude = 0.5 * (std::lgamma(lower + 1.0) - std::lgamma(upper + 1.0)) +
                               gap * std::log(std::abs(alpha)) - 0.5 * alpha * alpha;
  const double sign = (signed_alpha < 0.0 && (gap & 1)) ? -1.0 : 1.0;
  return sign * std::exp(log_magnitude) * assoc_laguerre(lower, gap, alpha * alpha);
}

DisplacementTable::DisplacementTable(double alpha, std::size_t rows, std::size_t cols)
    : alpha_(alpha), rows_(rows), cols_(cols), table_(rows * cols, 0.0) {
  if (!std::isfinite(alpha)) throw DomainError("displacement must be finite");
  if (rows == 0 || cols == 0) return;

  // The ladder recurrence in N loses ~1e-9 to cancellation once |alpha| > 2, so
  // every entry goes through the closed form instead.
  for (std::size_t n = 0; n < rows; ++n) {
    for (std::size_t ket = 0; ket < cols; ++ket) {
      table_[n * cols_ + ket] = displaced_overlap(static_cast<int>(n), static_cast<int>(ket), alpha);
    }
  }
}

namespace {

std::size_t kernel_size(int n_max) {
  if (n_max < 0) throw DomainError("N_max must be >= 0");
  return static_cast<std::size_t>(n_max) + 1;
}

}  // namespace

OverlapKernel::OverlapKernel(double unit, int n_max)
    : table_(unit, kernel_size(n_max), kernel_size(n_max)) {}

}  // namespace dicke
