#pragma once

#include <cstddef>
#include <vector>

namespace dicke {

/// <N'| D(alpha) |N> for real alpha, from the associated-Laguerre closed form
///
///   N >= N':  e^{-a^2/2} sqrt(N'!/N!) (-a)^{N-N'} L_{N'}^{(N-N')}(a^2)
///   N <  N':  e^{-a^2/2} sqrt(N!/N'!) ( a)^{N'-N} L_{N}^{(N'-N)}(a^2)
///
/// with factorial ratios taken through lgamma. Throws DomainError on
/// negative indices.
double displaced_overlap(int n_bra, int n_ket, double alpha);

/// Associated Laguerre polynomial L_n^{(k)}(x) by upward recurrence in n.
double assoc_laguerre(int n, double k, double x);

/// Table of <n| D(alpha) |N> for n < rows, N < cols (row-major).
///
/// Entries are the untruncated matrix elements; no cutoff error enters.
class DisplacementTable {
 public:
  DisplacementTable(double alpha, std::size_t rows, std::size_t cols);

  double alpha() const noexcept { return alpha_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t bra, std::size_t ket) const noexcept {
    return table_[bra * cols_ + ket];
  }

 private:
  double alpha_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> table_;
};

/// Square (N_max+1)^2 overlap kernel at displacement +G. The opposite
/// displacement follows from <N'|D(-G)|N> = (-1)^(N-N') <N'|D(G)|N>.
class OverlapKernel {
 public:
  OverlapKernel(double unit, int n_max);

  double unit() const noexcept { return table_.alpha(); }
  int n_max() const noexcept { return static_cast<int>(table_.rows()) - 1; }

  /// <bra| D(+G) |ket>
  double plus(int bra, int ket) const noexcept { return table_(bra, ket); }
  /// <bra| D(-G) |ket>
  double minus(int bra, int ket) const noexcept {
    const double v = table_(bra, ket);
    return ((ket - bra) & 1) ? -v : v;
  }

 private:
  DisplacementTable table_;
};

}  // namespace dicke
