#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dicke {

/// Dense real symmetric matrix, row-major. Off-diagonal entries are only
/// written through set_pair(), so both triangles always hold the same bits.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }

  void set_diagonal(std::size_t i, double value) noexcept {
    entries_[i * dim_ + i] = value;
  }
  void set_pair(std::size_t row, std::size_t col, double value) noexcept {
    entries_[row * dim_ + col] = value;
    entries_[col * dim_ + row] = value;
  }

  std::span<const double> entries() const noexcept { return entries_; }

  double trace() const noexcept;
  double frobenius_norm() const noexcept;
  /// max |H[i][l] - H[l][i]|
  double max_asymmetry() const noexcept;
  bool all_finite() const noexcept;

 private:
  std::size_t dim_ = 0;
  std::vector<double> entries_;
};

/// Default upper bound on the matrix dimension accepted by the builders.
inline constexpr std::size_t kDefaultDimensionCap = 30000;

/// Debug dump: 16-byte header ("DKHM", little-endian u32 dim, 8 zero bytes)
/// followed by dim*dim little-endian float64 entries in row-major order.
void write_matrix_dump(const SymmetricMatrix& matrix, const std::filesystem::path& path);
SymmetricMatrix read_matrix_dump(const std::filesystem::path& path);

}  // namespace dicke
