#include "dicke/symmetric_matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dicke {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'K', 'H', 'M'};
constexpr std::size_t kHeaderBytes = 16;

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("truncated matrix dump");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {}

double SymmetricMatrix::trace() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += entries_[i * dim_ + i];
  return sum;
}

double SymmetricMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (double v : entries_) sum += v * v;
  return std::sqrt(sum);
}

double SymmetricMatrix::max_asymmetry() const noexcept {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r + 1; c < dim_; ++c) {
      worst = std::max(worst, std::abs(entries_[r * dim_ + c] - entries_[c * dim_ + r]));
    }
  }
  return worst;
}

bool SymmetricMatrix::all_finite() const noexcept {
  for (double v : entries_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void write_matrix_dump(const SymmetricMatrix& matrix, const std::filesystem::path& path) {
  if (matrix.dim() > 0xFFFFFFFFu) throw std::length_error("dimension does not fit in u32");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.dim()));
  put_le<std::uint64_t>(out, 0);
  for (double v : matrix.entries()) put_le<double>(out, v);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SymmetricMatrix read_matrix_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("bad matrix dump magic");
  const auto dim = get_le<std::uint32_t>(in);
  (void)get_le<std::uint64_t>(in);
  SymmetricMatrix matrix(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const double v = get_le<double>(in);
      if (c == r) {
        matrix.set_diagonal(r, v);
      } else if (c > r) {
        matrix.set_pair(r, c, v);
      } else if (v != matrix(r, c)) {
        throw std::runtime_error("matrix dump is not symmetric");
      }
    }
  }
  static_assert(kHeaderBytes == 4 + 4 + 8);
  return matrix;
}

}  // namespace dicke
