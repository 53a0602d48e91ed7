#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dicke {

// Invalid physical parameter, quantum number, or truncation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested matrix dimension is larger than the configured cap.
class CapExceeded : public std::length_error {
 public:
  CapExceeded(std::size_t requested, std::size_t cap)
      : std::length_error("matrix dimension " + std::to_string(requested) +
                          " exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

// The iterative phase of the eigensolver failed to converge.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long index)
      : std::runtime_error(what), index_(index) {}

  // LAPACK-style failure index (number of off-diagonals that failed).
  long index() const noexcept { return index_; }

 private:
  long index_;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dicke
