#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/symmetric_matrix.hpp"

namespace dicke {

/// Full eigendecomposition of a real symmetric matrix.
///
/// energies are ascending; column k of the (column-major) coefficient array
/// is the eigenvector for energies[k]. Each vector's largest-magnitude
/// component is made positive (first such index on ties).
struct Eigendecomposition {
  std::size_t dim = 0;
  std::vector<double> energies;
  std::vector<double> vectors;

  std::span<const double> vector(std::size_t column) const noexcept {
    return {vectors.data() + column * dim, dim};
  }
};

/// Throws DomainError for non-finite input and SolverError when the
/// divide-and-conquer iteration fails.
Eigendecomposition eigh(const SymmetricMatrix& h);

/// Eigenvalues only, ascending.
std::vector<double> eigvalsh(const SymmetricMatrix& h);

/// Diagonalized Dicke Hamiltonian in one basis. States are numbered k = 1..D
/// with k = 1 the ground state; coefficients use the StateIndex flat layout.
class EigenSolution {
 public:
  EigenSolution(const ModelParams& params, const BasisSpec& basis, Eigendecomposition decomposition);

  const ModelParams& params() const noexcept { return params_; }
  const BasisSpec& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return decomposition_.dim; }

  std::span<const double> energies() const noexcept { return decomposition_.energies; }
  /// E^k, k 1-based.
  double energy(std::size_t k) const;
  /// C^k over the flat basis, k 1-based.
  std::span<const double> state(std::size_t k) const;
  /// C^k_{m,x}
  double coefficient(std::size_t k, int x, int two_m) const;

  const Eigendecomposition& decomposition() const noexcept { return decomposition_; }

 private:
  void check_state(std::size_t k) const;

  ModelParams params_;
  BasisSpec basis_;
  Eigendecomposition decomposition_;
};

/// Builds the Hamiltonian for (params, basis) and diagonalizes it.
EigenSolution solve(const ModelParams& params, const BasisSpec& basis,
                    std::size_t cap = kDefaultDimensionCap);

/// max_k || H v_k - E_k v_k ||_2 / max(1, ||H||_F)
double residual(const SymmetricMatrix& h, const Eigendecomposition& decomposition);
double residual(const SymmetricMatrix& h, const EigenSolution& solution);

/// max |<v_k, v_l> - delta_kl|
double orthonormality_error(const Eigendecomposition& decomposition);

}  // namespace dicke
