#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/symmetric_matrix.hpp"

namespace dicke {

/// Dicke Hamiltonian in the truncated photon-number basis |n; j, m>,
/// n = 0..n_max, flattened by StateIndex. Throws DomainError for n_max < 0
/// and CapExceeded when (n_max+1)(2j+1) > cap.
SymmetricMatrix build_fock_hamiltonian(const ModelParams& params, int n_max,
                                       std::size_t cap = kDefaultDimensionCap);

/// Displacement unit of the coherent basis, G = 2 gamma / (omega sqrt(2j)).
double displacement_unit(const ModelParams& params) noexcept;

/// Dicke Hamiltonian in the extended coherent basis |N; j, m>.
///
/// The spin is turned a quarter about y, so the coupling becomes
/// -omega G (a + a^dag) J_z and omega0 J_z becomes omega0 J_x. For each m the
/// boson part is diagonalized by the displaced number states D(G m)|N>:
///
///   <N', m  |H|N, m> = delta_{N'N} (omega N - omega G^2 m^2)
///   <N', m+1|H|N, m> = (omega0 / 2) sqrt(j(j+1) - m(m+1)) <N'|D(-G)|N>
SymmetricMatrix build_coherent_hamiltonian(const ModelParams& params, int n_max,
                                           std::size_t cap = kDefaultDimensionCap);

SymmetricMatrix build_hamiltonian(const ModelParams& params, const BasisSpec& basis,
                                  std::size_t cap = kDefaultDimensionCap);

/// Expands a coherent-basis vector (flat layout over |N; j, m>, N <= N_max)
/// in the Fock basis |n; j, m_z> for n = 0..n_cut, undoing the displacement
/// and the spin rotation. The result uses the Fock flat layout.
/// Throws DimensionMismatch if coefficients.size() != (N_max+1)(2j+1) and
/// DomainError if n_cut < N_max.
std::vector<double> coherent_to_fock(std::span<const double> coefficients,
                                     const ModelParams& params, int n_max, int n_cut);

}  // namespace dicke
