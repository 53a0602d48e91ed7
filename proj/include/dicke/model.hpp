#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke {

/// Physical parameters of the single-mode Dicke Hamiltonian
///
///   H = omega a^dag a + omega0 J_z + gamma / sqrt(N) (a + a^dag)(J_+ + J_-)
///
/// The pseudo-spin length j is stored as the integer 2j so half-integer
/// values are exact. Construct through make_params().
class ModelParams {
 public:
  double omega() const noexcept { return omega_; }
  double omega0() const noexcept { return omega0_; }
  double gamma() const noexcept { return gamma_; }
  int two_j() const noexcept { return two_j_; }
  double j() const noexcept { return 0.5 * two_j_; }

  /// Number of atoms, 2j.
  int n_atoms() const noexcept { return two_j_; }
  /// Critical coupling sqrt(omega * omega0) / 2.
  double gamma_c() const noexcept { return gamma_c_; }
  /// Size of the symmetric spin multiplet, 2j + 1.
  int spin_dim() const noexcept { return two_j_ + 1; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  friend ModelParams make_params(double, double, double, double);
  ModelParams(double omega, double omega0, double gamma, int two_j);

  double omega_;
  double omega0_;
  double gamma_;
  int two_j_;
  double gamma_c_;
};

/// Validates and packs the parameters. Throws DomainError naming the
/// offending field when omega <= 0, omega0 < 0, gamma < 0, any value is
/// non-finite, or 2j is not a positive integer.
ModelParams make_params(double omega, double omega0, double gamma, double j);

enum class BasisKind { Fock, Coherent };

std::string_view to_string(BasisKind kind) noexcept;
/// Accepts "fock" or "coherent" (case-sensitive); throws DomainError otherwise.
BasisKind parse_basis(std::string_view name);

/// Which basis and how many boson layers (x = 0..x_max) are retained.
struct BasisSpec {
  BasisKind kind = BasisKind::Fock;
  int x_max = 0;

  /// (x_max + 1)(2j + 1)
  std::size_t dim(const ModelParams& params) const noexcept {
    return static_cast<std::size_t>(x_max + 1) *
           static_cast<std::size_t>(params.spin_dim());
  }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Position of |x; j, m> in the flattened basis: flat = x (2j+1) + (m + j).
struct StateIndex {
  int x = 0;
  int two_m = 0;
  std::size_t flat = 0;

  double m() const noexcept { return 0.5 * two_m; }
};

StateIndex state_index(const ModelParams& params, int x, int two_m);
StateIndex decode_flat(const ModelParams& params, std::size_t flat);

/// <j, m+1| J_+ |j, m> = sqrt(j(j+1) - m(m+1)), in the doubled-integer form.
/// Throws DomainError when |m| > j or m - j is not an integer.
double raising_coefficient_twice(int two_j, int two_m);

/// Same as above for real-valued j and m (each must be a multiple of 1/2).
double raising_coefficient(double j, double m);

/// (-1)^(x + m + j), the eigenvalue of the Dicke parity operator on |x; j, m>.
int parity_sign(int x, int two_m, int two_j) noexcept;

/// Dense (2j+1)x(2j+1) row-major representations of J_z, J_+ and J_- in the
/// |j, m> basis ordered by ascending m.
struct SpinMatrices {
  int dim = 0;
  std::vector<double> jz;
  std::vector<double> jplus;
  std::vector<double> jminus;
};

SpinMatrices make_spin_matrices(int two_j);

/// Real orthogonal matrix of exp(+i (pi/2) J_y) in the |j, m_z> basis
/// (row-major, rows m_z, columns m). Satisfies R^T J_z R = J_x and
/// R^T J_x R = -J_z, so column m is the J_x eigenvector with eigenvalue -m.
std::vector<double> quarter_turn_about_y(int two_j);

}  // namespace dicke
