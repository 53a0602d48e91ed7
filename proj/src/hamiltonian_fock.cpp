#include <cmath>
#include <string>

#include "dicke/hamiltonian.hpp"

namespace dicke {

namespace {

std::size_t checked_dim(const ModelParams& params, int x_max, std::size_t cap) {
  if (x_max < 0) throw DomainError("truncation must be >= 0, got " + std::to_string(x_max));
  const std::size_t dim = BasisSpec{BasisKind::Fock, x_max}.dim(params);
  if (dim > cap) throw CapExceeded(dim, cap);
  return dim;
}

}  // namespace

SymmetricMatrix build_fock_hamiltonian(const ModelParams& params, int n_max, std::size_t cap) {
  SymmetricMatrix h(checked_dim(params, n_max, cap));
  const int two_j = params.two_j();
  const double coupling = params.gamma() / std::sqrt(static_cast<double>(params.n_atoms()));

  for (int n = 0; n <= n_max; ++n) {
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      const StateIndex here = state_index(params, n, two_m);
      h.set_diagonal(here.flat, params.omega() * n + params.omega0() * here.m());
      if (n == n_max || coupling == 0.0) continue;

      // a^dag raises n; J_+ + J_- moves m by one either way.
      const double boson = coupling * std::sqrt(n + 1.0);
      if (two_m < two_j) {
        const StateIndex up = state_index(params, n + 1, two_m + 2);
        h.set_pair(up.flat, here.flat, boson * raising_coefficient_twice(two_j, two_m));
      }
      if (two_m > -two_j) {
        const StateIndex down = state_index(params, n + 1, two_m - 2);
        h.set_pair(down.flat, here.flat, boson * raising_coefficient_twice(two_j, two_m - 2));
      }
    }
  }
  return h;
}

SymmetricMatrix build_hamiltonian(const ModelParams& params, const BasisSpec& basis,
                                  std::size_t cap) {
  return basis.kind == BasisKind::Fock ? build_fock_hamiltonian(params, basis.x_max, cap)
                                       : build_coherent_hamiltonian(params, basis.x_max, cap);
}

}  // namespace dicke
