#include "dicke/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dicke/hamiltonian.hpp"

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
void dgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k,
            const double* alpha, const double* a, const int* lda, const double* b,
            const int* ldb, const double* beta, double* c, const int* ldc);
}

namespace dicke {

namespace {

int lapack_dim(std::size_t dim) {
  if (dim > 46340) throw CapExceeded(dim, 46340);
  return static_cast<int>(dim);
}

// Runs dsyevd on a copy of h. On return `a` holds eigenvectors when
// want_vectors, and the eigenvalues are returned ascending.
std::vector<double> run_dsyevd(const SymmetricMatrix& h, bool want_vectors, std::vector<double>& a) {
  if (!h.all_finite()) throw DomainError("Hamiltonian has non-finite entries");
  const int n = lapack_dim(h.dim());
  std::vector<double> w(h.dim());
  if (n == 0) return w;
  a.assign(h.entries().begin(), h.entries().end());

  const char jobz = want_vectors ? 'V' : 'N';
  const char uplo = 'L';
  int info = 0;
  int lwork = -1;
  int liwork = -1;
  double work_query = 0.0;
  int iwork_query = 0;
  dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), &work_query, &lwork, &iwork_query, &liwork,
          &info);
  if (info != 0) throw SolverError("dsyevd workspace query failed", info);

  lwork = static_cast<int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<std::size_t>(std::max(1, lwork)));
  std::vector<int> iwork(static_cast<std::size_t>(std::max(1, liwork)));
  dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork,
          &info);
  if (info < 0) throw SolverError("dsyevd rejected argument " + std::to_string(-info), info);
  if (info > 0) {
    throw SolverError("eigensolver failed to converge (index " + std::to_string(info) + ")", info);
  }
  return w;
}

void fix_signs(Eigendecomposition& d) {
  for (std::size_t col = 0; col < d.dim; ++col) {
    double* v = d.vectors.data() + col * d.dim;
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.dim; ++i) {
      if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    if (v[best] < 0.0) {
      for (std::size_t i = 0; i < d.dim; ++i) v[i] = -v[i];
    }
  }
}

}  // namespace

Eigendecomposition eigh(const SymmetricMatrix& h) {
  Eigendecomposition d;
  d.dim = h.dim();
  d.energies = run_dsyevd(h, true, d.vectors);
  fix_signs(d);
  return d;
}

std::vector<double> eigvalsh(const SymmetricMatrix& h) {
  std::vector<double> scratch;
  return run_dsyevd(h, false, scratch);
}

EigenSolution::EigenSolution(const ModelParams& params, const BasisSpec& basis,
                             Eigendecomposition decomposition)
    : params_(params), basis_(basis), decomposition_(std::move(decomposition)) {
  if (decomposition_.dim != basis_.dim(params_)) {
    throw DimensionMismatch("decomposition dimension does not match the basis");
  }
}

void EigenSolution::check_state(std::size_t k) const {
  if (k < 1 || k > dim()) {
    throw DomainError("state number " + std::to_string(k) + " outside 1.." +
                      std::to_string(dim()));
  }
}

double EigenSolution::energy(std::size_t k) const {
  check_state(k);
  return decomposition_.energies[k - 1];
}

std::span<const double> EigenSolution::state(std::size_t k) const {
  check_state(k);
  return decomposition_.vector(k - 1);
}

double EigenSolution::coefficient(std::size_t k, int x, int two_m) const {
  if (x > basis_.x_max) throw DomainError("layer beyond truncation");
  return state(k)[state_index(params_, x, two_m).flat];
}

EigenSolution solve(const ModelParams& params, const BasisSpec& basis, std::size_t cap) {
  return EigenSolution(params, basis, eigh(build_hamiltonian(params, basis, cap)));
}

double residual(const SymmetricMatrix& h, const Eigendecomposition& d) {
  if (h.dim() != d.dim || d.vectors.size() != d.dim * d.dim) {
    throw DimensionMismatch("residual: matrix and decomposition sizes differ");
  }
  if (d.dim == 0) return 0.0;
  const int n = lapack_dim(d.dim);
  // H V (H is symmetric, so its row-major storage is also column-major).
  std::vector<double> hv(d.dim * d.dim);
  const char no = 'N';
  const double one = 1.0;
  const double zero = 0.0;
  dgemm_(&no, &no, &n, &n, &n, &one, h.entries().data(), &n, d.vectors.data(), &n, &zero,
         hv.data(), &n);
  double worst = 0.0;
  for (std::size_t col = 0; col < d.dim; ++col) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d.dim; ++i) {
      const double r = hv[col * d.dim + i] - d.energies[col] * d.vectors[col * d.dim + i];
      sum += r * r;
    }
    worst = std::max(worst, std::sqrt(sum));
  }
  return worst / std::max(1.0, h.frobenius_norm());
}

double residual(const SymmetricMatrix& h, const EigenSolution& solution) {
  return residual(h, solution.decomposition());
}

double orthonormality_error(const Eigendecomposition& d) {
  if (d.dim == 0) return 0.0;
  const int n = lapack_dim(d.dim);
  std::vector<double> gram(d.dim * d.dim);
  const char trans = 'T';
  const char no = 'N';
  const double one = 1.0;
  const double zero = 0.0;
  dgemm_(&trans, &no, &n, &n, &n, &one, d.vectors.data(), &n, d.vectors.data(), &n, &zero,
         gram.data(), &n);
  double worst = 0.0;
  for (std::size_t r = 0; r < d.dim; ++r) {
    for (std::size_t c = 0; c < d.dim; ++c) {
      const double target = r == c ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(gram[r * d.dim + c] - target));
    }
  }
  return worst;
}

}  // namespace dicke
