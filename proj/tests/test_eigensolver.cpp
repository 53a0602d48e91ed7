#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dicke/eigensolver.hpp"
#include "dicke/hamiltonian.hpp"
#include "support/oracles.hpp"

using namespace dicke;

namespace {

SymmetricMatrix from_dense(const oracle::Dense& a, std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    m.set_diagonal(r, a[r * n + r]);
    for (std::size_t c = r + 1; c < n; ++c) m.set_pair(r, c, a[r * n + c]);
  }
  return m;
}

}  // namespace

TEST_CASE("diagonal input gives the sorted diagonal and a permutation") {
  SymmetricMatrix m(5);
  const double diag[] = {3.0, -1.0, 2.5, 0.0, 7.0};
  for (std::size_t i = 0; i < 5; ++i) m.set_diagonal(i, diag[i]);
  const auto d = eigh(m);
  const std::vector<double> sorted = {-1.0, 0.0, 2.5, 3.0, 7.0};
  CHECK(d.energies == sorted);
  for (std::size_t col = 0; col < 5; ++col) {
    int ones = 0;
    for (double v : d.vector(col)) {
      CHECK((v == 0.0 || v == 1.0));
      ones += v == 1.0;
    }
    CHECK(ones == 1);
  }
}

TEST_CASE("2x2 off-diagonal matrix") {
  const double c = 0.75;
  SymmetricMatrix m(2);
  m.set_pair(0, 1, c);
  const auto d = eigh(m);
  CHECK(d.energies[0] == doctest::Approx(-c));
  CHECK(d.energies[1] == doctest::Approx(c));
  const double s = 1 / std::sqrt(2.0);
  CHECK(d.vector(0)[0] == doctest::Approx(s));
  CHECK(d.vector(0)[1] == doctest::Approx(-s));
  CHECK(d.vector(1)[0] == doctest::Approx(s));
  CHECK(d.vector(1)[1] == doctest::Approx(s));
}

TEST_CASE("decoupled Dicke spectrum at j=10, n_max=15") {
  const auto p = make_params(1, 1, 0.0, 10);
  const auto d = eigh(build_fock_hamiltonian(p, 15));
  const auto exact = oracle::decoupled_spectrum(1, 1, 10, 15);
  REQUIRE(d.energies.size() == 336);
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(d.energies[i] == doctest::Approx(exact[i]).epsilon(1e-12));
}

TEST_CASE("eigenvalues agree with a Jacobi reference on random matrices") {
  oracle::Rng rng(20261016);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 40));
    oracle::Dense a(n * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r; c < n; ++c) a[r * n + c] = a[c * n + r] = rng.uniform(-2, 2);
    const auto m = from_dense(a, n);
    const auto ref = oracle::jacobi_eigenvalues(a, n);
    const auto d = eigh(m);
    const auto values = eigvalsh(m);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d.energies[i] == doctest::Approx(ref[i]).epsilon(1e-10).scale(1.0));
      CHECK(values[i] == doctest::Approx(ref[i]).epsilon(1e-10).scale(1.0));
    }
    CHECK(residual(m, d) < 1e-13);
    CHECK(orthonormality_error(d) < 1e-12);
  }
}

TEST_CASE("residual, orthonormality and trace on a Dicke run") {
  const auto p = make_params(1, 1, 0.5, 10);
  const auto h = build_fock_hamiltonian(p, 15);
  const auto d = eigh(h);
  CHECK(residual(h, d) <= 1e-11);
  CHECK(orthonormality_error(d) <= 1e-10);
  double sum = 0.0;
  for (double e : d.energies) sum += e;
  CHECK(std::abs(sum - h.trace()) <= 1e-9 * std::max(1.0, std::abs(h.trace())));
  CHECK(std::is_sorted(d.energies.begin(), d.energies.end()));

  // Flip one component of one column.
  auto corrupted = d;
  const std::size_t col = 3;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < corrupted.dim; ++i) {
    if (std::abs(corrupted.vectors[col * corrupted.dim + i]) > std::abs(corrupted.vectors[col * corrupted.dim + idx])) idx = i;
  }
  corrupted.vectors[col * corrupted.dim + idx] *= -1;
  CHECK(residual(h, corrupted) > 1e-6 * 1e3);
  CHECK_THROWS_AS(residual(build_fock_hamiltonian(p, 14), d), DimensionMismatch);
}

TEST_CASE("sign convention and determinism") {
  const auto p = make_params(1, 1, 0.9, 4);
  const auto a = solve(p, {BasisKind::Coherent, 10});
  const auto b = solve(p, {BasisKind::Coherent, 10});
  CHECK(std::equal(a.decomposition().vectors.begin(), a.decomposition().vectors.end(),
                   b.decomposition().vectors.begin()));
  CHECK(std::equal(a.energies().begin(), a.energies().end(), b.energies().begin()));
  for (std::size_t k = 1; k <= a.dim(); ++k) {
    const auto v = a.state(k);
    const auto largest = *std::max_element(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    CHECK(largest > 0.0);
  }
}

TEST_CASE("interlacing across truncation increments") {
  const auto p = make_params(1, 1, 0.8, 2);
  for (auto kind : {BasisKind::Fock, BasisKind::Coherent}) {
    auto previous = eigvalsh(build_hamiltonian(p, {kind, 2}));
    for (int x = 3; x <= 12; ++x) {
      const auto current = eigvalsh(build_hamiltonian(p, {kind, x}));
      for (std::size_t k = 0; k < previous.size(); ++k) CHECK(current[k] <= previous[k] + 1e-12);
      previous = current;
    }
  }
}

TEST_CASE("Fock eigenstates have definite parity") {
  const auto p = make_params(1, 1, 0.4, 3);
  const auto s = solve(p, {BasisKind::Fock, 12});
  const auto energies = s.energies();
  for (std::size_t k = 1; k <= s.dim(); ++k) {
    const double gap_below = k > 1 ? energies[k - 1] - energies[k - 2] : 1.0;
    const double gap_above = k < s.dim() ? energies[k] - energies[k - 1] : 1.0;
    if (std::min(gap_below, gap_above) < 1e-6) continue;
    double graded = 0.0;
    const auto v = s.state(k);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto idx = decode_flat(p, i);
      graded += parity_sign(idx.x, idx.two_m, p.two_j()) * v[i] * v[i];
    }
    CHECK(std::abs(graded) > 1 - 1e-6);
  }
}

TEST_CASE("non-finite input is rejected") {
  SymmetricMatrix m(3);
  m.set_diagonal(1, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(eigh(m), DomainError);
  CHECK_THROWS_AS(eigvalsh(m), DomainError);
}

TEST_CASE("EigenSolution state numbering is 1-based") {
  const auto p = make_params(1, 1, 0.3, 1);
  const auto s = solve(p, {BasisKind::Fock, 2});
  CHECK(s.dim() == 9);
  CHECK(s.energy(1) == s.energies()[0]);
  CHECK_THROWS_AS(s.state(0), DomainError);
  CHECK_THROWS_AS(s.state(10), DomainError);
  CHECK(s.coefficient(1, 0, -2) == s.state(1)[0]);
}
