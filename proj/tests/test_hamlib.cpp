#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "hamdistill/hamlib.hpp"
#include "hamdistill/twirl.hpp"

using namespace hd;

namespace {

constexpr double kTau = 6.283185307179586;

// Naive term-by-term builders used as oracles.
cmat site(int n, int q, const cmat& op) {
  cmat r = cmat::Identity(1, 1);
  for (int k = 0; k < n; ++k) r = kron(r, k == q ? op : cmat::Identity(2, 2));
  return r;
}

cmat pauli1(char c) { return pauli_matrix(PauliString::parse(std::string(1, c))); }

cmat naive_ion(int n, double j0, double b, double alpha) {
  const auto d = static_cast<Eigen::Index>(pow2(n));
  cmat h = cmat::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) h += j0 / std::pow(j - i, alpha) * site(n, i, pauli1('X')) * site(n, j, pauli1('X'));
  for (int i = 0; i < n; ++i) h += b * site(n, i, pauli1('Z'));
  return h;
}

double reconstruct_err(const SpectralHamiltonian& h) {
  const cmat& u = h.spectrum.vectors;
  return (u * h.spectrum.eigenvalues.cast<cplx>().asDiagonal() * u.adjoint() - h.matrix).cwiseAbs().maxCoeff();
}

// Pauli expansion coefficients of an operator.
std::vector<cplx> pauli_coeffs(const cmat& op, int n) {
  std::vector<cplx> c;
  const double d = static_cast<double>(pow2(n));
  for (std::uint64_t i = 0; i < pow2(2 * n); ++i)
    c.push_back((pauli_matrix(PauliString::from_index(n, i)).adjoint() * op).trace() / d);
  return c;
}

}  // namespace

TEST_CASE("every family is Hermitian and reconstructs") {
  for (Family f : {Family::diagonal, Family::tfim_periodic, Family::trapped_ion, Family::rydberg,
                   Family::haar_random, Family::clifford_diagonal})
    for (int n : {3, 4}) {
      const SpectralHamiltonian h = build_hamiltonian({f, n, {}, 9});
      CHECK(is_hermitian(h.matrix, 1e-10));
      CHECK(reconstruct_err(h) <= 1e-9 * std::max(1.0, h.matrix.cwiseAbs().maxCoeff()));
      CHECK(h.spectrum.eigenvalues.allFinite());
    }
  CHECK(parse_family("trapped_ion") == Family::trapped_ion);
  CHECK(family_name(Family::clifford_diagonal) == "clifford_diagonal");
  CHECK_THROWS_AS(parse_family("ising"), DomainError);
}

TEST_CASE("rydberg construction") {
  const double c6 = kTau * 862890.0;
  const SpectralHamiltonian h = build_rydberg(2, kTau, kTau * 2.5, c6, 6.0, 0.0);
  // |rr> is index 3; V12 = C/6^6 on top of -2 Delta.
  CHECK(std::abs(h.matrix(3, 3).real() - (c6 / std::pow(6.0, 6) - 2 * kTau * 2.5)) < 1e-9);
  CHECK(std::abs(h.matrix(0, 1) - cplx(kTau / 2, 0)) < 1e-12);
  CHECK(h.time_unit_label == "us");

  const SpectralHamiltonian z = build_rydberg(3, 0.0, 0.0, 64.0, 1.0, 0.0);
  cmat expect = cmat::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    double e = 0;
    const int r[3] = {(b >> 2) & 1, (b >> 1) & 1, b & 1};
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k)
        if (r[j] && r[k]) e += 64.0 / std::pow(k - j, 6);
    expect(b, b) = e;
  }
  CHECK((z.matrix - expect).norm() < 1e-12);
  CHECK_THROWS_AS(build_rydberg(2, 1, 1, 1, 0.0, 0), DomainError);

  // A nonzero drive phase keeps the operator Hermitian.
  CHECK(is_hermitian(build_rydberg(3, 1.0, 0.3, 5.0, 1.0, 0.7).matrix, 1e-12));
}

TEST_CASE("trapped ion construction") {
  const SpectralHamiltonian h = build_trapped_ion(5, kTau, 2 * kTau, 1.0);
  CHECK((h.matrix - naive_ion(5, kTau, 2 * kTau, 1.0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(h.time_unit_label == "ms");

  const SpectralHamiltonian xx = build_trapped_ion(2, 1.5, 0.0, 1.0);
  CHECK(std::abs(xx.spectrum.eigenvalues(0) + 1.5) < 1e-12);
  CHECK(std::abs(xx.spectrum.eigenvalues(1) + 1.5) < 1e-12);
  CHECK(std::abs(xx.spectrum.eigenvalues(2) - 1.5) < 1e-12);
  CHECK(std::abs(xx.spectrum.eigenvalues(3) - 1.5) < 1e-12);

  // Large alpha keeps only nearest-neighbour couplings.
  const SpectralHamiltonian cut = build_trapped_ion(3, 1.0, 0.0, 200.0);
  const cmat nn = site(3, 0, pauli1('X')) * site(3, 1, pauli1('X')) + site(3, 1, pauli1('X')) * site(3, 2, pauli1('X'));
  CHECK((cut.matrix - nn).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(build_trapped_ion(1, 1, 1, 1), DomainError);
}

TEST_CASE("periodic TFIM construction") {
  const SpectralHamiltonian h = build_tfim_periodic(3, 1.0, 0.0);
  const cmat x0 = site(3, 0, pauli1('X')), x1 = site(3, 1, pauli1('X')), x2 = site(3, 2, pauli1('X'));
  const cmat ref = x0 * x1 + x1 * x2 + x2 * x0;
  Eigen::SelfAdjointEigenSolver<cmat> es(ref);
  CHECK((h.spectrum.eigenvalues - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);

  // One-site cyclic shift symmetry.
  const SpectralHamiltonian t = build_tfim_periodic(4, 0.7, 1.3);
  cmat shift = cmat::Zero(16, 16);
  for (int b = 0; b < 16; ++b) shift(((b >> 1) | ((b & 1) << 3)), b) = 1.0;
  CHECK((shift * t.matrix * shift.adjoint() - t.matrix).cwiseAbs().maxCoeff() < 1e-12);

  // Free spins: eigenvalues b (n - 2k).
  const SpectralHamiltonian f = build_tfim_periodic(3, 0.0, 0.5);
  std::vector<double> ev(f.spectrum.eigenvalues.data(), f.spectrum.eigenvalues.data() + 8);
  const std::vector<double> want = {-1.5, -0.5, -0.5, -0.5, 0.5, 0.5, 0.5, 1.5};
  for (int i = 0; i < 8; ++i) CHECK(std::abs(ev[static_cast<std::size_t>(i)] - want[static_cast<std::size_t>(i)]) < 1e-12);
  CHECK_THROWS_AS(build_tfim_periodic(2, 1, 1), DomainError);
  CHECK_FALSE(check_gap_nondegeneracy(build_tfim_periodic(4, kTau, 2 * kTau).spectrum.eigenvalues, 1e-9).pass);
}

TEST_CASE("diagonal family satisfies the gap condition and is reproducible") {
  for (int n = 1; n <= 10; ++n) {
    const SpectralHamiltonian h = build_diagonal(n, 42);
    if (n >= 2) CHECK(check_gap_nondegeneracy(h.spectrum.eigenvalues, 1e-9).pass);
    CHECK(h.permutation);
    const double spread = h.spectrum.eigenvalues.maxCoeff() - h.spectrum.eigenvalues.minCoeff();
    if (n >= 2) CHECK(std::abs(spread - kTau) < 1e-9);
    const SpectralHamiltonian again = build_diagonal(n, 42);
    CHECK((again.matrix - h.matrix).norm() == 0.0);
  }
  CHECK((build_diagonal(4, 1).matrix - build_diagonal(4, 2).matrix).norm() > 0.0);
}

TEST_CASE("gap report") {
  rvec ap(3);
  ap << 0, 1, 2;
  CHECK_FALSE(check_gap_nondegeneracy(ap, 1e-9).pass);
  rvec ok(4);
  ok << 0, 1, 2.718, 3.1416;
  const GapReport r = check_gap_nondegeneracy(ok, 1e-6);
  CHECK(r.pass);
  CHECK(std::abs(r.min_spacing - (3.1416 - 2.718)) < 1e-12);
  // Pairwise oracle for the collision distance.
  std::vector<double> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) g.push_back(ok(i) - ok(j));
  double best = 1e9;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b) best = std::min(best, std::abs(g[a] - g[b]));
  CHECK(std::abs(r.min_collision - best) < 1e-12);
  rvec dup(2);
  dup << 1.0, 1.0;
  CHECK_FALSE(check_gap_nondegeneracy(dup, 1e-9).pass);
}

TEST_CASE("haar unitaries") {
  for (int d : {2, 4, 8}) CHECK(is_unitary(sample_haar_unitary(d, std::uint64_t{5}), 1e-10));
  CHECK((sample_haar_unitary(4, std::uint64_t{5}) - sample_haar_unitary(4, std::uint64_t{5})).norm() == 0.0);
  // First moment: U X U^dag averages to tr(X) I / d.
  std::mt19937_64 rng(77);
  cmat x = cmat::Zero(2, 2);
  x << 1.0, cplx(0.3, 0.2), cplx(0.3, -0.2), -0.4;
  cmat acc = cmat::Zero(2, 2);
  const int N = 4000;
  for (int i = 0; i < N; ++i) {
    const cmat u = sample_haar_unitary(2, rng);
    acc += u * x * u.adjoint();
  }
  acc /= N;
  CHECK((acc - haar_first_twirl_oracle(x)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("random cliffords map Paulis to Paulis") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const cmat c = sample_random_clifford(2, 6, seed);
    CHECK(is_unitary(c, 1e-10));
    for (const char* p : {"XI", "ZI", "IY"}) {
      const auto coeffs = pauli_coeffs(c * pauli_matrix(PauliString::parse(p)) * c.adjoint(), 2);
      int nonzero = 0;
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (std::abs(coeffs[i]) > 1e-10) {
          ++nonzero;
          CHECK(std::abs(std::abs(coeffs[i]) - 1.0) < 1e-10);
          CHECK(i != 0);  // never the identity
        }
      CHECK(nonzero == 1);
    }
  }
  CHECK_THROWS_AS(sample_random_clifford(2, 0, 1), DomainError);
}

TEST_CASE("clifford diagonal family") {
  const SpectralHamiltonian h = build_clifford_diagonal(3, 9, 4);
  CHECK(h.clifford.rows() == 8);
  CHECK(is_unitary(h.clifford, 1e-10));
  // H = C D C^dag with D the seeded diagonal spectrum.
  const cmat back = h.clifford.adjoint() * h.matrix * h.clifford;
  CHECK((back - cmat(back.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 5) == mix_seed(1, 5));
  CHECK(mix_seed(2, 5) != mix_seed(1, 5));
}
