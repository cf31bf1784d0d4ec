#include <doctest.h>

#include <random>

#include "hamdistill/hamlib.hpp"
#include "hamdistill/noise.hpp"
#include "hamdistill/qcore.hpp"

using namespace hd;

namespace {

cmat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  cmat x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = cplx(nd(rng), nd(rng));
  return 0.5 * (x + x.adjoint());
}

PauliString random_pauli(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ph(0, 3);
  const char* letters = "IXYZ";
  std::string s;
  for (int q = 0; q < n; ++q) s += letters[ph(rng)];
  static const char* pre[] = {"", "i", "-", "-i"};
  return PauliString::parse(pre[ph(rng)] + s);
}

}  // namespace

TEST_CASE("pauli matrix basics") {
  const cmat zi = pauli_matrix(PauliString::parse("ZI"));
  cmat expect = cmat::Zero(4, 4);
  expect.diagonal() << 1, 1, -1, -1;
  CHECK((zi - expect).norm() < 1e-15);

  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    PauliString p = random_pauli(3, rng);
    if (p.is_identity()) continue;
    CHECK(std::abs(pauli_matrix(p).trace()) < 1e-12);
  }

  const PauliString x = PauliString::parse("X"), z = PauliString::parse("Z");
  const PauliString xz = x * z;
  CHECK(xz == PauliString::parse("-iY"));
  CHECK((pauli_matrix(xz) + pauli_matrix(z * x)).norm() < 1e-15);
  CHECK_FALSE(x.commutes_with(z));
  CHECK(PauliString::parse("XX").commutes_with(PauliString::parse("ZZ")));
}

TEST_CASE("pauli string bookkeeping") {
  const PauliString p = PauliString::parse("XYZI");
  CHECK(p.weight() == 3);
  CHECK(p.x_mask() == 0b1100);
  CHECK(p.z_mask() == 0b0110);
  CHECK(p.y_count() == 1);
  CHECK(p.slice(1, 2).str() == "YZ");
  CHECK(PauliString::from_masks(4, p.x_mask(), p.z_mask()).str() == "XYZI");
  for (std::uint64_t i = 0; i < 16; ++i) CHECK(PauliString::from_index(2, i).n() == 2);
  CHECK(PauliString::from_index(2, 0).is_identity());
  CHECK_THROWS_AS(PauliString::parse("XQ"), DomainError);
}

TEST_CASE("pauli group homomorphism on random pairs") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const PauliString a = random_pauli(3, rng), b = random_pauli(3, rng);
    CHECK((pauli_matrix(a * b) - pauli_matrix(a) * pauli_matrix(b)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("epr state") {
  const BranchState e1 = epr_state(1);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(e1.amp(0) - s) < 1e-15);
  CHECK(std::abs(e1.amp(3) - s) < 1e-15);
  CHECK(std::abs(e1.amp(1)) + std::abs(e1.amp(2)) == 0.0);

  const BranchState e2 = epr_state(2);
  CHECK(std::abs(e2.amp.norm() - 1.0) < 1e-14);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const cmat u = sample_haar_unitary(4, rng);
    const cmat op = ab_to_interleaved(kron(u, u.conjugate()), 2);
    CHECK(std::abs(e2.amp.dot(op * e2.amp) - 1.0) < 1e-10);
  }
  const BranchState e3 = epr_state(3);
  CHECK(std::abs(state_fidelity({3, e3.amp * e3.amp.adjoint()}, e3) - 1.0) < 1e-12);
  CHECK_THROWS_AS(epr_state(14), CapacityError);
}

TEST_CASE("interleaving round trips") {
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      std::size_t a2 = 0, b2 = 0;
      deinterleave(interleave(a, b, 3), 3, a2, b2);
      CHECK(a2 == a);
      CHECK(b2 == b);
    }
  // a = 0b10, b = 0b01 -> A0=1 B0=0 A1=0 B1=1.
  CHECK(interleave(2, 1, 2) == 0b1001);
  std::mt19937_64 rng(5);
  const cmat x = random_hermitian(16, rng);
  CHECK((ab_to_interleaved(interleaved_to_ab(x, 2), 2) - x).norm() < 1e-13);
  // (A (x) B)|psi> is A Psi B^T in the AB matrix picture.
  const cmat a = sample_haar_unitary(4, rng), b = sample_haar_unitary(4, rng);
  const BranchState e = epr_state(2);
  const cvec lhs = ab_to_interleaved(kron(a, b), 2) * e.amp;
  const BranchState rhs = from_ab_matrix(a * to_ab_matrix(e) * b.transpose());
  CHECK((lhs - rhs.amp).norm() < 1e-12);
}

TEST_CASE("identical outcome projector") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= n; ++m)
      for (auto basis : {MeasurementBasis::computational(), MeasurementBasis::hadamard()}) {
        const cmat pi = identical_outcome_projector(n, m, basis);
        const double d = static_cast<double>(pow2(n));
        CHECK((pi * pi - pi).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((pi - pi.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs((d * d - pi.trace().real()) - d * d * (1.0 - std::ldexp(1.0, -m))) < 1e-9);
        const BranchState e = epr_state(n);
        CHECK(std::abs(e.amp.dot(pi * e.amp).real() - 1.0) < 1e-12);
        if (m == 0) CHECK((pi - cmat::Identity(pi.rows(), pi.cols())).norm() < 1e-12);
      }
  // A Z error on a Hadamard-measured pair is always detected.
  const cmat pi = identical_outcome_projector(1, 1, MeasurementBasis::hadamard());
  const BranchState z = apply_pauli_branch(PauliString::parse("Z"), epr_state(1));
  CHECK(std::abs(z.amp.dot(pi * z.amp)) < 1e-14);
  // ...but survives a computational-basis comparison.
  const cmat pc = identical_outcome_projector(1, 1, MeasurementBasis::computational());
  CHECK(std::abs(z.amp.dot(pc * z.amp) - 1.0) < 1e-14);
  CHECK_THROWS_AS(identical_outcome_projector(2, 3, MeasurementBasis::hadamard()), DomainError);

  // Clifford-conjugated basis is still a projector with the same rank.
  const cmat c = sample_random_clifford(2, 6, 4);
  const cmat pcc = identical_outcome_projector(2, 1, MeasurementBasis::clifford_conjugated(c));
  CHECK((pcc * pcc - pcc).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(pcc.trace().real() - 8.0) < 1e-9);
}

TEST_CASE("state fidelity") {
  const BranchState e = epr_state(2);
  const cmat mixed = cmat::Identity(16, 16) / 16.0;
  CHECK(std::abs(state_fidelity({2, mixed}, e) - 1.0 / 16.0) < 1e-15);
  for (double p : {0.0, 0.1, 0.2, 0.5}) {
    const cmat w = pair_state(local_depolarizing(1, p).site(0));
    CHECK(std::abs(state_fidelity({1, w}, epr_state(1)) - (1.0 - 0.75 * p)) < 1e-14);
  }
  CHECK_THROWS_AS(state_fidelity({1, cmat::Identity(4, 4)}, e), DomainError);
}

TEST_CASE("eigendecompose") {
  cmat dg = cmat::Zero(4, 4);
  dg.diagonal() << 3.0, -1.0, 2.0, 0.5;
  const SpectralDecomposition s = eigendecompose(dg);
  CHECK(s.eigenvalues(0) == -1.0);
  CHECK(s.eigenvalues(3) == 3.0);
  CHECK(((s.vectors * s.eigenvalues.cast<cplx>().asDiagonal() * s.vectors.adjoint()) - dg).norm() < 1e-14);
  // Columns are unit vectors (a permutation up to phases).
  CHECK((s.vectors.cwiseAbs().colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);

  const SpectralDecomposition sx = eigendecompose(pauli_matrix(PauliString::parse("X")));
  CHECK(std::abs(sx.eigenvalues(0) + 1.0) < 1e-14);
  CHECK(std::abs(sx.eigenvalues(1) - 1.0) < 1e-14);

  std::mt19937_64 rng(11);
  const cmat h = random_hermitian(16, rng);
  const SpectralDecomposition sh = eigendecompose(h);
  const cmat rec = sh.vectors * sh.eigenvalues.cast<cplx>().asDiagonal() * sh.vectors.adjoint();
  CHECK((rec - h).cwiseAbs().maxCoeff() <= 1e-9 * h.cwiseAbs().maxCoeff());
  CHECK(is_unitary(sh.vectors, 1e-10));
  for (Eigen::Index i = 1; i < 16; ++i) CHECK(sh.eigenvalues(i - 1) <= sh.eigenvalues(i));

  cmat bad = h;
  bad(0, 1) += 1.0;
  CHECK_THROWS_AS(eigendecompose(bad), DomainError);
}

TEST_CASE("local unitary invariance of EPR pairs for built unitaries") {
  for (Family f : {Family::trapped_ion, Family::rydberg, Family::haar_random}) {
    const SpectralHamiltonian h = build_hamiltonian({f, 3, {}, 2});
    const cmat& u = h.spectrum.vectors;
    const BranchState e = epr_state(3);
    const cvec out = ab_to_interleaved(kron(u, u.conjugate()), 3) * e.amp;
    CHECK((out - e.amp).norm() < 1e-10);
  }
}
