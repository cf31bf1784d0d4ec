#include <doctest.h>

#include <cmath>
#include <random>

#include "hamdistill/hamlib.hpp"
#include "hamdistill/noise.hpp"

using namespace hd;

namespace {

cmat apply_kraus_on_a(const KrausChannel& ch, const cmat& rho) {
  cmat out = cmat::Zero(rho.rows(), rho.cols());
  for (const auto& k : ch.ops) {
    const cmat kk = kron(k, cmat::Identity(2, 2));
    out += kk * rho * kk.adjoint();
  }
  return out;
}

// Explicit Pauli twirl: average of P E(P rho P) P over the four Paulis.
cmat explicit_twirl(const KrausChannel& ch, const cmat& rho) {
  cmat acc = cmat::Zero(rho.rows(), rho.cols());
  for (char c : std::string("IXYZ")) {
    const cmat p = kron(pauli_matrix(PauliString::parse(std::string(1, c))), cmat::Identity(2, 2));
    acc += p * apply_kraus_on_a(ch, p * rho * p) * p;
  }
  return acc / 4.0;
}

cmat epr_density() {
  const BranchState e = epr_state(1);
  return e.amp * e.amp.adjoint();
}

}  // namespace

TEST_CASE("depolarizing product channel") {
  const PauliChannel id = local_depolarizing(3, 0.0);
  CHECK(id.c_identity() == 1.0);
  const PauliWeights w = local_depolarizing(1, 0.2).site(0);
  CHECK(std::abs(w[0] - 0.85) < 1e-15);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(w[static_cast<std::size_t>(k)] - 0.05) < 1e-15);

  const PauliChannel ch = local_depolarizing(3, 0.3);
  double total = 0.0;
  for (const auto& [p, c] : ch.enumerate()) {
    CHECK(c >= 0.0);
    CHECK(std::abs(c - ch.weight(p)) < 1e-15);
    total += c;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(std::abs(ch.c_identity() - std::pow(1 - 0.75 * 0.3, 3)) < 1e-15);
  CHECK(std::abs(ch.weight(PauliString::parse("XIZ")) - 0.775 * 0.075 * 0.075) < 1e-15);
  CHECK_THROWS_AS(local_depolarizing(2, 1.5), DomainError);
  CHECK_THROWS_AS(local_depolarizing(8, 0.1).enumerate(), CapacityError);
}

TEST_CASE("depolarized EPR fidelity") {
  // p = 2/3 reaches the separable Werner boundary.
  const cmat w = pair_state(local_depolarizing(1, 2.0 / 3.0).site(0));
  CHECK(std::abs(state_fidelity({1, w}, epr_state(1)) - 0.5) < 1e-14);
  for (int n = 1; n <= 3; ++n) {
    const cmat one = pair_state(local_depolarizing(1, 0.2).site(0));
    cmat rho = one;
    for (int q = 1; q < n; ++q) rho = kron(rho, one);
    CHECK(std::abs(state_fidelity({n, rho}, epr_state(n)) - std::pow(0.85, n)) < 1e-10);
  }
}

TEST_CASE("dephasing channel") {
  const PauliWeights w = local_dephasing(1, 0.3).site(0);
  CHECK(w[0] == doctest::Approx(0.7));
  CHECK(w[3] == doctest::Approx(0.3));
  CHECK(w[1] == 0.0);
  CHECK(local_dephasing(2, 1.0).weight(PauliString::parse("ZZ")) == 1.0);
  // p = 1/2 removes off-diagonals in the computational basis.
  const KrausChannel half = pauli_kraus(local_dephasing(1, 0.5).site(0));
  cmat rho(2, 2);
  rho << 0.6, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.4;
  const cmat out = half.apply(rho);
  CHECK(std::abs(out(0, 1)) < 1e-15);
  CHECK(std::abs(out(0, 0) - 0.6) < 1e-15);
}

TEST_CASE("amplitude damping") {
  amplitude_damping(0.4).validate();
  cmat one = cmat::Zero(2, 2);
  one(1, 1) = 1.0;
  const cmat ground = amplitude_damping(1.0).apply(one);
  CHECK(std::abs(ground(0, 0) - 1.0) < 1e-15);
  cmat rho(2, 2);
  rho << 0.3, 0.1, 0.1, 0.7;
  CHECK((amplitude_damping(0.0).apply(rho) - rho).norm() < 1e-15);
  const double g = 0.3;
  const PauliWeights d = ptm_diagonal(amplitude_damping(g));
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(std::sqrt(1 - g)));
  CHECK(d[2] == doctest::Approx(std::sqrt(1 - g)));
  CHECK(d[3] == doctest::Approx(1 - g));
  CHECK_THROWS_AS(amplitude_damping(1.2), DomainError);
}

TEST_CASE("pauli twirl weights") {
  for (double g : {0.1, 0.3, 0.7}) {
    const PauliWeights c = pauli_twirl_weights(amplitude_damping(g));
    const double s = std::sqrt(1 - g);
    CHECK(c[0] == doctest::Approx((2 - g + 2 * s) / 4).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(g / 4).epsilon(1e-12));
    CHECK(c[2] == doctest::Approx(g / 4).epsilon(1e-12));
    CHECK(c[3] == doctest::Approx((2 - g - 2 * s) / 4).epsilon(1e-12));
  }
  const PauliWeights dep = pauli_twirl_weights(depolarizing_kraus(0.2));
  CHECK(dep[0] == doctest::Approx(0.85));
  CHECK(dep[3] == doctest::Approx(0.05));
  const PauliWeights z = pauli_twirl_weights(pauli_kraus({0, 0, 0, 1}));
  CHECK(z[3] == doctest::Approx(1.0));

  // The twirled Pauli channel on |Phi+> equals the explicit average.
  for (const KrausChannel& ch : {amplitude_damping(0.3), compose(depolarizing_kraus(0.2), amplitude_damping(0.2)),
                                 depolarizing_kraus(0.4)}) {
    const cmat got = pair_state(pauli_twirl_weights(ch));
    CHECK((got - explicit_twirl(ch, epr_density())).cwiseAbs().maxCoeff() < 1e-10);
  }
  KrausChannel broken{{cmat::Identity(2, 2) * 1.1}};
  CHECK_THROWS_AS(pauli_twirl_weights(broken), DomainError);
}

TEST_CASE("compose order") {
  // Depolarize first, then damp: the result differs from the reverse order.
  const KrausChannel a = compose(depolarizing_kraus(0.2), amplitude_damping(0.3));
  const KrausChannel b = compose(amplitude_damping(0.3), depolarizing_kraus(0.2));
  a.validate();
  cmat rho(2, 2);
  rho << 0.2, 0.3, 0.3, 0.8;
  const cmat seq = amplitude_damping(0.3).apply(depolarizing_kraus(0.2).apply(rho));
  CHECK((a.apply(rho) - seq).norm() < 1e-14);
  CHECK((b.apply(rho) - seq).norm() > 1e-6);
}

TEST_CASE("bell diagonal bookkeeping") {
  const BellDiagonal z = bell_diagonal_from_rates(0, 0);
  CHECK(z.p00 == 1.0);
  const BellDiagonal s = bell_diagonal_from_rates(0.1, 0.2);
  CHECK(s.p00 == doctest::Approx(0.72));
  CHECK(s.p01 == doctest::Approx(0.08));
  CHECK(s.p10 == doctest::Approx(0.18));
  CHECK(s.p11 == doctest::Approx(0.02));
  CHECK(s.bit_error() == doctest::Approx(0.1));
  CHECK(s.phase_error() == doctest::Approx(0.2));
  const BellDiagonal w = werner(0.2);
  CHECK(w.p00 == doctest::Approx(0.85));
  CHECK(w.p11 == doctest::Approx(0.05));
  CHECK_THROWS_AS((BellDiagonal{0.5, 0.5, 0.5, 0.0}).validate(), DomainError);
}

TEST_CASE("pauli branches on EPR pairs") {
  const BranchState e = epr_state(1);
  CHECK((apply_pauli_branch(PauliString::parse("I"), e).amp - e.amp).norm() == 0.0);
  const BranchState x = apply_pauli_branch(PauliString::parse("X"), e);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(x.amp(1) - s) < 1e-15);
  CHECK(std::abs(x.amp(2) - s) < 1e-15);
  CHECK(std::abs(x.amp(0)) < 1e-15);

  // (P (x) Q)|Phi+> = (P Q^T (x) I)|Phi+>.
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint64_t> u(0, 15);
  const BranchState e2 = epr_state(2);
  for (int k = 0; k < 20; ++k) {
    const cmat p = pauli_matrix(PauliString::from_index(2, u(rng)));
    const cmat q = pauli_matrix(PauliString::from_index(2, u(rng)));
    const cvec lhs = ab_to_interleaved(kron(p, q), 2) * e2.amp;
    const cvec rhs = ab_to_interleaved(kron(p * q.transpose(), cmat::Identity(4, 4)), 2) * e2.amp;
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("sampling matches the product weights") {
  const PauliChannel ch(2, PauliWeights{0.7, 0.1, 0.05, 0.15});
  std::mt19937_64 rng(12);
  std::map<std::string, int> counts;
  const int N = 200000;
  for (int i = 0; i < N; ++i) ++counts[ch.sample(rng).str()];
  for (const auto& [p, c] : ch.enumerate()) {
    const double f = static_cast<double>(counts[p.str()]) / N;
    CHECK(std::abs(f - c) < 5 * std::sqrt(c * (1 - c) / N) + 1e-12);
  }
  // Conditional draws never return the identity and follow c_P / (1 - c_I).
  std::map<std::string, int> cond;
  for (int i = 0; i < N; ++i) {
    const PauliString p = ch.sample_non_identity(rng);
    CHECK_FALSE(p.is_identity());
    ++cond[p.str()];
  }
  const double q = 1 - ch.c_identity();
  for (const auto& [p, c] : ch.enumerate()) {
    if (p.is_identity()) continue;
    const double f = static_cast<double>(cond[p.str()]) / N, want = c / q;
    CHECK(std::abs(f - want) < 5 * std::sqrt(want * (1 - want) / N) + 1e-12);
  }
}
