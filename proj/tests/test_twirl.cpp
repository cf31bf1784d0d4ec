#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "hamdistill/hamlib.hpp"
#include "hamdistill/noise.hpp"
#include "hamdistill/twirl.hpp"

using namespace hd;

namespace {

cmat random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  cmat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  cmat r = g * g.adjoint();
  return r / r.trace();
}

cmat evolve(const SpectralHamiltonian& h, double t) {
  const cmat& v = h.spectrum.vectors;
  cvec ph(v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) ph(i) = std::polar(1.0, -h.spectrum.eigenvalues(i) * h.time_scale * t);
  return v * ph.asDiagonal() * v.adjoint();
}

// Direct average of (U_t (x) U_t*) rho (U_t (x) U_t*)^dag over a list of times.
cmat explicit_average(const SpectralHamiltonian& h, const cmat& rho, const std::vector<double>& ts) {
  cmat acc = cmat::Zero(rho.rows(), rho.cols());
  for (double t : ts) {
    const cmat u = evolve(h, t);
    const cmat uu = ab_to_interleaved(kron(u, u.conjugate()), h.n());
    acc += uu * rho * uu.adjoint();
  }
  return acc / static_cast<double>(ts.size());
}

// Infinite-time average built from scratch: keep only frame elements whose
// phase combination vanishes.
cmat brute_delta(const SpectralHamiltonian& h, const cmat& rho) {
  const cmat& v = h.spectrum.vectors;
  const cmat vv = kron(v, v.conjugate());
  const Eigen::Index d = v.cols();
  cmat f = vv.adjoint() * interleaved_to_ab(rho, h.n()) * vv;
  const rvec& l = h.spectrum.eigenvalues;
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index q = 0; q < d; ++q)
          if (std::abs(l(i) - l(j) - l(k) + l(q)) > 1e-8 * scale) f(i * d + j, k * d + q) = 0.0;
  return ab_to_interleaved(vv * f * vv.adjoint(), h.n());
}

const std::vector<Family> kFamilies = {Family::diagonal,   Family::tfim_periodic, Family::trapped_ion,
                                       Family::rydberg,    Family::haar_random,   Family::clifford_diagonal};

}  // namespace

TEST_CASE("EPR ensemble is a fixed point") {
  const std::vector<TimeMeasure> measures = {TimeMeasure::delta(), TimeMeasure::uniform(3.0),
                                             TimeMeasure::sampled({0.3, 1.7, 4.0})};
  for (Family f : kFamilies)
    for (int n : {2, 3}) {
      if (f == Family::tfim_periodic && n < 3) continue;
      const SpectralHamiltonian h = build_hamiltonian({f, n, {}, 5});
      const BranchState e = epr_state(n);
      const cmat rho = e.amp * e.amp.adjoint();
      for (const auto& mu : measures) {
        const DensityOperator out = twirl_density(h, {n, rho}, mu);
        CHECK((out.mat - rho).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
}

TEST_CASE("channel is trace preserving and positive") {
  std::mt19937_64 rng(21);
  for (Family f : kFamilies) {
    const int n = f == Family::tfim_periodic ? 3 : 2;
    const SpectralHamiltonian h = build_hamiltonian({f, n, {}, 3});
    const cmat rho = random_density(1 << (2 * n), rng);
    for (const auto& mu : {TimeMeasure::delta(), TimeMeasure::uniform(1.5)}) {
      const DensityOperator out = twirl_density(h, {n, rho}, mu);
      CHECK(std::abs(out.mat.trace() - 1.0) < 1e-12);
      CHECK((out.mat - out.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<cmat> es(out.mat);
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("sampled and uniform measures match explicit time evolution") {
  std::mt19937_64 rng(5);
  for (Family f : {Family::trapped_ion, Family::rydberg, Family::haar_random}) {
    const SpectralHamiltonian h = build_hamiltonian({f, 2, {}, 8});
    const cmat rho = random_density(16, rng);
    const std::vector<double> ts = {0.0, 0.45, 1.3, 2.9};
    const DensityOperator s = twirl_density(h, {2, rho}, TimeMeasure::sampled(ts));
    CHECK((s.mat - explicit_average(h, rho, ts)).cwiseAbs().maxCoeff() < 1e-11);

    // Midpoint rule on [0, T].
    const double T = 0.25;
    std::vector<double> grid;
    const int K = 4000;
    for (int k = 0; k < K; ++k) grid.push_back((k + 0.5) * T / K);
    const DensityOperator u = twirl_density(h, {2, rho}, TimeMeasure::uniform(T));
    CHECK((u.mat - explicit_average(h, rho, grid)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("delta limit matches a brute-force resonance filter") {
  std::mt19937_64 rng(9);
  // tfim_periodic has degenerate gaps, the others test the generic path.
  for (Family f : kFamilies) {
    const int n = f == Family::tfim_periodic ? 3 : 2;
    const SpectralHamiltonian h = build_hamiltonian({f, n, {}, 4});
    const cmat rho = random_density(1 << (2 * n), rng);
    const DensityOperator out = twirl_density(h, {n, rho}, TimeMeasure::delta());
    CHECK((out.mat - brute_delta(h, rho)).cwiseAbs().maxCoeff() < 1e-10);
    // Idempotence.
    const DensityOperator twice = twirl_density(h, out, TimeMeasure::delta());
    CHECK((twice.mat - out.mat).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("uniform converges to the delta limit") {
  const SpectralHamiltonian h = build_diagonal(3, 11);
  const GapReport gr = check_gap_nondegeneracy(h.spectrum.eigenvalues, 1e-12);
  REQUIRE(gr.pass);
  const double T = 1e4 / (gr.min_collision * h.time_scale);
  std::mt19937_64 rng(2);
  const cmat rho = random_density(64, rng);
  const DensityOperator a = twirl_density(h, {3, rho}, TimeMeasure::uniform(T));
  const DensityOperator b = twirl_density(h, {3, rho}, TimeMeasure::delta());
  CHECK((a.mat - b.mat).cwiseAbs().maxCoeff() < 1e-3);
  // A short window is still far from the limit.
  const DensityOperator c = twirl_density(h, {3, rho}, TimeMeasure::uniform(0.05));
  CHECK((c.mat - b.mat).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("gap filter values") {
  CHECK(gap_filter(TimeMeasure::delta(), 0.0) == cplx(1.0));
  CHECK(gap_filter(TimeMeasure::delta(), 0.2) == cplx(0.0));
  const double T = 2.0, g = 1.3;
  const cplx want = (1.0 - std::exp(cplx(0, -g * T))) / cplx(0, g * T);
  CHECK(std::abs(gap_filter(TimeMeasure::uniform(T), g) - want) < 1e-14);
  CHECK(std::abs(gap_filter(TimeMeasure::uniform(T), 0.0) - 1.0) < 1e-15);
  // Frozen value: g T / 2 = pi gives a zero of the sinc envelope.
  CHECK(std::abs(gap_filter(TimeMeasure::uniform(1.0), 2 * M_PI)) < 1e-15);
  const cplx s = gap_filter(TimeMeasure::sampled({0.0, M_PI}), 1.0);
  CHECK(std::abs(s) < 1e-15);
  CHECK_THROWS_AS(TimeMeasure::uniform(0.0), DomainError);
  CHECK_THROWS_AS(TimeMeasure::sampled({}), DomainError);
}

TEST_CASE("gap clustering") {
  rvec golomb(3);
  golomb << 0.0, 1.0, 3.0;
  const GapClusters g = cluster_gaps(golomb);
  CHECK(g.count == 7);  // the zero gap plus six distinct nonzero gaps
  CHECK_FALSE(g.degenerate);
  rvec ap(3);
  ap << 0.0, 1.0, 2.0;
  const GapClusters a = cluster_gaps(ap);
  CHECK(a.degenerate);
  CHECK(a.count == 5);  // 0, +-1, +-2
  CHECK(a.label[0 * 3 + 1] == a.label[1 * 3 + 2]);
  CHECK(a.label[0 * 3 + 0] == a.label[2 * 3 + 2]);
}

TEST_CASE("frame kernels") {
  std::mt19937_64 rng(31);
  for (int d : {2, 4, 8}) {
    const cmat a = sample_haar_unitary(d, rng), b = sample_haar_unitary(d, rng);
    const cmat x = random_density(d * d, rng);
    const cmat want = kron(a, b) * x;
    CHECK((left_apply(x, a, b, Exec::serial) - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((left_apply(x, a, b, Exec::parallel) - want).cwiseAbs().maxCoeff() < 1e-12);
    const cmat vv = kron(a, a.conjugate());
    const cmat fr = to_frame(x, a);
    CHECK((fr - vv.adjoint() * x * vv).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((from_frame(fr, a) - x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((to_frame(x, a, Exec::serial) - fr).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("branch expectation agrees with the density route") {
  for (Family f : {Family::trapped_ion, Family::rydberg, Family::tfim_periodic}) {
    const SpectralHamiltonian h = build_hamiltonian({f, 3, {}, 6});
    for (const char* p : {"XII", "ZYI", "IXZ"}) {
      const BranchState b = apply_pauli_branch(PauliString::parse(p), epr_state(3));
      for (const auto& mu : {TimeMeasure::delta(), TimeMeasure::uniform(1.0)}) {
        const DensityOperator rho = twirl_density(h, {3, b.amp * b.amp.adjoint()}, mu);
        for (int m = 1; m <= 2; ++m) {
          const MeasurementBasis basis = MeasurementBasis::hadamard();
          const cmat pi = identical_outcome_projector(3, m, basis);
          const double want = (pi * rho.mat).trace().real();
          CHECK(std::abs(twirl_branch_expectation(h, b, Observable::identical_outcome(m, basis), mu) - want) <
                1e-10);
          CHECK(std::abs(twirl_branch_expectation(h, b, Observable::from_dense(pi), mu) - want) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("haar twirl closed forms") {
  for (int d : {2, 3}) {
    const cmat id = cmat::Identity(d * d, d * d);
    const cmat f = swap_operator(d);
    CHECK((haar_second_twirl_oracle(id) - id).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((haar_second_twirl_oracle(f) - f).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((f * f - id).norm() < 1e-14);
  }
  cmat x = cmat::Zero(3, 3);
  x.diagonal() << 1.0, 2.0, 6.0;
  CHECK((haar_first_twirl_oracle(x) - 3.0 * cmat::Identity(3, 3)).norm() < 1e-14);
  CHECK_THROWS_AS(haar_second_twirl_oracle(cmat::Identity(3, 3)), DomainError);

  // Monte-Carlo convergence on a fixed input: error falls with the sample count.
  std::mt19937_64 rng(17);
  const cmat y = random_density(4, rng);
  const cmat ref = haar_second_twirl_oracle(y);
  cmat acc = cmat::Zero(4, 4);
  const int N = 20000;
  for (int i = 0; i < N; ++i) {
    const cmat u = sample_haar_unitary(2, rng);
    const cmat uu = kron(u, u);
    acc += uu * y * uu.adjoint();
  }
  CHECK((acc / N - ref).norm() / ref.norm() < 0.02);
}
