#include <doctest.h>

#include <omp.h>

#include <random>

#include "hamdistill/distill.hpp"
#include "hamdistill/otoc.hpp"
#include "hamdistill/twirl.hpp"

using namespace hd;

// Parallel kernels against their serial references, under several team sizes.

namespace {

cmat random_matrix(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  cmat x(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = cplx(nd(rng), nd(rng));
  return x;
}

struct Threads {
  int saved;
  explicit Threads(int k) : saved(omp_get_max_threads()) { omp_set_num_threads(k); }
  ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("frame kernels") {
  std::mt19937_64 rng(1);
  for (int d : {4, 8, 16}) {
    const cmat x = random_matrix(d * d, rng);
    const cmat a = sample_haar_unitary(d, rng), b = sample_haar_unitary(d, rng);
    const cmat ls = left_apply(x, a, b, Exec::serial);
    const cmat fs = to_frame(x, a, Exec::serial);
    for (int k : {1, 2, 4}) {
      Threads t(k);
      CHECK((left_apply(x, a, b, Exec::parallel) - ls).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((to_frame(x, a, Exec::parallel) - fs).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((from_frame(fs, a, Exec::parallel) - from_frame(fs, a, Exec::serial)).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("gap filter and twirl") {
  std::mt19937_64 rng(2);
  const SpectralHamiltonian h = build_trapped_ion(3, 1.0, 2.0, 1.0);
  cmat rho = random_matrix(64, rng);
  rho = rho * rho.adjoint();
  rho /= rho.trace();
  for (const auto& mu : {TimeMeasure::delta(), TimeMeasure::uniform(2.5)}) {
    cmat s = to_frame(interleaved_to_ab(rho, 3), h.spectrum.vectors, Exec::serial);
    cmat p = s;
    apply_gap_filter(s, h, mu, Exec::serial);
    const DensityOperator ds = twirl_density(h, {3, rho}, mu, Exec::serial);
    for (int k : {2, 4}) {
      Threads t(k);
      cmat q = p;
      apply_gap_filter(q, h, mu, Exec::parallel);
      CHECK((q - s).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((twirl_density(h, {3, rho}, mu, Exec::parallel).mat - ds.mat).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("protocol engine") {
  for (SimPath path : {SimPath::pauli_branch, SimPath::density_matrix}) {
    ProtocolConfig cfg;
    cfg.n = 4;
    cfg.m = 2;
    cfg.hamiltonian = {Family::rydberg, 4, {}, 3};
    cfg.noise.p = 0.2;
    cfg.path = path;
    cfg.exec = Exec::serial;
    const ProtocolOutcome s = run_protocol(cfg);
    cfg.exec = Exec::parallel;
    for (int k : {1, 3}) {
      Threads t(k);
      const ProtocolOutcome p = run_protocol(cfg);
      CHECK(std::abs(p.fidelity - s.fidelity) < 1e-12);
      CHECK(std::abs(p.yield_value - s.yield_value) < 1e-12);
    }
  }
}

TEST_CASE("Monte-Carlo branch sampling is reproducible across team sizes") {
  ProtocolConfig cfg;
  cfg.n = 7;
  cfg.m = 3;
  cfg.hamiltonian = {Family::diagonal, 7, {}, 3};
  cfg.noise.p = 0.2;
  cfg.samples = 2000;
  cfg.seed = 11;
  cfg.path = SimPath::pauli_branch;
  cfg.exec = Exec::serial;
  const ProtocolOutcome s = run_protocol(cfg);
  CHECK_FALSE(s.exact);
  REQUIRE(s.std_error);
  cfg.exec = Exec::parallel;
  for (int k : {1, 2, 4}) {
    Threads t(k);
    const ProtocolOutcome p = run_protocol(cfg);
    CHECK(p.fidelity == s.fidelity);
    CHECK(*p.std_error == *s.std_error);
  }

  const SpectralHamiltonian h = build_diagonal(7, 3);
  const PauliChannel ch = local_depolarizing(7, 0.2);
  const auto ref = averaged_otoc(h, TimeMeasure::delta(), ch, 3, MeasurementBasis::hadamard(), 3000, 4, false,
                                 Exec::serial);
  Threads t(3);
  const auto par = averaged_otoc(h, TimeMeasure::delta(), ch, 3, MeasurementBasis::hadamard(), 3000, 4, false,
                                 Exec::parallel);
  CHECK(par.value == ref.value);
}

TEST_CASE("phase-sampled delta limit is reproducible across team sizes") {
  ProtocolConfig cfg;
  cfg.n = 7;
  cfg.hamiltonian = {Family::tfim_periodic, 7, {}, 1};
  cfg.noise.p = 0.2;
  cfg.samples = 40;
  cfg.seed = 5;
  cfg.path = SimPath::pauli_branch;
  const SpectralHamiltonian h = build_hamiltonian(cfg.hamiltonian);
  cfg.exec = Exec::serial;
  const auto s = run_protocol_sweep_m(cfg, h, {2, 4});
  REQUIRE(s[0].phase_sampled);
  cfg.exec = Exec::parallel;
  for (int k : {2, 3}) {
    Threads t(k);
    const auto p = run_protocol_sweep_m(cfg, h, {2, 4});
    for (std::size_t j = 0; j < 2; ++j) CHECK(p[j].fidelity == s[j].fidelity);
  }
}
