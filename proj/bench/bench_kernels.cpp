#include <benchmark/benchmark.h>

#include <random>

#include "hamdistill/distill.hpp"
#include "hamdistill/twirl.hpp"

using namespace hd;

namespace {

cmat random_matrix(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  cmat x(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = cplx(nd(rng), nd(rng));
  return x;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_LeftApply(benchmark::State& st) {
  const auto d = static_cast<int>(st.range(0));
  const cmat x = random_matrix(d * d, 1), a = sample_haar_unitary(d, std::uint64_t{2}),
             b = sample_haar_unitary(d, std::uint64_t{3});
  for (auto _ : st) benchmark::DoNotOptimize(left_apply(x, a, b, exec_of(st)));
}

void BM_ToFrame(benchmark::State& st) {
  const auto d = static_cast<int>(st.range(0));
  const cmat x = random_matrix(d * d, 4), v = sample_haar_unitary(d, std::uint64_t{5});
  for (auto _ : st) benchmark::DoNotOptimize(to_frame(x, v, exec_of(st)));
}

void BM_BranchLoop(benchmark::State& st) {
  ProtocolConfig cfg;
  cfg.n = static_cast<int>(st.range(0));
  cfg.m = cfg.n / 2;
  cfg.hamiltonian = {Family::trapped_ion, cfg.n, {}, 1};
  cfg.noise.p = 0.2;
  cfg.path = SimPath::pauli_branch;
  cfg.exec = exec_of(st);
  const SpectralHamiltonian h = build_hamiltonian(cfg.hamiltonian);
  for (auto _ : st) benchmark::DoNotOptimize(run_protocol(cfg, h).fidelity);
}

}  // namespace

// Second argument: 0 serial reference, 1 OpenMP kernel.
BENCHMARK(BM_LeftApply)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ToFrame)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BranchLoop)->ArgsProduct({{4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
