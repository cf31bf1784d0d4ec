#include "hamdistill/distill.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "hamdistill/analytics.hpp"
#include "hamdistill/branch_engine.hpp"
#include "hamdistill/stats.hpp"

namespace hd {

KrausChannel NoiseSpec::kraus() const {
  switch (kind) {
    case Kind::depolarizing: return depolarizing_kraus(p);
    case Kind::dephasing: return pauli_kraus({1.0 - p, 0.0, 0.0, p});
    case Kind::amplitude_damping: return amplitude_damping(gamma);
    case Kind::depolarizing_amplitude_damping: return compose(depolarizing_kraus(p), amplitude_damping(gamma));
  }
  throw DomainError("unknown noise kind");
}

PauliWeights NoiseSpec::pauli_weights(bool twirl) const {
  if (kind == Kind::depolarizing) return local_depolarizing(1, p).site(0);
  if (kind == Kind::dephasing) return local_dephasing(1, p).site(0);
  if (!twirl) throw DomainError("non-Pauli noise has no Pauli weights unless twirled");
  return pauli_twirl_weights(kraus());
}

std::string NoiseSpec::name() const {
  switch (kind) {
    case Kind::depolarizing: return "depolarizing";
    case Kind::dephasing: return "dephasing";
    case Kind::amplitude_damping: return "amplitude_damping";
    case Kind::depolarizing_amplitude_damping: return "depolarizing_amplitude_damping";
  }
  return "?";
}

NoiseSpec::Kind parse_noise_kind(const std::string& s) {
  using K = NoiseSpec::Kind;
  for (K k : {K::depolarizing, K::dephasing, K::amplitude_damping, K::depolarizing_amplitude_damping})
    if (NoiseSpec{k, 0, 0}.name() == s) return k;
  throw DomainError("unknown noise kind '" + s + "'");
}

SimPath resolve_path(const ProtocolConfig& cfg) {
  const bool pauli = cfg.noise.is_pauli() || cfg.pauli_twirl_enabled;
  if (!pauli) {
    if (cfg.path == SimPath::pauli_branch)
      throw DomainError("non-Pauli noise needs the density_matrix path or Pauli twirling");
    if (cfg.n > 6) throw CapacityError("non-Pauli noise beyond n = 6 exceeds the density-matrix budget");
    return SimPath::density_matrix;
  }
  if (cfg.path == SimPath::density_matrix && cfg.n > 6)
    throw CapacityError("density_matrix path requires n <= 6");
  if (cfg.path != SimPath::automatic) return cfg.path;
  return cfg.n <= 4 ? SimPath::density_matrix : SimPath::pauli_branch;
}

namespace {

MeasurementBasis make_basis(const ProtocolConfig& cfg, const SpectralHamiltonian& h) {
  switch (cfg.basis) {
    case MeasurementBasis::Kind::computational: return MeasurementBasis::computational();
    case MeasurementBasis::Kind::hadamard: return MeasurementBasis::hadamard();
    case MeasurementBasis::Kind::clifford_conjugated:
      if (h.clifford.size() == 0) throw DomainError("clifford_conjugated basis needs a clifford_diagonal Hamiltonian");
      return MeasurementBasis::clifford_conjugated(h.clifford);
  }
  throw DomainError("unknown basis");
}

void finish(ProtocolOutcome& o, int n, int m) {
  o.yield_value = o.survival_probability * (1.0 - static_cast<double>(m) / n);
  o.per_pair_fidelity =
      m < n ? std::pow(o.fidelity, 1.0 / (n - m)) : std::numeric_limits<double>::quiet_NaN();
}

std::vector<ProtocolOutcome> branch_path(const ProtocolConfig& cfg, const SpectralHamiltonian& h,
                                         const std::vector<int>& ms) {
  const int n = cfg.n;
  const PauliChannel ch(n, cfg.noise.pauli_weights(cfg.pauli_twirl_enabled));
  const double cI = ch.c_identity();
  const MeasurementBasis basis = make_basis(cfg, h);
  std::vector<BranchEngine> engines;
  bool exact = n <= 6;
  for (int m : ms) {
    engines.emplace_back(h, m, basis, cfg.mu, cfg.exec);
    exact = exact && engines.back().exact();
  }
  const std::size_t M = ms.size();
  std::vector<ProtocolOutcome> out(M);

  if (cI >= 1.0) {
    for (std::size_t j = 0; j < M; ++j) {
      out[j] = {1.0, 0, 0, 1.0, 1.0, std::nullopt, std::nullopt, true, 0, "pauli_branch"};
      finish(out[j], n, ms[j]);
    }
    return out;
  }

  if (exact) {
    const auto terms = ch.enumerate();
    const std::size_t T = terms.size();
    std::vector<double> sv(M * T, 0.0), gv(M * T, 0.0);
    auto body = [&](std::size_t i) {
      const auto& [p, w] = terms[i];
      if (p.is_identity()) {
        for (std::size_t j = 0; j < M; ++j) sv[j * T + i] = gv[j * T + i] = w;
        return;
      }
      const cmat a = BranchEngine::eigen_amplitudes(h, p);
      for (std::size_t j = 0; j < M; ++j) {
        const BranchValue v = engines[j].evaluate(a);
        sv[j * T + i] = w * v.survival;
        gv[j * T + i] = w * v.good;
      }
    };
    const auto count = static_cast<long>(T);
    if (cfg.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    } else {
      for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    }
    for (std::size_t j = 0; j < M; ++j) {
      const double S = pairwise_sum(std::span<const double>(sv).subspan(j * T, T));
      const double G = pairwise_sum(std::span<const double>(gv).subspan(j * T, T));
      ProtocolOutcome& o = out[j];
      o.survival_probability = S;
      o.fidelity = cI / S;
      o.overlap_fidelity = G / S;
      o.exact = true;
      o.path = "pauli_branch";
      finish(o, n, ms[j]);
    }
    return out;
  }

  const int N = cfg.samples;
  if (N < 2) throw DomainError("Monte-Carlo run needs samples >= 2");
  std::vector<double> sv(M * static_cast<std::size_t>(N)), gv(M * static_cast<std::size_t>(N));
  const bool need_t = !engines.front().exact();
  std::optional<GapPhaseSampler> phases;
  if (cfg.mu.kind == TimeMeasure::Kind::delta_limit) {
    phases.emplace(h);
    if (!phases->active()) phases.reset();
  }
  auto body = [&](int i) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const PauliString p = ch.sample_non_identity(rng);
    const cmat a = BranchEngine::eigen_amplitudes(h, p);
    const double t = need_t ? engines.front().draw_time(rng) : 0.0;
    const cmat c = phases ? phases->draw(a, rng) : cmat();
    for (std::size_t j = 0; j < M; ++j) {
      const BranchValue v = need_t   ? engines[j].evaluate_at(a, t)
                            : phases ? engines[j].evaluate_with_shared(a, c)
                                     : engines[j].evaluate(a);
      sv[j * static_cast<std::size_t>(N) + static_cast<std::size_t>(i)] = v.survival;
      gv[j * static_cast<std::size_t>(N) + static_cast<std::size_t>(i)] = v.good;
    }
  };
  if (cfg.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < N; ++i) body(i);
  } else {
    for (int i = 0; i < N; ++i) body(i);
  }
  for (std::size_t j = 0; j < M; ++j) {
    const auto ss = std::span<const double>(sv).subspan(j * static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    const auto gs = std::span<const double>(gv).subspan(j * static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    const MeanStats s = mean_stats(ss), g = mean_stats(gs);
    const double cov = covariance(ss, gs, s.mean, g.mean);
    const double q = 1.0 - cI;
    const double S = cI + q * s.mean, G = cI + q * g.mean;
    ProtocolOutcome& o = out[j];
    o.survival_probability = S;
    o.fidelity = cI / S;
    o.overlap_fidelity = G / S;
    o.std_error = cI * q / (S * S) * s.std_error;
    // Delta method for the ratio G/S.
    const double dg = q / S, ds = -q * G / (S * S);
    const double var = (dg * dg * g.variance + ds * ds * s.variance + 2 * dg * ds * cov) / N;
    o.overlap_std_error = std::sqrt(std::max(0.0, var));
    o.exact = false;
    o.samples = N;
    o.phase_sampled = phases.has_value();
    o.path = "pauli_branch";
    finish(o, n, ms[j]);
  }
  return out;
}

std::vector<ProtocolOutcome> density_path(const ProtocolConfig& cfg, const SpectralHamiltonian& h,
                                          const std::vector<int>& ms) {
  const int n = cfg.n;
  const bool pauli = cfg.noise.is_pauli() || cfg.pauli_twirl_enabled;
  cmat pair;
  double cI = std::numeric_limits<double>::quiet_NaN();
  if (pauli) {
    const PauliWeights w = cfg.noise.pauli_weights(cfg.pauli_twirl_enabled);
    pair = pair_state(w);
    cI = std::pow(w[0], n);
  } else {
    pair = pair_state(cfg.noise.kraus());
  }
  cmat rho = pair;
  for (int q = 1; q < n; ++q) rho = kron(rho, pair);
  const cmat& u = h.spectrum.vectors;
  cmat x = to_frame(interleaved_to_ab(rho, n), u, cfg.exec);
  rho.resize(0, 0);
  apply_gap_filter(x, h, cfg.mu, cfg.exec);

  const MeasurementBasis basis = make_basis(cfg, h);
  const auto d = static_cast<Eigen::Index>(pow2(n));
  std::vector<ProtocolOutcome> out;
  for (int m : ms) {
    const cmat ut = basis_rotation(n, m, basis) * u;
    const cmat r = from_frame(x, ut, cfg.exec);
    const Eigen::Index nx = static_cast<Eigen::Index>(pow2(m)), dp = d / nx;
    double S = 0.0;
    cplx G = 0.0;
    for (Eigen::Index xo = 0; xo < nx; ++xo) {
      for (Eigen::Index ra = 0; ra < dp; ++ra)
        for (Eigen::Index rb = 0; rb < dp; ++rb) {
          const Eigen::Index i = (xo * dp + ra) * d + (xo * dp + rb);
          S += r(i, i).real();
        }
      for (Eigen::Index ra = 0; ra < dp; ++ra)
        for (Eigen::Index rb = 0; rb < dp; ++rb) {
          const Eigen::Index i = (xo * dp + ra) * d + (xo * dp + ra);
          const Eigen::Index j = (xo * dp + rb) * d + (xo * dp + rb);
          G += r(i, j);
        }
    }
    ProtocolOutcome o;
    o.survival_probability = S;
    o.overlap_fidelity = G.real() / static_cast<double>(dp) / S;
    o.fidelity = pauli ? cI / S : o.overlap_fidelity;
    o.exact = true;
    o.path = "density_matrix";
    finish(o, n, m);
    out.push_back(o);
  }
  return out;
}

}  // namespace

std::vector<ProtocolOutcome> run_protocol_sweep_m(const ProtocolConfig& cfg, const SpectralHamiltonian& h,
                                                  const std::vector<int>& ms) {
  if (cfg.n < 1) throw DomainError("n >= 1 required");
  if (h.n() != cfg.n) throw DomainError("Hamiltonian size differs from n");
  for (int m : ms)
    if (m < 0 || m > cfg.n) throw DomainError("0 <= m <= n required");
  cfg.mu.validate();
  return resolve_path(cfg) == SimPath::density_matrix ? density_path(cfg, h, ms) : branch_path(cfg, h, ms);
}

ProtocolOutcome run_protocol(const ProtocolConfig& cfg, const SpectralHamiltonian& h) {
  return run_protocol_sweep_m(cfg, h, {cfg.m}).front();
}

ProtocolOutcome run_protocol(const ProtocolConfig& cfg) {
  HamiltonianSpec spec = cfg.hamiltonian;
  spec.n = cfg.n;
  return run_protocol(cfg, build_hamiltonian(spec));
}

std::pair<double, double> fidelity_yield_from_detection(double cI, double R, int m, int n) {
  if (cI < 0 || cI > 1 || R < 0 || R > 1) throw DomainError("c_I and R must lie in [0,1]");
  const double surv = cI + (1.0 - cI) * (1.0 - R);
  return {cI / surv, surv * (1.0 - static_cast<double>(m) / n)};
}

std::pair<BellDiagonal, double> recurrence_round(const BellDiagonal& s) {
  s.validate();
  const double pass = (s.p00 + s.p10) * (s.p00 + s.p10) + (s.p01 + s.p11) * (s.p01 + s.p11);
  if (pass <= 0.0) throw DomainError("recurrence_round: zero pass probability");
  BellDiagonal o{(s.p00 * s.p00 + s.p10 * s.p10) / pass, (s.p01 * s.p01 + s.p11 * s.p11) / pass,
                 2 * s.p00 * s.p10 / pass, 2 * s.p01 * s.p11 / pass};
  return {o, pass};
}

std::pair<BellDiagonal, double> iterate_recurrence(const BellDiagonal& s, int rounds) {
  if (rounds < 0) throw DomainError("rounds >= 0 required");
  BellDiagonal cur = s;
  double y = 1.0;
  for (int r = 0; r < rounds; ++r) {
    const auto [next, pass] = recurrence_round(cur);
    cur = next;
    y *= pass / 2.0;
  }
  return {cur, y};
}

double hashing_yield(double e_b, double e_p) {
  if (e_b < 0 || e_b > 0.5 || e_p < 0 || e_p > 0.5) throw DomainError("hashing_yield: rates in [0, 1/2]");
  return std::max(0.0, 1.0 - binary_entropy(e_b) - binary_entropy(e_p));
}

}  // namespace hd
