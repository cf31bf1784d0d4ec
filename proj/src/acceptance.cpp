#include "hamdistill/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "hamdistill/analytics.hpp"
#include "hamdistill/distill.hpp"
#include "hamdistill/otoc.hpp"
#include "hamdistill/twirl.hpp"

namespace hd {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ProtocolConfig base_config(Family fam, int n, int m, double p) {
  ProtocolConfig c;
  c.n = n;
  c.m = m;
  c.hamiltonian.family = fam;
  c.hamiltonian.n = n;
  c.noise = {NoiseSpec::Kind::depolarizing, p, 0.0};
  c.basis = MeasurementBasis::Kind::hadamard;
  return c;
}

// Delta-limit twirl of every Pauli branch of a diagonal Hamiltonian against
// the dephased closed form.
CriterionResult diagonal_twirl_exactness() {
  CriterionResult r;
  r.id = "diagonal_twirl_exactness";
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    const SpectralHamiltonian h = build_diagonal(n, 11);
    const std::size_t d = pow2(n);
    const BranchState epr = epr_state(n);
    for (std::uint64_t idx = 0; idx < pow2(2 * n); ++idx) {
      const PauliString p = PauliString::from_index(n, idx);
      const BranchState b = apply_pauli_branch(p, epr);
      const DensityOperator rho{n, b.amp * b.amp.adjoint()};
      const DensityOperator out = twirl_density(h, rho, TimeMeasure::delta());
      cmat expect;
      const std::uint64_t a = p.x_mask();
      if (a == 0) {
        expect = rho.mat;
      } else {
        expect = cmat::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
        for (std::size_t i = 0; i < d; ++i) {
          const auto k = static_cast<Eigen::Index>(interleave(i ^ a, i, n));
          expect(k, k) = 1.0 / static_cast<double>(d);
        }
      }
      worst = std::max(worst, (out.mat - expect).cwiseAbs().maxCoeff());
    }
  }
  r.residual = worst;
  r.pass = worst <= 1e-10;
  r.detail = "max-norm " + fmt("%.2e", worst) + " over all Pauli branches, n=2..4 (tol 1e-10)";
  return r;
}

// Detection probability from OTOCs against 1 - <psi|Pi|psi> built from an
// independent dense eigensolver and the interleaved outcome projector.
CriterionResult otoc_detection_identity() {
  CriterionResult r;
  r.id = "otoc_detection_identity";
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ut(0.0, 6.0);
  double worst = 0.0;
  int checks = 0;
  for (Family fam : {Family::trapped_ion, Family::rydberg, Family::haar_random}) {
    for (int n = 2; n <= 4; ++n) {
      HamiltonianSpec spec{fam, n, {}, 5};
      const SpectralHamiltonian h = build_hamiltonian(spec);
      const Eigen::SelfAdjointEigenSolver<cmat> es(h.matrix * h.time_scale);
      const std::size_t d = pow2(n);
      const BranchState epr = epr_state(n);
      std::vector<cmat> proj;
      for (int m = 1; m <= n; ++m)
        for (auto b : {MeasurementBasis::computational(), MeasurementBasis::hadamard()})
          proj.push_back(identical_outcome_projector(n, m, b));
      std::uniform_int_distribution<std::uint64_t> up(1, pow2(2 * n) - 1);
      for (int k = 0; k < 10; ++k) {
        const double t = ut(rng);
        const PauliString p = PauliString::from_index(n, up(rng));
        cvec ph(static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, es.eigenvalues()(i) * t);
        const cmat v = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();  // e^{iHt}
        const cmat op = ab_to_interleaved(kron(v * pauli_matrix(p), v.conjugate()), n);
        const cvec psi = op * epr.amp;
        std::size_t pi = 0;
        for (int m = 1; m <= n; ++m)
          for (auto b : {MeasurementBasis::computational(), MeasurementBasis::hadamard()}) {
            const double via_proj = 1.0 - psi.dot(proj[pi++] * psi).real();
            const double via_otoc = detection_probability(h, t, p, m, b);
            worst = std::max(worst, std::abs(via_proj - via_otoc));
            ++checks;
          }
      }
    }
  }
  r.residual = worst;
  r.pass = worst <= 1e-10;
  r.detail = std::to_string(checks) + " (H, t, P, m, basis) points, max |diff| " + fmt("%.2e", worst) +
             " (tol 1e-10)";
  return r;
}

CriterionResult path_equivalence() {
  CriterionResult r;
  r.id = "path_equivalence";
  double worst = 0.0;
  int runs = 0;
  for (Family fam : {Family::trapped_ion, Family::rydberg, Family::tfim_periodic})
    for (double p : {0.1, 0.2})
      for (const TimeMeasure& mu : {TimeMeasure::delta(), TimeMeasure::uniform(3.0)}) {
        ProtocolConfig c = base_config(fam, 3, 1, p);
        c.mu = mu;
        HamiltonianSpec spec = c.hamiltonian;
        const SpectralHamiltonian h = build_hamiltonian(spec);
        c.path = SimPath::pauli_branch;
        const auto a = run_protocol_sweep_m(c, h, {1, 2});
        c.path = SimPath::density_matrix;
        const auto b = run_protocol_sweep_m(c, h, {1, 2});
        for (std::size_t j = 0; j < a.size(); ++j) {
          worst = std::max({worst, std::abs(a[j].fidelity - b[j].fidelity),
                            std::abs(a[j].survival_probability - b[j].survival_probability),
                            std::abs(a[j].yield_value - b[j].yield_value),
                            std::abs(a[j].overlap_fidelity - b[j].overlap_fidelity)});
          ++runs;
        }
      }
  r.residual = worst;
  r.pass = worst <= 1e-8;
  r.detail = std::to_string(runs) + " configurations at n=3, max |diff| " + fmt("%.2e", worst) + " (tol 1e-8)";
  return r;
}

CriterionResult haar_limit_convergence() {
  CriterionResult r;
  r.id = "haar_limit_convergence";
  const int n = 7;
  ProtocolConfig c = base_config(Family::haar_random, n, 1, 0.2);
  c.basis = MeasurementBasis::Kind::computational;
  c.samples = 20000;
  c.seed = 99;
  c.hamiltonian.seed = 3;
  const SpectralHamiltonian h = build_hamiltonian(c.hamiltonian);
  const auto out = run_protocol_sweep_m(c, h, {1, 2, 3});
  const double cI = std::pow(0.85, n);
  double worst = 0.0;
  std::ostringstream det;
  for (int m = 1; m <= 3; ++m) {
    const double f = out[static_cast<std::size_t>(m - 1)].fidelity;
    const double lim = haar_limit_fidelity_yield(cI, m, n).first;
    const double rel = std::abs(f - lim) / lim;
    worst = std::max(worst, rel);
    det << "m=" << m << ": " << fmt("%.4f", f) << " vs " << fmt("%.4f", lim) << " (se "
        << fmt("%.1e", out[static_cast<std::size_t>(m - 1)].std_error.value_or(0.0)) << ") ";
  }
  r.residual = worst;
  r.pass = worst <= 0.05;
  r.detail = det.str() + "max rel " + fmt("%.4f", worst) + " (tol 0.05)";
  return r;
}

CriterionResult tolerance_anchors() {
  CriterionResult r;
  r.id = "tolerance_anchors";
  const double a1 = noise_tolerance(1.0).error_rate_tol;
  const double a2 = noise_tolerance(0.5).error_rate_tol;
  const auto [f20, m20] = finite_tolerance_best(20);
  const auto [f50, m50] = finite_tolerance_best(50);
  const double e1 = std::abs(a1 - 1.0 / 3.0), e2 = std::abs(a2 - (5.0 - std::sqrt(13.0)) / 6.0);
  const bool ok1 = e1 <= 1e-6, ok2 = e2 <= 1e-9, ok3 = f20 >= 0.25 && f20 <= 0.27, ok4 = f50 > 0.30;
  r.pass = ok1 && ok2 && ok3 && ok4;
  r.residual = std::max(e1, e2);
  std::ostringstream d;
  d << "m/n=1: " << fmt("%.10f", a1) << (ok1 ? " ok" : " FAIL") << "; m/n=1/2: " << fmt("%.12f", a2)
    << (ok2 ? " ok" : " FAIL") << "; n=20 best (m=" << m20 << "): " << fmt("%.4f", f20)
    << (ok3 ? " ok" : " FAIL, outside [0.25,0.27]") << "; n=50 best (m=" << m50 << "): " << fmt("%.4f", f50)
    << (ok4 ? " ok" : " FAIL, not > 0.30");
  r.detail = d.str();
  return r;
}

CriterionResult diagonal_closed_form() {
  CriterionResult r;
  r.id = "diagonal_closed_form";
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const SpectralHamiltonian h = build_diagonal(n, 17);
    std::vector<int> ms;
    for (int m = 1; m <= n; ++m) ms.push_back(m);
    for (int k = 1; k <= 8; ++k) {
      const double p = 0.05 * k;
      ProtocolConfig c = base_config(Family::diagonal, n, 1, p);
      c.path = SimPath::pauli_branch;
      const auto out = run_protocol_sweep_m(c, h, ms);
      for (std::size_t j = 0; j < ms.size(); ++j) {
        const DiagonalSurvival s = diagonal_survival(p, n, ms[j]);
        worst = std::max({worst, std::abs(out[j].fidelity - s.fidelity()),
                          std::abs(out[j].survival_probability - s.total())});
      }
    }
  }
  r.residual = worst;
  r.pass = worst <= 1e-10;
  r.detail = "n=2..6, all m, p=0.05..0.4: max |diff| " + fmt("%.2e", worst) + " (tol 1e-10)";
  return r;
}

CriterionResult family_ordering() {
  CriterionResult r;
  r.id = "family_ordering";
  auto run = [](Family fam, const TimeMeasure& mu) {
    ProtocolConfig c = base_config(fam, 5, 3, 0.2);
    c.mu = mu;
    c.path = SimPath::pauli_branch;
    return run_protocol(c);
  };
  const auto dg = run(Family::diagonal, TimeMeasure::delta());
  const auto ry = run(Family::rydberg, TimeMeasure::delta());
  const auto ti = run(Family::trapped_ion, TimeMeasure::delta());
  const auto tf = run(Family::trapped_ion, TimeMeasure::uniform(2.0));
  const auto fx = run(Family::trapped_ion, TimeMeasure::sampled({2.0}));
  auto err = [](const ProtocolOutcome& o) { return o.std_error.value_or(0.0); };
  const double fd = dg.per_pair_fidelity, fr = ry.per_pair_fidelity, ft = ti.per_pair_fidelity;
  const bool ord1 = fr - fd > err(dg) + err(ry);
  const bool ord2 = ft - fr > err(ry) + err(ti);
  const bool band = ft >= 0.90 && ft <= 0.95;
  const bool fin = tf.per_pair_fidelity >= ft - 0.02;
  r.pass = ord1 && ord2 && band && fin;
  r.residual = std::min({fr - fd, ft - fr, tf.per_pair_fidelity - (ft - 0.02)});
  std::ostringstream d;
  d << "per-pair delta-limit: diagonal " << fmt("%.4f", fd) << ", rydberg " << fmt("%.4f", fr)
    << ", trapped_ion " << fmt("%.4f", ft) << (ord1 ? "; diag<=ryd ok" : "; diag<=ryd FAIL")
    << (ord2 ? "; ryd<=ion ok" : "; ryd<=ion FAIL") << (band ? "; band ok" : "; band [0.90,0.95] FAIL")
    << "; uniform(T=2) " << fmt("%.4f", tf.per_pair_fidelity) << (fin ? " ok" : " FAIL (needs >= delta-0.02)")
    << "; fixed t=2 " << fmt("%.4f", fx.per_pair_fidelity) << " (diagnostic)";
  r.detail = d.str();
  return r;
}

CriterionResult nonpauli_robustness() {
  CriterionResult r;
  r.id = "nonpauli_robustness";
  double margin = 1.0, ov_margin = 1.0;
  for (Family fam : {Family::trapped_ion, Family::rydberg}) {
    const SpectralHamiltonian h = build_hamiltonian({fam, 5, {}, 1});
    for (double g : {0.1, 0.2, 0.3}) {
      ProtocolConfig c = base_config(fam, 5, 3, 0.2);
      c.noise = {NoiseSpec::Kind::depolarizing_amplitude_damping, 0.2, g};
      c.path = SimPath::density_matrix;
      c.pauli_twirl_enabled = false;
      const auto off = run_protocol(c, h);
      c.pauli_twirl_enabled = true;
      const auto on = run_protocol(c, h);
      const double e = off.std_error.value_or(0.0) + on.std_error.value_or(0.0);
      margin = std::min(margin, off.fidelity - on.fidelity + e);
      ov_margin = std::min(ov_margin, off.overlap_fidelity - on.overlap_fidelity);
    }
  }
  r.residual = margin;
  r.pass = margin >= 0.0;
  r.detail = "n=5 m=3 hadamard, trapped_ion and rydberg, gamma 0.1..0.3: min(no-twirl - twirl) fidelity " +
             fmt("%.4f", margin) + "; same on the overlap convention " + fmt("%.4f", ov_margin) +
             " (diagnostic)";
  return r;
}

CriterionResult qkd_distance_ordering() {
  CriterionResult r;
  r.id = "qkd_distance_ordering";
  double min_gap = 1e300;
  for (int k = 0; k <= 10; ++k) {
    LinkBudget lb;
    lb.e_d = 0.005 + 0.0025 * k;
    const double h = max_distance(ProtocolChoice::hamiltonian(15, 12), lb).distance;
    const double r2 = max_distance(ProtocolChoice::recurrence(2), lb).distance;
    const double ow = max_distance(ProtocolChoice::one_way(), lb).distance;
    min_gap = std::min({min_gap, h - r2, r2 - ow});
  }
  r.residual = min_gap;
  r.pass = min_gap > 1.0;
  r.detail = "e_d=0.005..0.03: min gap in hamiltonian(15,12) > recurrence(2) > one_way is " +
             fmt("%.2f", min_gap) + " km (needs > 1)";
  return r;
}

CriterionResult repeater_thresholds() {
  CriterionResult r;
  r.id = "repeater_thresholds";
  const LinkBudget lb;
  const double none = repeater_threshold_distance(lb, ProtocolChoice::none(), 0.9);
  const double r1 = repeater_threshold_distance(lb, ProtocolChoice::recurrence(1), 0.9);
  const double r2 = repeater_threshold_distance(lb, ProtocolChoice::recurrence(2), 0.9);
  const double hh = repeater_threshold_distance(lb, ProtocolChoice::haar_hamiltonian(15, 12), 0.9);
  const bool a = none >= 105 && none <= 135;
  const bool b = r1 > 250 && r2 > 250 && hh > 250;
  const bool c = hh > r1 && hh > r2;
  r.pass = a && b && c;
  r.residual = none;
  std::ostringstream d;
  d << "0.9 crossings: none " << fmt("%.2f", none) << " km" << (a ? " ok" : " FAIL, outside [105,135]")
    << "; recurrence(1) " << fmt("%.2f", r1) << ", recurrence(2) " << fmt("%.2f", r2)
    << ", haar_hamiltonian(15,12) " << fmt("%.2f", hh) << (b ? "; all > 250 ok" : "; > 250 FAIL")
    << (c ? "; hamiltonian largest ok" : "; hamiltonian largest FAIL");
  r.detail = d.str();
  return r;
}

CriterionResult haar_twirl_oracles() {
  CriterionResult r;
  r.id = "haar_twirl_oracles";
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> nd;
  auto random_herm = [&](int dim) {
    cmat x(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) x(i, j) = cplx(nd(rng), nd(rng));
    return cmat(0.5 * (x + x.adjoint()));
  };
  const int N = 10000;
  // Second order on one qubit pair copy: U (x) U over U(2).
  const cmat x2 = random_herm(4);
  cmat acc2 = cmat::Zero(4, 4);
  for (int i = 0; i < N; ++i) {
    const cmat u = sample_haar_unitary(2, rng);
    const cmat uu = kron(u, u);
    acc2 += uu * x2 * uu.adjoint();
  }
  acc2 /= N;
  const cmat ref2 = haar_second_twirl_oracle(x2);
  const double rel = (acc2 - ref2).norm() / ref2.norm();
  // First order: U X U^dag over U(4), entrywise z-scores.
  const int d = 4;
  const cmat x1 = random_herm(d);
  cmat sum = cmat::Zero(d, d);
  Eigen::MatrixXd s2re = Eigen::MatrixXd::Zero(d, d), s2im = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < N; ++i) {
    const cmat u = sample_haar_unitary(d, rng);
    const cmat y = u * x1 * u.adjoint();
    sum += y;
    s2re += y.real().cwiseAbs2();
    s2im += y.imag().cwiseAbs2();
  }
  const cmat mean = sum / N;
  const cmat ref1 = haar_first_twirl_oracle(x1);
  double zmax = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double vr = s2re(i, j) / N - mean(i, j).real() * mean(i, j).real();
      const double vi = s2im(i, j) / N - mean(i, j).imag() * mean(i, j).imag();
      const double ser = std::sqrt(std::max(vr, 1e-300) / N), sei = std::sqrt(std::max(vi, 1e-300) / N);
      zmax = std::max(zmax, std::abs(mean(i, j).real() - ref1(i, j).real()) / ser);
      if (i != j) zmax = std::max(zmax, std::abs(mean(i, j).imag() - ref1(i, j).imag()) / sei);
    }
  r.residual = rel;
  r.pass = rel <= 0.02 && zmax <= 3.0;
  r.detail = "second order rel Frobenius " + fmt("%.4f", rel) + " (tol 0.02); first order max |z| " +
             fmt("%.2f", zmax) + " (tol 3)";
  return r;
}

CriterionResult recurrence_arithmetic() {
  CriterionResult r;
  r.id = "recurrence_arithmetic";
  const BellDiagonal w = werner(0.2);
  const auto [out, pass] = recurrence_round(w);
  // Two pairs in order A1 B1 A2 B2; bilateral CNOT from pair 1 onto pair 2.
  const double s = 1.0 / std::sqrt(2.0);
  std::array<cvec, 4> bell;
  for (auto& v : bell) v = cvec::Zero(4);
  bell[0](0) = s, bell[0](3) = s;   // Phi+
  bell[1](1) = s, bell[1](2) = s;   // Psi+
  bell[2](0) = s, bell[2](3) = -s;  // Phi-
  bell[3](1) = s, bell[3](2) = -s;  // Psi-
  const std::array<double, 4> wt = {w.p00, w.p01, w.p10, w.p11};
  cmat pair = cmat::Zero(4, 4);
  for (int k = 0; k < 4; ++k) pair += wt[static_cast<std::size_t>(k)] * bell[static_cast<std::size_t>(k)] *
                                      bell[static_cast<std::size_t>(k)].adjoint();
  const cmat rho = kron(pair, pair);
  cmat cnot = cmat::Zero(16, 16);
  for (int b = 0; b < 16; ++b) {
    int a1 = (b >> 3) & 1, b1 = (b >> 2) & 1, a2 = (b >> 1) & 1, b2 = b & 1;
    a2 ^= a1;
    b2 ^= b1;
    cnot((a1 << 3) | (b1 << 2) | (a2 << 1) | b2, b) = 1.0;
  }
  const cmat rp = cnot * rho * cnot.adjoint();
  cmat red = cmat::Zero(4, 4);
  double pp = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int c : {0, 3}) red(i, j) += rp(i * 4 + c, j * 4 + c);
  pp = red.trace().real();
  red /= pp;
  const std::array<double, 4> got = {out.p00, out.p01, out.p10, out.p11};
  double worst = std::abs(pp - pass);
  for (int k = 0; k < 4; ++k) {
    const double ref = bell[static_cast<std::size_t>(k)].dot(red * bell[static_cast<std::size_t>(k)]).real();
    worst = std::max(worst, std::abs(ref - got[static_cast<std::size_t>(k)]));
  }
  // Hashing zero crossing at e_b = e_p.
  double lo = 0.01, hi = 0.3;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - 2.0 * binary_entropy(mid) > 0.0 ? lo : hi) = mid;
  }
  const double x0 = 0.5 * (lo + hi);
  const bool hash_ok = std::abs(x0 - 0.11) <= 0.001 && hashing_yield(x0 - 1e-3, x0 - 1e-3) > 0.0 &&
                       hashing_yield(x0 + 1e-3, x0 + 1e-3) == 0.0;
  r.residual = worst;
  r.pass = worst <= 1e-10 && hash_ok;
  r.detail = "round vs 2-pair density matrix max |diff| " + fmt("%.2e", worst) + " (tol 1e-10), p_pass " +
             fmt("%.6f", pass) + "; hashing zero at " + fmt("%.6f", x0) + (hash_ok ? " ok" : " FAIL");
  return r;
}

CriterionResult clifford_bound() {
  CriterionResult r;
  r.id = "clifford_bound";
  const int n = 100, dpar = 16;
  double worst = -1e300;
  double worst_p = 0.0;
  for (int k = 1; k <= 13; ++k) {
    const double p = 0.005 * k;
    const CliffordBound b = clifford_fidelity_bound(p, n, 1, dpar, 0.01);
    const double e = std::max(b.exponent1, b.exponent2);
    if (e > worst) {
      worst = e;
      worst_p = p;
    }
  }
  const CliffordBound at = clifford_fidelity_bound(0.065, n, 1, dpar, 0.01);
  bool mono = true;
  double prev = -1.0;
  for (int m = 1; m < n; ++m) {
    const double b = clifford_fidelity_bound(0.04, n, m, dpar, 0.01).bound;
    if (b < prev - 1e-15) mono = false;
    prev = b;
  }
  const bool rising = clifford_fidelity_bound(0.04, n, n - 1, dpar, 0.01).bound >
                      clifford_fidelity_bound(0.04, n, 1, dpar, 0.01).bound;
  const bool signs = worst < 0.0;
  r.pass = signs && mono && rising;
  r.residual = worst;
  std::ostringstream d;
  d << "d/n=0.16, delta=0.01, p=0.005..0.065: largest exponent " << fmt("%.4f", worst) << " at p=" << worst_p
    << (signs ? " ok" : " FAIL (must be < 0)") << "; at p=0.065 exponents " << fmt("%.4f", at.exponent1) << ", "
    << fmt("%.4f", at.exponent2) << "; bound monotone in m at (n=100, p=0.04, d=16) "
    << (mono && rising ? "ok" : "FAIL");
  r.detail = d.str();
  return r;
}

struct Entry {
  const char* id;
  CriterionResult (*fn)();
  double limit_seconds;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"diagonal_twirl_exactness", diagonal_twirl_exactness, 60},
      {"otoc_detection_identity", otoc_detection_identity, 0},
      {"path_equivalence", path_equivalence, 300},
      {"haar_limit_convergence", haar_limit_convergence, 600},
      {"tolerance_anchors", tolerance_anchors, 0},
      {"diagonal_closed_form", diagonal_closed_form, 0},
      {"family_ordering", family_ordering, 0},
      {"nonpauli_robustness", nonpauli_robustness, 0},
      {"qkd_distance_ordering", qkd_distance_ordering, 60},
      {"repeater_thresholds", repeater_thresholds, 0},
      {"haar_twirl_oracles", haar_twirl_oracles, 0},
      {"recurrence_arithmetic", recurrence_arithmetic, 0},
      {"clifford_bound", clifford_bound, 0},
  };
  return e;
}

}  // namespace

std::vector<std::string> acceptance_ids() {
  std::vector<std::string> ids;
  for (const auto& e : entries()) ids.emplace_back(e.id);
  return ids;
}

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& e : entries()) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r = {e.id, false, 0.0, std::string("exception: ") + ex.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.limit_seconds > 0 && r.seconds > e.limit_seconds) {
      r.pass = false;
      r.detail += "; runtime " + fmt("%.1f", r.seconds) + " s exceeds " + fmt("%.0f", e.limit_seconds) + " s";
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s %-26s %7.1fs  ", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.seconds);
  return buf + r.detail;
}

}  // namespace hd
