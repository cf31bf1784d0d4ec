#include "hamdistill/otoc.hpp"

#include <cmath>

#include "hamdistill/branch_engine.hpp"
#include "hamdistill/stats.hpp"

namespace hd {

cplx otoc(const SpectralHamiltonian& h, double t, const cmat& v, const cmat& w) {
  const cmat& u = h.spectrum.vectors;
  const auto d = u.rows();
  if (v.rows() != d || v.cols() != d || w.rows() != d || w.cols() != d)
    throw DomainError("otoc: dimension mismatch");
  cvec ph(d);
  for (Eigen::Index k = 0; k < d; ++k) ph(k) = std::polar(1.0, h.spectrum.eigenvalues(k) * h.time_scale * t);
  const cmat evol = u * ph.asDiagonal() * u.adjoint();  // e^{iHt}
  const cmat vt = evol * v * evol.adjoint();
  return (vt.adjoint() * w.adjoint() * vt * w).trace() / static_cast<double>(d);
}

std::vector<cmat> outcome_projectors(int n, int m, const MeasurementBasis& basis) {
  const cmat wr = basis_rotation(n, m, basis);
  const auto d = wr.rows();
  const Eigen::Index nx = static_cast<Eigen::Index>(pow2(m)), dp = d / nx;
  std::vector<cmat> out;
  for (Eigen::Index x = 0; x < nx; ++x) {
    const auto rows = wr.middleRows(x * dp, dp);
    out.push_back(rows.adjoint() * rows);
  }
  return out;
}

double detection_probability(const SpectralHamiltonian& h, double t, const PauliString& p, int m,
                             const MeasurementBasis& basis) {
  if (p.n() != h.n()) throw DomainError("detection_probability: Pauli size mismatch");
  if (m < 0 || m > h.n()) throw DomainError("detection_probability: 0 <= m <= n required");
  const cmat pm = pauli_matrix(p);
  double s = 0.0;
  for (const cmat& mx : outcome_projectors(h.n(), m, basis)) s += otoc(h, t, pm, mx).real();
  const double r = 1.0 - s;
  if (r < -1e-9 || r > 1.0 + 1e-9) throw std::runtime_error("detection_probability out of [0,1]");
  return r;
}

AveragedOtocReport averaged_otoc(const SpectralHamiltonian& h, const TimeMeasure& mu,
                                 const PauliChannel& channel, int m, const MeasurementBasis& basis,
                                 int samples, std::uint64_t seed, bool with_breakdown, Exec exec) {
  const int n = h.n();
  if (channel.n() != n) throw DomainError("averaged_otoc: channel size mismatch");
  AveragedOtocReport rep;
  const double cI = channel.c_identity();
  if (cI >= 1.0) return rep;
  const BranchEngine eng(h, m, basis, mu, exec);
  if (n <= 6 && eng.exact()) {
    const auto terms = channel.enumerate();
    std::vector<double> vals(terms.size(), 0.0);
    const auto count = static_cast<long>(terms.size());
    auto body = [&](long i) {
      const auto& [p, w] = terms[static_cast<std::size_t>(i)];
      if (p.is_identity()) return;
      vals[static_cast<std::size_t>(i)] = w * eng.evaluate(BranchEngine::eigen_amplitudes(h, p)).survival;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < count; ++i) body(i);
    } else {
      for (long i = 0; i < count; ++i) body(i);
    }
    rep.value = pairwise_sum(vals);
    if (with_breakdown) {
      rep.breakdown.emplace();
      for (std::size_t i = 0; i < terms.size(); ++i)
        if (!terms[i].first.is_identity()) (*rep.breakdown)[terms[i].first.str()] = vals[i];
    }
    return rep;
  }
  std::vector<double> vals(static_cast<std::size_t>(samples));
  auto body = [&](int i) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const PauliString p = channel.sample_non_identity(rng);
    const cmat a = BranchEngine::eigen_amplitudes(h, p);
    vals[static_cast<std::size_t>(i)] =
        eng.exact() ? eng.evaluate(a).survival : eng.evaluate_at(a, eng.draw_time(rng)).survival;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < samples; ++i) body(i);
  } else {
    for (int i = 0; i < samples; ++i) body(i);
  }
  const MeanStats st = mean_stats(vals);
  rep.exact = false;
  rep.samples = samples;
  rep.value = (1.0 - cI) * st.mean;
  rep.std_error = (1.0 - cI) * st.std_error;
  return rep;
}

}  // namespace hd
