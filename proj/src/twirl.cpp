#include "hamdistill/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hamdistill/branch_engine.hpp"

namespace hd {

TimeMeasure TimeMeasure::uniform(double T, int sample_count, std::uint64_t seed) {
  TimeMeasure m;
  m.kind = Kind::uniform;
  m.T = T;
  m.sample_count = sample_count;
  m.seed = seed;
  m.validate();
  return m;
}

TimeMeasure TimeMeasure::sampled(std::vector<double> times) {
  TimeMeasure m;
  m.kind = Kind::samples;
  m.times = std::move(times);
  m.validate();
  return m;
}

void TimeMeasure::validate() const {
  if (kind == Kind::uniform && !(T > 0.0)) throw DomainError("uniform time measure needs T > 0");
  if (kind == Kind::uniform && sample_count < 1) throw DomainError("uniform time measure needs samples >= 1");
  if (kind == Kind::samples && times.empty()) throw DomainError("sampled time measure needs times");
}

std::string TimeMeasure::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::delta_limit: os << "delta_limit"; break;
    case Kind::uniform: os << "uniform(" << T << ")"; break;
    case Kind::samples: os << "samples(" << times.size() << ")"; break;
  }
  return os.str();
}

cplx gap_filter(const TimeMeasure& mu, double g) {
  switch (mu.kind) {
    case TimeMeasure::Kind::delta_limit: return g == 0.0 ? 1.0 : 0.0;
    case TimeMeasure::Kind::uniform: {
      const double x = 0.5 * g * mu.T;
      const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return std::polar(sinc, -x);
    }
    case TimeMeasure::Kind::samples: {
      cplx s = 0.0;
      for (double t : mu.times) s += std::polar(1.0, -g * t);
      return s / static_cast<double>(mu.times.size());
    }
  }
  return 0.0;
}

GapClusters cluster_gaps(const rvec& ev, double rel_tol) {
  const auto d = static_cast<std::size_t>(ev.size());
  const double diam = ev.maxCoeff() - ev.minCoeff();
  GapClusters c;
  c.tol = rel_tol * (diam > 0 ? diam : 1.0);
  std::vector<int> order(d * d);
  std::iota(order.begin(), order.end(), 0);
  auto gap = [&](int r) { return ev(r / static_cast<int>(d)) - ev(r % static_cast<int>(d)); };
  std::vector<double> g(d * d);
  for (std::size_t r = 0; r < d * d; ++r) g[r] = gap(static_cast<int>(r));
  std::sort(order.begin(), order.end(), [&](int a, int b) { return g[a] < g[b] || (g[a] == g[b] && a < b); });
  c.label.assign(d * d, 0);
  int cur = 0;
  std::vector<int> size(1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && g[order[i]] - g[order[i - 1]] > c.tol) {
      ++cur;
      size.push_back(0);
    }
    c.label[order[i]] = cur;
    ++size.back();
  }
  c.count = cur + 1;
  // Nondegenerate means: one cluster holding exactly the d diagonal entries,
  // all others singletons.
  const int zero = c.label[0];
  bool degenerate = size[zero] != static_cast<int>(d);
  for (std::size_t k = 0; k < d && !degenerate; ++k)
    if (c.label[k * d + k] != zero) degenerate = true;
  for (int s = 0; s < c.count && !degenerate; ++s)
    if (s != zero && size[s] != 1) degenerate = true;
  c.degenerate = degenerate;
  return c;
}

cmat left_apply(const cmat& x, const cmat& a, const cmat& b, Exec exec) {
  const Eigen::Index d = a.rows();
  if (x.rows() != d * d) throw DomainError("left_apply: dimension mismatch");
  cmat out(x.rows(), x.cols());
  const cmat bt = b.transpose();
  const Eigen::Index cols = x.cols();
  auto body = [&](Eigen::Index c) {
    using RowMap = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using RowMapW = Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    RowMap m(x.col(c).data(), d, d);
    RowMapW o(out.col(c).data(), d, d);
    o.noalias() = a * m * bt;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < cols; ++c) body(c);
  } else {
    for (Eigen::Index c = 0; c < cols; ++c) body(c);
  }
  return out;
}

cmat to_frame(const cmat& x, const cmat& v, Exec exec) {
  const cmat vd = v.adjoint(), vt = v.transpose();
  const cmat half = left_apply(x, vd, vt, exec);
  return left_apply(half.adjoint(), vd, vt, exec).adjoint();
}

cmat from_frame(const cmat& x, const cmat& v, Exec exec) {
  const cmat vc = v.conjugate();
  const cmat half = left_apply(x, v, vc, exec);
  return left_apply(half.adjoint(), v, vc, exec).adjoint();
}

void apply_gap_filter(cmat& x, const SpectralHamiltonian& h, const TimeMeasure& mu, Exec exec) {
  const rvec lam = h.spectrum.eigenvalues * h.time_scale;
  const Eigen::Index d = lam.size();
  const Eigen::Index D = d * d;
  if (x.rows() != D || x.cols() != D) throw DomainError("apply_gap_filter: dimension mismatch");
  if (mu.kind == TimeMeasure::Kind::delta_limit) {
    const GapClusters c = cluster_gaps(lam);
    auto body = [&](Eigen::Index col) {
      const int lc = c.label[static_cast<std::size_t>(col)];
      for (Eigen::Index r = 0; r < D; ++r)
        if (c.label[static_cast<std::size_t>(r)] != lc) x(r, col) = 0.0;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (Eigen::Index col = 0; col < D; ++col) body(col);
    } else {
      for (Eigen::Index col = 0; col < D; ++col) body(col);
    }
    return;
  }
  auto body = [&](Eigen::Index col) {
    const double gc = lam(col / d) - lam(col % d);
    for (Eigen::Index r = 0; r < D; ++r) {
      const double gr = lam(r / d) - lam(r % d);
      x(r, col) *= gap_filter(mu, gr - gc);
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index col = 0; col < D; ++col) body(col);
  } else {
    for (Eigen::Index col = 0; col < D; ++col) body(col);
  }
}

DensityOperator twirl_density(const SpectralHamiltonian& h, const DensityOperator& rho,
                              const TimeMeasure& mu, Exec exec) {
  mu.validate();
  const int n = h.n();
  if (rho.n != n) throw DomainError("twirl_density: qubit count mismatch");
  if (n > 6) throw CapacityError("twirl_density: density-matrix budget exceeded (n > 6)");
  const cmat& u = h.spectrum.vectors;
  cmat x = to_frame(interleaved_to_ab(rho.mat, n), u, exec);
  apply_gap_filter(x, h, mu, exec);
  return {n, ab_to_interleaved(from_frame(x, u, exec), n)};
}

double twirl_branch_expectation(const SpectralHamiltonian& h, const BranchState& branch,
                                const Observable& obs, const TimeMeasure& mu, Exec exec) {
  mu.validate();
  if (branch.n != h.n()) throw DomainError("twirl_branch_expectation: dimension mismatch");
  if (obs.dense) {
    if (obs.op.rows() != branch.amp.size()) throw DomainError("twirl_branch_expectation: observable size");
    const DensityOperator rho{branch.n, branch.amp * branch.amp.adjoint()};
    const DensityOperator out = twirl_density(h, rho, mu, exec);
    return (obs.op * out.mat).trace().real();
  }
  const BranchEngine eng(h, obs.m, obs.basis, mu, exec);
  const cmat a = BranchEngine::eigen_amplitudes(h, to_ab_matrix(branch));
  if (eng.exact()) return eng.evaluate(a).survival;
  // Sampled times; each draw has its own stream so the result is thread-count independent.
  const int ns = mu.sample_count;
  std::vector<double> vals(static_cast<std::size_t>(ns));
  auto body = [&](int i) {
    std::mt19937_64 rng(mix_seed(mu.seed, static_cast<std::uint64_t>(i)));
    vals[static_cast<std::size_t>(i)] = eng.evaluate_at(a, eng.draw_time(rng)).survival;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < ns; ++i) body(i);
  } else {
    for (int i = 0; i < ns; ++i) body(i);
  }
  return std::accumulate(vals.begin(), vals.end(), 0.0) / ns;
}

cmat swap_operator(int d) {
  cmat f = cmat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

cmat haar_first_twirl_oracle(const cmat& x) {
  if (x.rows() != x.cols()) throw DomainError("haar_first_twirl_oracle: non-square input");
  return x.trace() / static_cast<double>(x.rows()) * cmat::Identity(x.rows(), x.cols());
}

cmat haar_second_twirl_oracle(const cmat& x) {
  if (x.rows() != x.cols()) throw DomainError("haar_second_twirl_oracle: non-square input");
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(x.rows()))));
  if (d * d != x.rows()) throw DomainError("haar_second_twirl_oracle: dimension is not a square");
  const double dd = d;
  const cmat id = cmat::Identity(d * d, d * d);
  const cmat f = swap_operator(d);
  const cplx ci = (x * (id - f / dd)).trace() / (dd * dd - 1.0);
  const cplx cf = (x * (f - id / dd)).trace() / (dd * dd - 1.0);
  return ci * id + cf * f;
}

}  // namespace hd
