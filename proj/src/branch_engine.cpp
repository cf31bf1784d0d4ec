#include "hamdistill/branch_engine.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <numbers>

namespace hd {

namespace {
inline double abs2(cplx z) { return std::norm(z); }

// 0: singleton cluster, 1: zero-gap cluster that is exactly the diagonal,
// 2: any other cluster with several members.
std::vector<unsigned char> classify_entries(const GapClusters& c, Eigen::Index d) {
  const auto D = static_cast<std::size_t>(d * d);
  std::vector<int> size(static_cast<std::size_t>(c.count), 0);
  for (std::size_t r = 0; r < D; ++r) ++size[static_cast<std::size_t>(c.label[r])];
  const int zero = c.label[0];
  bool zero_fast = size[static_cast<std::size_t>(zero)] == static_cast<int>(d);
  for (Eigen::Index k = 0; k < d && zero_fast; ++k)
    if (c.label[static_cast<std::size_t>(k * d + k)] != zero) zero_fast = false;
  std::vector<unsigned char> kind(D, 2);
  for (std::size_t r = 0; r < D; ++r) {
    const int lab = c.label[r];
    if (lab == zero && zero_fast)
      kind[r] = 1;
    else if (size[static_cast<std::size_t>(lab)] == 1)
      kind[r] = 0;
  }
  return kind;
}

// In-place c -> W c W with W = H on every index bit at or above `block`.
void hadamard_top_bits(cmat& c, Eigen::Index block) {
  const double s = 1.0 / std::sqrt(2.0);
  const Eigen::Index d = c.rows();
  for (Eigen::Index len = block; len < d; len *= 2)
    for (Eigen::Index i = 0; i < d; i += 2 * len) {
      const cmat top = c.middleRows(i, len);
      c.middleRows(i, len) = (top + c.middleRows(i + len, len)) * s;
      c.middleRows(i + len, len) = (top - c.middleRows(i + len, len)) * s;
    }
  for (Eigen::Index len = block; len < d; len *= 2)
    for (Eigen::Index i = 0; i < d; i += 2 * len) {
      const cmat left = c.middleCols(i, len);
      c.middleCols(i, len) = (left + c.middleCols(i + len, len)) * s;
      c.middleCols(i + len, len) = (left - c.middleCols(i + len, len)) * s;
    }
}
}  // namespace

BranchEngine::BranchEngine(const SpectralHamiltonian& h, int m, const MeasurementBasis& basis,
                           const TimeMeasure& mu, Exec exec)
    : n_(h.n()), m_(m), mu_(mu) {
  mu.validate();
  if (m < 0 || m > n_) throw DomainError("BranchEngine: 0 <= m <= n required");
  d_ = static_cast<Eigen::Index>(pow2(n_));
  nx_ = static_cast<Eigen::Index>(pow2(m));
  dp_ = d_ / nx_;
  lambda_ = h.spectrum.eigenvalues * h.time_scale;
  ut_ = basis_rotation(n_, m, basis) * h.spectrum.vectors;
  basis_kind_ = basis.kind;
  if (basis.kind == MeasurementBasis::Kind::clifford_conjugated) pre_ = basis.clifford.adjoint();

  switch (mu.kind) {
    case TimeMeasure::Kind::samples: exact_ = true; return;
    case TimeMeasure::Kind::uniform: {
      if (n_ > 5) {
        exact_ = false;
        return;
      }
      // Observables in the rotated frame, pulled back to the eigen-product frame.
      const Eigen::Index D = d_ * d_;
      cmat mask = cmat::Zero(D, D);
      for (Eigen::Index a = 0; a < d_; ++a)
        for (Eigen::Index b = 0; b < d_; ++b)
          if (a / dp_ == b / dp_) mask(a * d_ + b, a * d_ + b) = 1.0;
      cmat os = to_frame(mask, ut_, exec);
      cmat og = cmat::Zero(D, D);
      const cmat utd = ut_.adjoint();
      for (Eigen::Index x = 0; x < nx_; ++x) {
        // |phi_x> = |x x> (x) |Phi+> on kept pairs; frame image Ut^dag Phi_x Ut^*^T.
        cmat phi = cmat::Zero(d_, d_);
        for (Eigen::Index r = 0; r < dp_; ++r) phi(x * dp_ + r, x * dp_ + r) = 1.0 / std::sqrt(double(dp_));
        const cmat w = utd * phi * ut_;
        cvec wv(D);
        for (Eigen::Index k = 0; k < d_; ++k)
          for (Eigen::Index l = 0; l < d_; ++l) wv(k * d_ + l) = w(k, l);
        og.noalias() += wv * wv.adjoint();
      }
      ks_ = std::move(os);
      kg_ = std::move(og);
      for (Eigen::Index c = 0; c < D; ++c) {
        const double gc = lambda_(c / d_) - lambda_(c % d_);
        for (Eigen::Index r = 0; r < D; ++r) {
          const double gr = lambda_(r / d_) - lambda_(r % d_);
          const cplx f = gap_filter(mu, gc - gr);
          ks_(r, c) *= f;
          kg_(r, c) *= f;
        }
      }
      return;
    }
    case TimeMeasure::Kind::delta_limit: break;
  }

  // Delta limit: per-outcome Gram data of the rotated eigenvectors.
  q_ = rmat::Zero(d_, nx_);
  s_ = rmat::Zero(d_, d_);
  for (Eigen::Index x = 0; x < nx_; ++x) {
    const auto ux = ut_.middleRows(x * dp_, dp_);
    const cmat mx = ux.adjoint() * ux;
    q_.col(x) = mx.diagonal().real();
    s_ += mx.cwiseAbs2();
  }
  g_ = q_ * q_.transpose();

  const GapClusters c = cluster_gaps(lambda_);
  const auto D = static_cast<std::size_t>(d_ * d_);
  kind_ = classify_entries(c, d_);
  std::map<int, std::size_t> gidx;
  for (std::size_t r = 0; r < D; ++r) {
    if (kind_[r] != 2) continue;
    const int lab = c.label[r];
    auto it = gidx.find(lab);
    if (it == gidx.end()) it = gidx.emplace(lab, groups_.size()).first, groups_.emplace_back();
    Group& g = groups_[it->second];
    g.k.push_back(static_cast<int>(r / static_cast<std::size_t>(d_)));
    g.l.push_back(static_cast<int>(r % static_cast<std::size_t>(d_)));
    g.keys.push_back(static_cast<int>(r));
  }
  for (const Group& g : groups_) {
    std::vector<int> j(g.k);
    j.insert(j.end(), g.l.begin(), g.l.end());
    std::sort(j.begin(), j.end());
    j.erase(std::unique(j.begin(), j.end()), j.end());
    std::vector<int> ls(g.l);
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    const double gs = static_cast<double>(g.keys.size());
    const double cost_pair = double(d_) * double(j.size()) * double(j.size()) + double(nx_) * gs * gs;
    const double cost_block = double(d_) * gs + double(d_) * double(dp_) * double(ls.size());
    use_pairwise_.push_back(cost_pair <= cost_block ? 1 : 0);
  }
}

cmat BranchEngine::eigen_amplitudes(const SpectralHamiltonian& h, const PauliString& p) {
  const int n = h.n();
  if (p.n() != n) throw DomainError("eigen_amplitudes: Pauli size mismatch");
  const auto d = static_cast<Eigen::Index>(pow2(n));
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  const cmat& u = h.spectrum.vectors;
  auto sign = [&](std::uint64_t b) { return (std::popcount(b & z) & 1) ? -1.0 : 1.0; };
  if (h.permutation) {
    // U(pi(k), k) = u_k: a is itself a phased permutation.
    std::vector<Eigen::Index> pi(static_cast<std::size_t>(d)), inv(static_cast<std::size_t>(d));
    std::vector<cplx> uk(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index r = 0; r < d; ++r)
        if (u(r, k) != cplx(0.0)) {
          pi[static_cast<std::size_t>(k)] = r;
          inv[static_cast<std::size_t>(r)] = k;
          uk[static_cast<std::size_t>(k)] = u(r, k);
          break;
        }
    cmat a = cmat::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto r = static_cast<std::uint64_t>(pi[static_cast<std::size_t>(k)]);
      const Eigen::Index l = inv[static_cast<std::size_t>(r ^ x)];
      a(k, l) = std::conj(uk[static_cast<std::size_t>(k)]) * sign(r ^ x) * uk[static_cast<std::size_t>(l)] * norm;
    }
    return a;
  }
  if (h.real) {
    const rmat ur = u.real();
    rmat ru(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      const auto src = static_cast<std::uint64_t>(r) ^ x;
      ru.row(r) = sign(src) * ur.row(static_cast<Eigen::Index>(src));
    }
    rmat a = ur.transpose() * ru;
    return (a * norm).cast<cplx>();
  }
  cmat ru(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto src = static_cast<std::uint64_t>(r) ^ x;
    ru.row(r) = sign(src) * u.row(static_cast<Eigen::Index>(src));
  }
  return (u.adjoint() * ru) * norm;
}

cmat BranchEngine::eigen_amplitudes(const SpectralHamiltonian& h, const cmat& psi_ab) {
  const cmat& u = h.spectrum.vectors;
  return u.adjoint() * psi_ab * u;
}

double BranchEngine::draw_time(std::mt19937_64& rng) const {
  if (mu_.kind == TimeMeasure::Kind::uniform) return std::uniform_real_distribution<double>(0.0, mu_.T)(rng);
  if (mu_.kind == TimeMeasure::Kind::samples)
    return mu_.times[static_cast<std::size_t>(rng() % mu_.times.size())];
  throw DomainError("draw_time: delta limit has no time samples");
}

BranchValue BranchEngine::evaluate_at(const cmat& a, double t) const {
  cmat at(d_, d_);
  for (Eigen::Index l = 0; l < d_; ++l)
    for (Eigen::Index k = 0; k < d_; ++k) at(k, l) = a(k, l) * std::polar(1.0, -(lambda_(k) - lambda_(l)) * t);
  const cmat psi = ut_ * at * ut_.adjoint();
  BranchValue v;
  for (Eigen::Index x = 0; x < nx_; ++x) {
    const auto blk = psi.block(x * dp_, x * dp_, dp_, dp_);
    v.survival += blk.squaredNorm();
    v.good += abs2(blk.trace()) / static_cast<double>(dp_);
  }
  return v;
}

BranchValue BranchEngine::evaluate(const cmat& a) const {
  switch (mu_.kind) {
    case TimeMeasure::Kind::delta_limit: return eval_delta(a);
    case TimeMeasure::Kind::uniform:
      if (!exact_) throw DomainError("BranchEngine: uniform measure needs time sampling beyond n = 5");
      return eval_uniform_exact(a);
    case TimeMeasure::Kind::samples: {
      BranchValue acc;
      for (double t : mu_.times) {
        const BranchValue v = evaluate_at(a, t);
        acc.survival += v.survival;
        acc.good += v.good;
      }
      acc.survival /= static_cast<double>(mu_.times.size());
      acc.good /= static_cast<double>(mu_.times.size());
      return acc;
    }
  }
  return {};
}

BranchValue BranchEngine::eval_uniform_exact(const cmat& a) const {
  const Eigen::Index D = d_ * d_;
  cvec v(D);
  for (Eigen::Index k = 0; k < d_; ++k)
    for (Eigen::Index l = 0; l < d_; ++l) v(k * d_ + l) = a(k, l);
  return {v.dot(ks_ * v).real(), v.dot(kg_ * v).real()};
}

BranchValue BranchEngine::eval_unshared(const cmat& a) const {
  BranchValue v;
  const double inv_dp = 1.0 / static_cast<double>(dp_);
  bool diag_fast = false;
  for (Eigen::Index l = 0; l < d_; ++l)
    for (Eigen::Index k = 0; k < d_; ++k) {
      const unsigned char kd = kind_[static_cast<std::size_t>(k * d_ + l)];
      if (kd == 0) {
        const double w = abs2(a(k, l));
        if (w == 0.0) continue;
        v.survival += w * g_(k, l);
        v.good += w * s_(k, l) * inv_dp;
      } else if (kd == 1) {
        diag_fast = true;
      }
    }
  if (diag_fast) {
    const cvec ad = a.diagonal();
    v.survival += ad.dot(s_.cast<cplx>() * ad).real();
    v.good += (q_.transpose().cast<cplx>() * ad).squaredNorm() * inv_dp;
  }
  return v;
}

BranchValue BranchEngine::evaluate_with_shared(const cmat& a, const cmat& c) const {
  if (mu_.kind != TimeMeasure::Kind::delta_limit) throw DomainError("evaluate_with_shared: delta limit only");
  BranchValue v = eval_unshared(a);
  cmat r = pre_.size() ? cmat(pre_ * c * pre_.adjoint()) : c;
  if (basis_kind_ != MeasurementBasis::Kind::computational) hadamard_top_bits(r, dp_);
  for (Eigen::Index x = 0; x < nx_; ++x) {
    const auto blk = r.block(x * dp_, x * dp_, dp_, dp_);
    v.survival += blk.squaredNorm();
    v.good += abs2(blk.trace()) / static_cast<double>(dp_);
  }
  return v;
}

BranchValue BranchEngine::eval_delta(const cmat& a) const {
  BranchValue v = eval_unshared(a);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const Group& g = groups_[gi];
    bool any = false;
    for (std::size_t e = 0; e < g.keys.size() && !any; ++e) any = a(g.k[e], g.l[e]) != cplx(0.0);
    if (!any) continue;
    const BranchValue gv = use_pairwise_[gi] ? eval_group_pairwise(a, g) : eval_group_blocks(a, g);
    v.survival += gv.survival;
    v.good += gv.good;
  }
  return v;
}

BranchValue BranchEngine::eval_group_pairwise(const cmat& a, const Group& g) const {
  std::vector<int> j(g.k);
  j.insert(j.end(), g.l.begin(), g.l.end());
  std::sort(j.begin(), j.end());
  j.erase(std::unique(j.begin(), j.end()), j.end());
  auto pos = [&](int idx) {
    return static_cast<Eigen::Index>(std::lower_bound(j.begin(), j.end(), idx) - j.begin());
  };
  const auto J = static_cast<Eigen::Index>(j.size());
  const std::size_t G = g.keys.size();
  std::vector<Eigen::Index> pk(G), pl(G);
  std::vector<cplx> av(G);
  for (std::size_t e = 0; e < G; ++e) {
    pk[e] = pos(g.k[e]);
    pl[e] = pos(g.l[e]);
    av[e] = a(g.k[e], g.l[e]);
  }
  cmat cols(dp_, J);
  BranchValue v;
  for (Eigen::Index x = 0; x < nx_; ++x) {
    for (Eigen::Index c = 0; c < J; ++c) cols.col(c) = ut_.block(x * dp_, j[static_cast<std::size_t>(c)], dp_, 1);
    const cmat mx = cols.adjoint() * cols;  // (M_x)_{ij} over the union index set
    cplx tr = 0.0;
    double sv = 0.0;
    for (std::size_t e = 0; e < G; ++e) {
      tr += av[e] * mx(pl[e], pk[e]);
      cplx row = 0.0;
      for (std::size_t f = 0; f < G; ++f) row += std::conj(av[f]) * mx(pk[f], pk[e]) * mx(pl[e], pl[f]);
      sv += (av[e] * row).real();
    }
    v.survival += sv;
    v.good += abs2(tr) / static_cast<double>(dp_);
  }
  return v;
}

BranchValue BranchEngine::eval_group_blocks(const cmat& a, const Group& g) const {
  std::vector<int> ks(g.k), ls(g.l);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  auto pos = [](const std::vector<int>& s, int idx) {
    return static_cast<Eigen::Index>(std::lower_bound(s.begin(), s.end(), idx) - s.begin());
  };
  const auto K = static_cast<Eigen::Index>(ks.size()), L = static_cast<Eigen::Index>(ls.size());
  cmat at = cmat::Zero(K, L);
  for (std::size_t e = 0; e < g.keys.size(); ++e) at(pos(ks, g.k[e]), pos(ls, g.l[e])) = a(g.k[e], g.l[e]);
  cmat uk(dp_, K), ul(dp_, L);
  BranchValue v;
  for (Eigen::Index x = 0; x < nx_; ++x) {
    for (Eigen::Index c = 0; c < K; ++c) uk.col(c) = ut_.block(x * dp_, ks[static_cast<std::size_t>(c)], dp_, 1);
    for (Eigen::Index c = 0; c < L; ++c) ul.col(c) = ut_.block(x * dp_, ls[static_cast<std::size_t>(c)], dp_, 1);
    const cmat blk = (uk * at) * ul.adjoint();
    v.survival += blk.squaredNorm();
    v.good += abs2(blk.trace()) / static_cast<double>(dp_);
  }
  return v;
}

GapPhaseSampler::GapPhaseSampler(const SpectralHamiltonian& h) {
  d_ = static_cast<Eigen::Index>(pow2(h.n()));
  const GapClusters c = cluster_gaps(rvec(h.spectrum.eigenvalues * h.time_scale));
  const auto kind = classify_entries(c, d_);
  std::map<int, int> dense;
  for (std::size_t r = 0; r < kind.size(); ++r) {
    if (kind[r] != 2) continue;
    const auto it = dense.emplace(c.label[r], static_cast<int>(dense.size())).first;
    keys_.push_back(static_cast<int>(r));
    cluster_.push_back(it->second);
  }
  clusters_ = static_cast<int>(dense.size());
  if (keys_.empty()) return;
  if (h.real)
    ur_ = h.spectrum.vectors.real();
  else
    u_ = h.spectrum.vectors;
}

cmat GapPhaseSampler::draw(const cmat& a, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<cplx> phase(static_cast<std::size_t>(clusters_));
  for (auto& z : phase) z = std::polar(1.0, angle(rng));
  rmat br = rmat::Zero(d_, d_), bi = rmat::Zero(d_, d_);
  for (std::size_t e = 0; e < keys_.size(); ++e) {
    const Eigen::Index k = keys_[e] / d_, l = keys_[e] % d_;
    const cplx z = a(k, l) * phase[static_cast<std::size_t>(cluster_[e])];
    br(k, l) = z.real();
    bi(k, l) = z.imag();
  }
  if (ur_.size()) {
    // Real eigenvectors: four real products instead of two complex ones.
    const rmat re = ur_ * br * ur_.transpose(), im = ur_ * bi * ur_.transpose();
    cmat out(d_, d_);
    out.real() = re;
    out.imag() = im;
    return out;
  }
  cmat b(d_, d_);
  b.real() = br;
  b.imag() = bi;
  return u_ * b * u_.adjoint();
}

}  // namespace hd
