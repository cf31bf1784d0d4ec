#include "hamdistill/hamlib.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hd {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double param(const HamiltonianSpec& s, const std::string& k, double def) {
  auto it = s.params.find(k);
  return it == s.params.end() ? def : it->second;
}

void check_finite(const HamiltonianSpec& s) {
  for (const auto& [k, v] : s.params)
    if (!std::isfinite(v)) throw DomainError("non-finite Hamiltonian parameter " + k);
}

// Adds coef * (op on qubit q) for single-qubit ops, qubit 0 = MSB.
bool is_prime(std::size_t v) {
  if (v < 2) return false;
  for (std::size_t k = 2; k * k <= v; ++k)
    if (v % k == 0) return false;
  return true;
}

rvec rescale_spread(rvec v) {
  const double lo = v.minCoeff(), hi = v.maxCoeff();
  return (v.array() - lo) * (kTwoPi / (hi - lo));
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::diagonal: return "diagonal";
    case Family::tfim_periodic: return "tfim_periodic";
    case Family::trapped_ion: return "trapped_ion";
    case Family::rydberg: return "rydberg";
    case Family::haar_random: return "haar_random";
    case Family::clifford_diagonal: return "clifford_diagonal";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::diagonal, Family::tfim_periodic, Family::trapped_ion, Family::rydberg,
                   Family::haar_random, Family::clifford_diagonal})
    if (family_name(f) == s) return f;
  throw DomainError("unknown Hamiltonian family '" + s + "'");
}

SpectralHamiltonian make_spectral(cmat matrix, HamiltonianSpec spec) {
  SpectralHamiltonian h;
  h.real = matrix.imag().cwiseAbs().maxCoeff() == 0.0;
  h.spectrum = eigendecompose(matrix);
  h.matrix = std::move(matrix);
  h.spec = std::move(spec);
  const cmat& u = h.spectrum.vectors;
  bool perm = true;
  for (Eigen::Index j = 0; j < u.cols() && perm; ++j) {
    int nz = 0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) nz += (u(i, j) != cplx(0.0));
    perm = (nz == 1);
  }
  h.permutation = perm;
  return h;
}

SpectralHamiltonian build_rydberg(int n, double omega, double detuning, double c6, double spacing,
                                  double phi) {
  if (n < 1) throw DomainError("rydberg: n >= 1 required");
  if (!(spacing > 0.0)) throw DomainError("rydberg: spacing must be positive");
  const std::size_t d = pow2(n);
  cmat h = cmat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  // Diagonal part: -Delta sum n_j + sum_{j<k} V_jk n_j n_k, with |r> = |1>.
  for (std::size_t b = 0; b < d; ++b) {
    double e = 0.0;
    for (int j = 0; j < n; ++j) {
      const bool rj = (b >> (n - 1 - j)) & 1U;
      if (!rj) continue;
      e -= detuning;
      for (int k = j + 1; k < n; ++k)
        if ((b >> (n - 1 - k)) & 1U) e += c6 / std::pow(spacing * (k - j), 6);
    }
    h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = e;
  }
  // Drive: (Omega/2)(e^{i phi}|g><r| + h.c.).
  const cplx up = 0.5 * omega * std::polar(1.0, phi);
  for (std::size_t b = 0; b < d; ++b)
    for (int j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << (n - 1 - j);
      if (b & bit) {
        const auto g = static_cast<Eigen::Index>(b ^ bit), r = static_cast<Eigen::Index>(b);
        h(g, r) += up;
        h(r, g) += std::conj(up);
      }
    }
  HamiltonianSpec spec{Family::rydberg, n,
                       {{"omega", omega}, {"detuning", detuning}, {"c6", c6}, {"spacing", spacing},
                        {"phi", phi}},
                       0};
  auto sh = make_spectral(std::move(h), spec);
  sh.time_scale = 1.0 / kTwoPi;
  sh.time_unit_label = "us";
  sh.unit_in_physical = 1.0 / kTwoPi;
  return sh;
}

SpectralHamiltonian build_trapped_ion(int n, double j0, double b, double alpha) {
  if (n < 2) throw DomainError("trapped_ion: n >= 2 required");
  if (alpha < 0.0) throw DomainError("trapped_ion: alpha >= 0 required");
  const std::size_t d = pow2(n);
  cmat h = cmat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s < d; ++s) {
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += ((s >> (n - 1 - i)) & 1U) ? -1.0 : 1.0;
    h(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = b * z;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double c = j0 / std::pow(static_cast<double>(j - i), alpha);
        if (c == 0.0) continue;
        const std::size_t flip = (std::size_t{1} << (n - 1 - i)) | (std::size_t{1} << (n - 1 - j));
        h(static_cast<Eigen::Index>(s ^ flip), static_cast<Eigen::Index>(s)) += c;
      }
  }
  HamiltonianSpec spec{Family::trapped_ion, n, {{"j0", j0}, {"b", b}, {"alpha", alpha}}, 0};
  auto sh = make_spectral(std::move(h), spec);
  sh.time_scale = 1.0 / kTwoPi;
  sh.time_unit_label = "ms";
  sh.unit_in_physical = 1.0 / kTwoPi;
  return sh;
}

SpectralHamiltonian build_tfim_periodic(int n, double j0, double b) {
  if (n < 3) throw DomainError("tfim_periodic: ring needs n >= 3");
  const std::size_t d = pow2(n);
  cmat h = cmat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s < d; ++s) {
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += ((s >> (n - 1 - i)) & 1U) ? -1.0 : 1.0;
    h(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = b * z;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const std::size_t flip = (std::size_t{1} << (n - 1 - i)) | (std::size_t{1} << (n - 1 - j));
      h(static_cast<Eigen::Index>(s ^ flip), static_cast<Eigen::Index>(s)) += j0;
    }
  }
  HamiltonianSpec spec{Family::tfim_periodic, n, {{"j0", j0}, {"b", b}}, 0};
  auto sh = make_spectral(std::move(h), spec);
  sh.time_scale = 1.0 / kTwoPi;
  sh.time_unit_label = "ms";
  sh.unit_in_physical = 1.0 / kTwoPi;
  return sh;
}

rvec diagonal_spectrum(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("diagonal: n >= 1 required");
  if (n > 14) throw CapacityError("diagonal: n too large");
  const std::size_t d = pow2(n);
  if (d == 2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    rvec v(2);
    v << u(rng), u(rng);
    return rescale_spread(v);
  }
  constexpr double tol = 1e-9;
  constexpr int kRetries = 64;
  if (n <= 8) {
    for (int attempt = 0; attempt < kRetries; ++attempt) {
      std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      rvec v(static_cast<Eigen::Index>(d));
      for (auto& x : v) x = u(rng);
      v = rescale_spread(v);
      if (check_gap_nondegeneracy(v, tol).pass) return v;
    }
    throw std::runtime_error("diagonal: gap nondegeneracy retry budget exhausted");
  }
  // Large n: i.i.d. draws cannot keep 4^n gaps 1e-9 apart, so use a jittered
  // Sidon set (all pairwise sums distinct) in random order.
  std::size_t p = d;
  while (!is_prime(p)) ++p;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 0.125);
  std::vector<double> vals(d);
  for (std::size_t i = 0; i < d; ++i)
    vals[i] = static_cast<double>(2 * p * i + (i * i) % p) + jitter(rng);
  std::shuffle(vals.begin(), vals.end(), rng);
  rvec v = Eigen::Map<rvec>(vals.data(), static_cast<Eigen::Index>(d));
  v = rescale_spread(v);
  if (!check_gap_nondegeneracy(v, tol).pass)
    throw std::runtime_error("diagonal: structured spectrum failed gap check");
  return v;
}

SpectralHamiltonian build_diagonal(int n, std::uint64_t seed) {
  const rvec v = diagonal_spectrum(n, seed);
  cmat h = v.cast<cplx>().asDiagonal();
  return make_spectral(std::move(h), HamiltonianSpec{Family::diagonal, n, {}, seed});
}

cmat sample_haar_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 2) throw DomainError("sample_haar_unitary: dim >= 2 required");
  std::normal_distribution<double> g(0.0, 1.0);
  cmat z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<cmat> qr(z);
  cmat q = qr.householderQ() * cmat::Identity(dim, dim);
  const cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx rd = r(j, j);
    q.col(j) *= (std::abs(rd) > 0 ? rd / std::abs(rd) : cplx(1.0));
  }
  return q;
}

cmat sample_haar_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_haar_unitary(dim, rng);
}

cmat sample_random_clifford(int n, int depth, std::uint64_t seed) {
  if (n < 1 || depth < 1) throw DomainError("sample_random_clifford: n, depth >= 1 required");
  const std::size_t d = pow2(n);
  const auto D = static_cast<Eigen::Index>(d);
  cmat c = cmat::Identity(D, D);
  std::mt19937_64 rng(seed);
  const double s = 1.0 / std::sqrt(2.0);
  const int gates = depth * n;
  for (int g = 0; g < gates; ++g) {
    const int kind = (n >= 2) ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 2);
    const int q = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const std::size_t bq = std::size_t{1} << (n - 1 - q);
    if (kind == 0) {  // Hadamard
      for (std::size_t b = 0; b < d; ++b) {
        if (b & bq) continue;
        const auto i0 = static_cast<Eigen::Index>(b), i1 = static_cast<Eigen::Index>(b | bq);
        const auto r0 = c.row(i0).eval(), r1 = c.row(i1).eval();
        c.row(i0) = s * (r0 + r1);
        c.row(i1) = s * (r0 - r1);
      }
    } else if (kind == 1) {  // Phase
      for (std::size_t b = 0; b < d; ++b)
        if (b & bq) c.row(static_cast<Eigen::Index>(b)) *= cplx(0.0, 1.0);
    } else {  // CNOT q -> t
      int t = static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
      if (t >= q) ++t;
      const std::size_t bt = std::size_t{1} << (n - 1 - t);
      for (std::size_t b = 0; b < d; ++b)
        if ((b & bq) && !(b & bt))
          c.row(static_cast<Eigen::Index>(b)).swap(c.row(static_cast<Eigen::Index>(b | bt)));
    }
  }
  return c;
}

SpectralHamiltonian build_haar_random(int n, std::uint64_t seed) {
  const rvec v = diagonal_spectrum(n, mix_seed(seed, 1));
  const cmat u = sample_haar_unitary(static_cast<int>(pow2(n)), mix_seed(seed, 2));
  cmat h = u * v.cast<cplx>().asDiagonal() * u.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  return make_spectral(std::move(h), HamiltonianSpec{Family::haar_random, n, {}, seed});
}

SpectralHamiltonian build_clifford_diagonal(int n, int depth, std::uint64_t seed) {
  const rvec v = diagonal_spectrum(n, mix_seed(seed, 1));
  const cmat c = sample_random_clifford(n, depth, mix_seed(seed, 3));
  cmat h = c * v.cast<cplx>().asDiagonal() * c.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  auto sh = make_spectral(std::move(h), HamiltonianSpec{Family::clifford_diagonal, n,
                                                        {{"depth", static_cast<double>(depth)}},
                                                        seed});
  sh.clifford = c;
  return sh;
}

SpectralHamiltonian build_hamiltonian(const HamiltonianSpec& s) {
  check_finite(s);
  constexpr double tp = kTwoPi;
  SpectralHamiltonian h;
  switch (s.family) {
    case Family::rydberg:
      h = build_rydberg(s.n, param(s, "omega", tp * 1.0), param(s, "detuning", tp * 2.5),
                        param(s, "c6", tp * 862890.0), param(s, "spacing", 6.0), param(s, "phi", 0.0));
      break;
    case Family::trapped_ion: {
      const double j0 = param(s, "j0", tp);
      h = build_trapped_ion(s.n, j0, param(s, "b", 2.0 * j0), param(s, "alpha", 1.0));
      break;
    }
    case Family::tfim_periodic: {
      const double j0 = param(s, "j0", tp);
      h = build_tfim_periodic(s.n, j0, param(s, "b", 2.0 * j0));
      break;
    }
    case Family::diagonal: h = build_diagonal(s.n, s.seed); break;
    case Family::haar_random: h = build_haar_random(s.n, s.seed); break;
    case Family::clifford_diagonal:
      h = build_clifford_diagonal(s.n, static_cast<int>(param(s, "depth", 3.0 * s.n)), s.seed);
      break;
  }
  h.spec.params.insert(s.params.begin(), s.params.end());
  h.spec.seed = s.seed;
  return h;
}

GapReport check_gap_nondegeneracy(const rvec& ev, double tol) {
  if (ev.size() < 2) throw DomainError("check_gap_nondegeneracy: need >= 2 eigenvalues");
  std::vector<double> v(ev.data(), ev.data() + ev.size());
  std::sort(v.begin(), v.end());
  GapReport r;
  r.min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.size(); ++i) r.min_spacing = std::min(r.min_spacing, v[i] - v[i - 1]);
  std::vector<double> gaps;
  gaps.reserve(v.size() * (v.size() - 1));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (i != j) gaps.push_back(v[i] - v[j]);
  std::sort(gaps.begin(), gaps.end());
  r.min_collision = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < gaps.size(); ++i)
    r.min_collision = std::min(r.min_collision, gaps[i] - gaps[i - 1]);
  r.pass = r.min_spacing > tol && r.min_collision > tol;
  return r;
}

}  // namespace hd
