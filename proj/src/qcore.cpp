#include "hamdistill/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

namespace hd {

namespace {
constexpr cplx I1{0.0, 1.0};

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

// Single-site product a*b = i^k c; returns k and writes c.
int site_product(char a, char b, char& c) {
  if (a == 'I') { c = b; return 0; }
  if (b == 'I') { c = a; return 0; }
  if (a == b) { c = 'I'; return 0; }
  auto idx = [](char x) { return x == 'X' ? 0 : (x == 'Y' ? 1 : 2); };
  int ia = idx(a), ib = idx(b);
  int ic = 3 - ia - ib;
  c = "XYZ"[ic];
  return ((ib - ia + 3) % 3 == 1) ? 1 : 3;  // cyclic order gives +i
}
}  // namespace

PauliString::PauliString(int n) : letters_(static_cast<std::size_t>(n), 'I') {
  if (n < 1) throw DomainError("PauliString needs n >= 1");
}

PauliString PauliString::parse(const std::string& s) {
  std::string body = s;
  int phase = 0;
  auto strip = [&](const std::string& pre, int ph) {
    if (body.rfind(pre, 0) == 0) {
      body = body.substr(pre.size());
      phase = ph;
      return true;
    }
    return false;
  };
  strip("-i", 3) || strip("+i", 1) || strip("i", 1) || strip("-", 2) || strip("+", 0);
  if (body.empty()) throw DomainError("empty Pauli string");
  PauliString p(static_cast<int>(body.size()));
  for (std::size_t q = 0; q < body.size(); ++q) {
    if (!valid_letter(body[q])) throw DomainError("bad Pauli letter in '" + s + "'");
    p.letters_[q] = body[q];
  }
  p.phase_ = phase;
  return p;
}

PauliString PauliString::from_masks(int n, std::uint64_t x, std::uint64_t z) {
  PauliString p(n);
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    const bool xb = (x >> bit) & 1U, zb = (z >> bit) & 1U;
    p.letters_[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return p;
}

PauliString PauliString::from_index(int n, std::uint64_t idx) {
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    const std::uint64_t pair = (idx >> (2 * bit)) & 3U;
    x |= ((pair >> 1) & 1U) << bit;
    z |= (pair & 1U) << bit;
  }
  return from_masks(n, x, z);
}

int PauliString::weight() const {
  int w = 0;
  for (char c : letters_) w += (c != 'I');
  return w;
}

void PauliString::set(int q, char c) {
  if (!valid_letter(c)) throw DomainError("bad Pauli letter");
  letters_.at(static_cast<std::size_t>(q)) = c;
}

cplx PauliString::phase() const {
  static const cplx table[4] = {1.0, I1, -1.0, -I1};
  return table[phase_ & 3];
}

bool PauliString::is_identity() const { return weight() == 0; }

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  const int n = this->n();
  for (int q = 0; q < n; ++q)
    if (letters_[q] == 'X' || letters_[q] == 'Y') m |= std::uint64_t{1} << (n - 1 - q);
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  const int n = this->n();
  for (int q = 0; q < n; ++q)
    if (letters_[q] == 'Z' || letters_[q] == 'Y') m |= std::uint64_t{1} << (n - 1 - q);
  return m;
}

int PauliString::y_count() const {
  int c = 0;
  for (char l : letters_) c += (l == 'Y');
  return c;
}

std::string PauliString::str() const {
  static const char* pre[4] = {"", "i", "-", "-i"};
  return std::string(pre[phase_ & 3]) + std::string(letters_.begin(), letters_.end());
}

PauliString PauliString::slice(int first, int count) const {
  PauliString p(count);
  for (int q = 0; q < count; ++q) p.letters_[q] = letters_.at(static_cast<std::size_t>(first + q));
  return p;
}

PauliString PauliString::operator*(const PauliString& o) const {
  if (o.n() != n()) throw DomainError("Pauli product size mismatch");
  PauliString r(n());
  int ph = phase_ + o.phase_;
  for (int q = 0; q < n(); ++q) ph += site_product(letters_[q], o.letters_[q], r.letters_[q]);
  r.phase_ = ph & 3;
  return r;
}

bool PauliString::commutes_with(const PauliString& o) const {
  const int s = std::popcount(x_mask() & o.z_mask()) + std::popcount(z_mask() & o.x_mask());
  return (s % 2) == 0;
}

cmat kron(const cmat& a, const cmat& b) {
  cmat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

cmat pauli_matrix(const PauliString& p) {
  const int n = p.n();
  const std::size_t d = pow2(n);
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  cplx base = p.phase();
  for (int k = 0; k < p.y_count(); ++k) base *= I1;
  cmat m = cmat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t b = 0; b < d; ++b) {
    const double s = (std::popcount(b & z) % 2) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) = base * s;
  }
  return m;
}

std::size_t interleave(std::size_t a, std::size_t b, int n) {
  std::size_t r = 0;
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    r |= ((a >> bit) & 1U) << (2 * bit + 1);
    r |= ((b >> bit) & 1U) << (2 * bit);
  }
  return r;
}

void deinterleave(std::size_t idx, int n, std::size_t& a, std::size_t& b) {
  a = 0;
  b = 0;
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    a |= ((idx >> (2 * bit + 1)) & 1U) << bit;
    b |= ((idx >> (2 * bit)) & 1U) << bit;
  }
}

BranchState epr_state(int n) {
  if (n < 1) throw DomainError("epr_state needs n >= 1");
  if (n > 13) throw CapacityError("epr_state: 2n-qubit vector exceeds memory budget");
  const std::size_t d = pow2(n);
  BranchState s{n, cvec::Zero(static_cast<Eigen::Index>(d * d))};
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t a = 0; a < d; ++a) s.amp(static_cast<Eigen::Index>(interleave(a, a, n))) = amp;
  return s;
}

cmat to_ab_matrix(const BranchState& s) {
  const std::size_t d = pow2(s.n);
  if (static_cast<std::size_t>(s.amp.size()) != d * d) throw DomainError("branch dimension mismatch");
  cmat psi(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      psi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          s.amp(static_cast<Eigen::Index>(interleave(a, b, s.n)));
  return psi;
}

BranchState from_ab_matrix(const cmat& psi) {
  const std::size_t d = static_cast<std::size_t>(psi.rows());
  const int n = std::countr_zero(d);
  BranchState s{n, cvec(static_cast<Eigen::Index>(d * d))};
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      s.amp(static_cast<Eigen::Index>(interleave(a, b, n))) =
          psi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  return s;
}

namespace {
std::vector<std::size_t> ab_of_interleaved(int n) {
  const std::size_t d = pow2(n);
  std::vector<std::size_t> map(d * d);
  for (std::size_t i = 0; i < d * d; ++i) {
    std::size_t a, b;
    deinterleave(i, n, a, b);
    map[i] = a * d + b;
  }
  return map;
}
}  // namespace

cmat interleaved_to_ab(const cmat& op, int n) {
  const auto map = ab_of_interleaved(n);
  const auto D = static_cast<Eigen::Index>(map.size());
  cmat r(D, D);
  for (Eigen::Index j = 0; j < D; ++j)
    for (Eigen::Index i = 0; i < D; ++i)
      r(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) = op(i, j);
  return r;
}

cmat ab_to_interleaved(const cmat& op, int n) {
  const auto map = ab_of_interleaved(n);
  const auto D = static_cast<Eigen::Index>(map.size());
  cmat r(D, D);
  for (Eigen::Index j = 0; j < D; ++j)
    for (Eigen::Index i = 0; i < D; ++i)
      r(i, j) = op(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
  return r;
}

std::string MeasurementBasis::name() const {
  switch (kind) {
    case Kind::computational: return "computational";
    case Kind::hadamard: return "hadamard";
    case Kind::clifford_conjugated: return "clifford_conjugated";
  }
  return "?";
}

cmat basis_rotation(int n, int m, const MeasurementBasis& basis) {
  if (m < 0 || m > n) throw DomainError("measured pairs m must satisfy 0 <= m <= n");
  const auto d = static_cast<Eigen::Index>(pow2(n));
  if (basis.kind == MeasurementBasis::Kind::computational) return cmat::Identity(d, d);
  cmat h2(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h2 << s, s, s, -s;
  cmat w = cmat::Identity(1, 1);
  for (int q = 0; q < n; ++q) w = kron(w, q < m ? h2 : cmat::Identity(2, 2));
  if (basis.kind == MeasurementBasis::Kind::clifford_conjugated) {
    if (basis.clifford.rows() != d || basis.clifford.cols() != d)
      throw DomainError("Clifford dimension mismatch");
    w = w * basis.clifford.adjoint();
  }
  return w;
}

cmat identical_outcome_projector(int n, int m, const MeasurementBasis& basis) {
  if (m < 0 || m > n) throw DomainError("identical_outcome_projector: m > n");
  if (n > 6) throw CapacityError("identical_outcome_projector: dense operator too large");
  const std::size_t d = pow2(n);
  const int shift = n - m;
  const cmat w = basis_rotation(n, m, basis);
  // Rotated-frame mask, then conjugate back: Pi = K^dag diag(mask) K with K = W (x) W*.
  cmat k = kron(w, w.conjugate());
  cmat left = k.adjoint();
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if ((a >> shift) != (b >> shift)) left.col(static_cast<Eigen::Index>(a * d + b)).setZero();
  return ab_to_interleaved(left * k, n);
}

double state_fidelity(const DensityOperator& rho, const BranchState& psi) {
  if (rho.mat.rows() != psi.amp.size()) throw DomainError("state_fidelity: dimension mismatch");
  const cplx f = psi.amp.dot(rho.mat * psi.amp);
  if (std::abs(f.imag()) > 1e-10) throw DomainError("state_fidelity: non-real overlap");
  return f.real();
}

bool is_hermitian(const cmat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_unitary(const cmat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - cmat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

SpectralDecomposition eigendecompose(const cmat& h) {
  if (!is_hermitian(h, 1e-10)) throw DomainError("eigendecompose: input is not Hermitian");
  const cmat hs = 0.5 * (h + h.adjoint());
  const auto d = hs.rows();
  // Diagonal input: exact permutation eigenvectors.
  if ((hs - cmat(hs.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return hs(a, a).real() < hs(b, b).real();
    });
    SpectralDecomposition sd{rvec(d), cmat::Zero(d, d)};
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index src = order[static_cast<std::size_t>(k)];
      sd.eigenvalues(k) = hs(src, src).real();
      sd.vectors(src, k) = 1.0;
    }
    return sd;
  }
  // Real symmetric input: real eigenvectors.
  if (hs.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<rmat> es(hs.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
    return {es.eigenvalues(), es.eigenvectors().cast<cplx>()};
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(hs);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace hd
