#include "hamdistill/noise.hpp"

#include <cmath>

namespace hd {

namespace {
void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + ": probability out of [0,1]");
}

void check_weights(const PauliWeights& w) {
  double s = 0.0;
  for (double x : w) {
    if (x < 0.0) throw DomainError("Pauli weights must be nonnegative");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw DomainError("Pauli weights must sum to 1");
}

const char kLetters[4] = {'I', 'X', 'Y', 'Z'};

int letter_index(char c) { return c == 'I' ? 0 : c == 'X' ? 1 : c == 'Y' ? 2 : 3; }

cmat pauli1(int k) { return pauli_matrix(PauliString::parse(std::string(1, kLetters[k]))); }

int draw(const PauliWeights& w, double u) {
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    acc += w[static_cast<std::size_t>(k)];
    if (u < acc) return k;
  }
  return 3;
}
}  // namespace

PauliChannel::PauliChannel(int n, const PauliWeights& w) : site_(static_cast<std::size_t>(n), w) {
  if (n < 1) throw DomainError("PauliChannel needs n >= 1");
  check_weights(w);
}

PauliChannel::PauliChannel(std::vector<PauliWeights> per_site) : site_(std::move(per_site)) {
  if (site_.empty()) throw DomainError("PauliChannel needs n >= 1");
  for (const auto& w : site_) check_weights(w);
}

double PauliChannel::weight(const PauliString& p) const {
  if (p.n() != n()) throw DomainError("PauliChannel::weight size mismatch");
  double w = 1.0;
  for (int q = 0; q < n(); ++q) w *= site_[static_cast<std::size_t>(q)][static_cast<std::size_t>(letter_index(p.letter(q)))];
  return w;
}

double PauliChannel::c_identity() const {
  double w = 1.0;
  for (const auto& s : site_) w *= s[0];
  return w;
}

std::vector<std::pair<PauliString, double>> PauliChannel::enumerate() const {
  if (n() > 7) throw CapacityError("PauliChannel::enumerate: 4^n terms exceed budget (n > 7)");
  const std::uint64_t count = std::uint64_t{1} << (2 * n());
  std::vector<std::pair<PauliString, double>> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    PauliString p = PauliString::from_index(n(), i);
    const double w = weight(p);
    if (w > 0.0) out.emplace_back(std::move(p), w);
  }
  return out;
}

PauliString PauliChannel::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PauliString p(n());
  for (int q = 0; q < n(); ++q) p.set(q, kLetters[draw(site_[static_cast<std::size_t>(q)], u(rng))]);
  return p;
}

PauliString PauliChannel::sample_non_identity(std::mt19937_64& rng) const {
  const double cI = c_identity();
  if (cI >= 1.0) throw DomainError("sample_non_identity: channel is the identity");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // First non-identity site j has probability prod_{i<j} w_i(I) (1 - w_j(I)) / (1 - c_I).
  const double target = u(rng) * (1.0 - cI);
  double prefix = 1.0, acc = 0.0;
  int first = n() - 1;
  for (int q = 0; q < n(); ++q) {
    const double pj = prefix * (1.0 - site_[static_cast<std::size_t>(q)][0]);
    acc += pj;
    if (target < acc) {
      first = q;
      break;
    }
    prefix *= site_[static_cast<std::size_t>(q)][0];
  }
  PauliString p(n());
  const auto& wf = site_[static_cast<std::size_t>(first)];
  const double rest = wf[1] + wf[2] + wf[3];
  const PauliWeights cond{0.0, wf[1] / rest, wf[2] / rest, wf[3] / rest};
  p.set(first, kLetters[draw(cond, u(rng))]);
  for (int q = first + 1; q < n(); ++q) p.set(q, kLetters[draw(site_[static_cast<std::size_t>(q)], u(rng))]);
  return p;
}

int KrausChannel::qubits() const {
  if (ops.empty()) throw DomainError("KrausChannel has no operators");
  int q = 0;
  while ((Eigen::Index{1} << q) < ops.front().rows()) ++q;
  return q;
}

void KrausChannel::validate(double tol) const {
  if (ops.empty()) throw DomainError("KrausChannel has no operators");
  const auto d = ops.front().rows();
  cmat s = cmat::Zero(d, d);
  for (const auto& k : ops) {
    if (k.rows() != d || k.cols() != d) throw DomainError("Kraus operator dimension mismatch");
    s += k.adjoint() * k;
  }
  if ((s - cmat::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
    throw DomainError("Kraus operators are not trace preserving");
}

cmat KrausChannel::apply(const cmat& rho) const {
  cmat out = cmat::Zero(rho.rows(), rho.cols());
  for (const auto& k : ops) out += k * rho * k.adjoint();
  return out;
}

PauliChannel local_depolarizing(int n, double p) {
  check_prob(p, "local_depolarizing");
  return PauliChannel(n, {1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p});
}

PauliChannel local_dephasing(int n, double p) {
  check_prob(p, "local_dephasing");
  return PauliChannel(n, {1.0 - p, 0.0, 0.0, p});
}

KrausChannel pauli_kraus(const PauliWeights& w) {
  check_weights(w);
  KrausChannel ch;
  for (int k = 0; k < 4; ++k)
    if (w[static_cast<std::size_t>(k)] > 0.0) ch.ops.push_back(std::sqrt(w[static_cast<std::size_t>(k)]) * pauli1(k));
  return ch;
}

KrausChannel depolarizing_kraus(double p) {
  check_prob(p, "depolarizing_kraus");
  return pauli_kraus({1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p});
}

KrausChannel amplitude_damping(double gamma) {
  check_prob(gamma, "amplitude_damping");
  cmat k0 = cmat::Zero(2, 2), k1 = cmat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel{{k0, k1}};
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  KrausChannel out;
  for (const auto& b : second.ops)
    for (const auto& a : first.ops) out.ops.push_back(b * a);
  return out;
}

PauliWeights ptm_diagonal(const KrausChannel& ch) {
  if (ch.qubits() != 1) throw DomainError("ptm_diagonal: single-qubit channel required");
  PauliWeights d{};
  for (int k = 0; k < 4; ++k) {
    const cmat w = pauli1(k);
    d[static_cast<std::size_t>(k)] = 0.5 * (w * ch.apply(w)).trace().real();
  }
  return d;
}

PauliWeights pauli_twirl_weights(const KrausChannel& ch) {
  ch.validate();
  const PauliWeights d = ptm_diagonal(ch);
  PauliWeights c{};
  for (int q = 0; q < 4; ++q) {
    double s = 1.0;
    for (int w = 1; w < 4; ++w) {
      const bool commute = (q == 0 || q == w);
      s += (commute ? 1.0 : -1.0) * d[static_cast<std::size_t>(w)];
    }
    c[static_cast<std::size_t>(q)] = std::max(0.0, s / 4.0);
  }
  const double tot = c[0] + c[1] + c[2] + c[3];
  for (auto& x : c) x /= tot;
  return c;
}

PauliChannel pauli_twirl_channel(const KrausChannel& ch, int n) {
  return PauliChannel(n, pauli_twirl_weights(ch));
}

void BellDiagonal::validate() const {
  if (p00 < -1e-15 || p01 < -1e-15 || p10 < -1e-15 || p11 < -1e-15)
    throw DomainError("BellDiagonal weights must be nonnegative");
  if (std::abs(p00 + p01 + p10 + p11 - 1.0) > 1e-12) throw DomainError("BellDiagonal weights must sum to 1");
}

BellDiagonal bell_diagonal_from_rates(double e_b, double e_p, bool independent) {
  check_prob(e_b, "bell_diagonal_from_rates");
  check_prob(e_p, "bell_diagonal_from_rates");
  if (!independent) throw DomainError("bell_diagonal_from_rates: only the independent model is defined");
  return {(1 - e_b) * (1 - e_p), e_b * (1 - e_p), (1 - e_b) * e_p, e_b * e_p};
}

BellDiagonal werner(double p) {
  check_prob(p, "werner");
  return {1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p};
}

BranchState apply_pauli_branch(const PauliString& p, const BranchState& state) {
  if (p.n() != state.n) throw DomainError("apply_pauli_branch: dimension mismatch");
  cmat psi = to_ab_matrix(state);
  return from_ab_matrix(pauli_matrix(p) * psi);
}

cmat pair_state(const KrausChannel& ch) {
  ch.validate();
  const BranchState e = epr_state(1);
  const cmat phi = e.amp * e.amp.adjoint();
  cmat out = cmat::Zero(4, 4);
  for (const auto& k : ch.ops) {
    const cmat kk = kron(k, cmat::Identity(2, 2));
    out += kk * phi * kk.adjoint();
  }
  return out;
}

cmat pair_state(const PauliWeights& w) { return pair_state(pauli_kraus(w)); }

}  // namespace hd
