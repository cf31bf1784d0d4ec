#include "hamdistill/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hamdistill/distill.hpp"
#include "hamdistill/types.hpp"

namespace hd {

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("binary_entropy: x in [0,1] required");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

std::pair<double, double> haar_limit_fidelity_yield(double cI, int m, int n) {
  if (cI < 0 || cI > 1) throw DomainError("c_I in [0,1] required");
  if (m < 0 || m > n) throw DomainError("0 <= m <= n required");
  const double q = std::ldexp(1.0, -m);
  return {cI / (cI + q * (1.0 - cI)), (cI * (1.0 - q) + q) * (1.0 - static_cast<double>(m) / n)};
}

CliffordBound clifford_fidelity_bound(double p, int n, int m, int d_param, double delta) {
  if (p < 0 || p > 1) throw DomainError("p in [0,1] required");
  if (d_param < 1 || d_param > n) throw DomainError("1 <= d <= n required");
  const double r = static_cast<double>(d_param) / n;
  const double h = binary_entropy(r);
  const double l3 = std::log2(3.0);
  const double f0 = 1.0 - 0.75 * p;
  CliffordBound b;
  const double t1 = std::exp2(-n * (1.0 - h - r * l3 - delta));
  double t2 = 0.0;
  b.exponent1 = std::log2(4.0 / (4.0 - 3.0 * p)) - 1.0 + h + r * l3 + delta;
  if (p > 0.0) {
    t2 = std::exp2(-n * (std::log2(2.0 / (4.0 - 3.0 * p)) + r * std::log2((4.0 - 3.0 * p) / p)));
    b.exponent2 = 1.0 - r * std::log2((4.0 - 3.0 * p) / p);
  } else {
    b.exponent2 = -std::numeric_limits<double>::infinity();
  }
  b.delta = t1 + t2;
  const double fn = std::pow(f0, n);
  b.bound = 1.0 / (1.0 + (b.delta + std::ldexp(1.0, -m) * (1.0 - b.delta - fn)) / fn);
  return b;
}

DiagonalSurvival diagonal_survival(double p, int n, int m) {
  if (m < 0 || m > n) throw DomainError("0 <= m <= n required");
  const double a = 1.0 - 0.75 * p, b = 1.0 - 0.5 * p;
  DiagonalSurvival s;
  s.p1 = std::pow(a, n);
  s.p2 = std::pow(a, m) * (std::pow(b, n - m) - std::pow(a, n - m));
  s.p3 = std::ldexp(1.0, -m) * (1.0 - std::pow(b, n));
  return s;
}

QkdRate diagonal_qkd_rate(double p, int n, int m) {
  if (p < 0 || p >= 1) throw DomainError("p in [0,1) required");
  if (m < 0 || m >= n) throw DomainError("0 <= m < n required");
  const double a = 1.0 - 0.75 * p, b = 1.0 - 0.5 * p;
  const double A = std::pow(a, m) * std::pow(b, n - m);
  const double B = std::ldexp(1.0, -m) * (1.0 - std::pow(b, n));
  QkdRate q;
  q.e_p = (0.5 * B + (p / (4.0 - 2.0 * p)) * A) / (A + B);
  q.e_b = 0.5 * p / (1.0 + std::pow(b, n - m) * (std::pow(2.0 - 1.5 * p, m) - std::pow(b, m)));
  q.rate = (A + B) * (1.0 - binary_entropy(q.e_p)) * (1.0 - static_cast<double>(m) / n);
  return q;
}

std::pair<double, double> diagonal_residual_errors(double e_b, double e_p, int n, int m) {
  const double a = 1.0 - e_b, c = (1.0 - e_b) * (1.0 - e_p);
  const double A = std::pow(c, m) * std::pow(a, n - m);
  const double B = std::ldexp(1.0, -m) * (1.0 - std::pow(a, n));
  const double eb = e_b / (1.0 + std::pow(a, n - m) * (std::pow(2.0 * c, m) - std::pow(a, m)));
  const double ep = (A + B) > 0 ? (e_p * A + 0.5 * B) / (A + B) : 0.5;
  return {eb, ep};
}

namespace {
// Largest x in [lo, hi] with f(x) > 0, by grid scan then bisection.
double last_positive(const std::function<double(double)>& f, double lo, double hi, int grid, double tol) {
  double prev = lo;
  if (!(f(lo) > 0)) return lo;
  if (f(hi) > 0) return hi;
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    if (f(x) > 0) prev = x;  // last sign change wins
  }
  double a = prev, b = std::min(hi, prev + (hi - lo) / grid);
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    (f(mid) > 0 ? a : b) = mid;
  }
  return a;
}
}  // namespace

ToleranceReport noise_tolerance(double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    ToleranceReport rep;
    rep.m_over_n = r;
    rep.bracket_ok = false;
    return rep;
  }
  auto f = [r](double p) { return (1.0 - r) * std::log1p(-0.5 * p) + r * std::log(2.0 - 1.5 * p); };
  double lo = 0.0, hi = 2.0 / 3.0;
  ToleranceReport rep;
  rep.m_over_n = r;
  if (!(f(lo) > 0.0) || f(hi) > 0.0) {
    rep.bracket_ok = false;
    return rep;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  rep.p_tol = 0.5 * (lo + hi);
  rep.error_rate_tol = 0.5 * rep.p_tol;
  return rep;
}

double finite_tolerance(int n, int m, double f_ec) {
  if (m < 1 || m >= n) throw DomainError("finite_tolerance: 1 <= m < n required");
  auto cond = [&](double p) {
    const QkdRate q = diagonal_qkd_rate(p, n, m);
    return 1.0 - f_ec * binary_entropy(q.e_b) - binary_entropy(q.e_p);
  };
  const double p = last_positive(cond, 1e-12, 2.0 / 3.0, 4000, 1e-10);
  return 0.5 * p;
}

std::pair<double, int> finite_tolerance_best(int n, double f_ec) {
  double best = -1.0;
  int bm = 1;
  for (int m = 1; m < n; ++m) {
    const double v = finite_tolerance(n, m, f_ec);
    if (v > best) {
      best = v;
      bm = m;
    }
  }
  return {best, bm};
}

void LinkBudget::validate() const {
  if (e_d < 0 || e_d > 0.5 || beta < 0 || y0 < 0 || alpha_db < 0 || f_ec < 0)
    throw DomainError("invalid link budget");
}

LinkErrors link_error_rates(double l, const LinkBudget& lb) {
  if (l < 0) throw DomainError("distance must be nonnegative");
  lb.validate();
  LinkErrors e;
  e.eta = std::pow(10.0, -lb.alpha_db * l / 10.0);
  const double den = e.eta + (1.0 - e.eta) * lb.y0;
  const double dark = 0.5 * (1.0 - e.eta) * lb.y0;
  e.e_b = (e.eta * lb.e_d + dark) / den;
  e.e_p = (e.eta * 0.5 * (1.0 - std::exp(-lb.beta * l / 2.0)) + dark) / den;
  return e;
}

std::string ProtocolChoice::name() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::one_way: return "one_way";
    case Kind::recurrence: return "recurrence(" + std::to_string(rounds) + ")";
    case Kind::hamiltonian: return "hamiltonian(" + std::to_string(n) + "," + std::to_string(m) + ")";
    case Kind::haar_hamiltonian:
      return "haar_hamiltonian(" + std::to_string(n) + "," + std::to_string(m) + ")";
  }
  return "?";
}

std::string ProtocolChoice::token() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::one_way: return "one_way";
    case Kind::recurrence: return "recurrence:" + std::to_string(rounds);
    case Kind::hamiltonian: return "hamiltonian:" + std::to_string(n) + ":" + std::to_string(m);
    case Kind::haar_hamiltonian: return "haar_hamiltonian:" + std::to_string(n) + ":" + std::to_string(m);
  }
  return "?";
}

ProtocolChoice parse_protocol_choice(const std::string& token) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = token.find(':', start);
    parts.push_back(token.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  auto num = [&](std::size_t i) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[i].size()) throw DomainError("bad integer in protocol '" + token + "'");
    return v;
  };
  const std::string& k = parts[0];
  if (k == "none" && parts.size() == 1) return ProtocolChoice::none();
  if (k == "one_way" && parts.size() == 1) return ProtocolChoice::one_way();
  if (k == "recurrence" && parts.size() == 2) {
    const int r = num(1);
    if (r < 0) throw DomainError("recurrence rounds must be >= 0");
    return ProtocolChoice::recurrence(r);
  }
  if ((k == "hamiltonian" || k == "haar_hamiltonian") && parts.size() == 3) {
    const int n = num(1), m = num(2);
    if (n < 2 || m < 1 || m >= n) throw DomainError("protocol '" + token + "' needs 1 <= m < n");
    return k == "hamiltonian" ? ProtocolChoice::hamiltonian(n, m) : ProtocolChoice::haar_hamiltonian(n, m);
  }
  throw DomainError("unknown protocol '" + token +
                    "' (expected none, one_way, recurrence:R, hamiltonian:N:M or haar_hamiltonian:N:M)");
}

double qkd_rate_expression(double l, const ProtocolChoice& proto, const LinkBudget& lb) {
  const LinkErrors e = link_error_rates(l, lb);
  double eb = e.e_b, ep = e.e_p;
  switch (proto.kind) {
    case ProtocolChoice::Kind::none:
    case ProtocolChoice::Kind::one_way: break;
    case ProtocolChoice::Kind::recurrence: {
      const BellDiagonal s = iterate_recurrence(bell_diagonal_from_rates(eb, ep), proto.rounds).first;
      eb = s.bit_error();
      ep = s.phase_error();
      break;
    }
    case ProtocolChoice::Kind::hamiltonian:
    case ProtocolChoice::Kind::haar_hamiltonian: {
      const auto r = diagonal_residual_errors(eb, ep, proto.n, proto.m);
      eb = r.first;
      ep = r.second;
      break;
    }
  }
  auto h = [](double x) { return binary_entropy(std::clamp(x, 0.0, 1.0)); };
  return 1.0 - lb.f_ec * h(eb) - h(ep);
}

DistanceReport max_distance(const ProtocolChoice& proto, const LinkBudget& lb) {
  auto f = [&](double l) { return qkd_rate_expression(l, proto, lb); };
  DistanceReport r;
  if (!(f(0.0) > 0.0)) {
    r.reachable = false;
    return r;
  }
  r.distance = last_positive(f, 0.0, 2000.0, 4000, 1e-3);
  return r;
}

double repeater_fidelity(double l, const LinkBudget& lb, const ProtocolChoice& proto) {
  const LinkErrors e = link_error_rates(l, lb);
  const BellDiagonal s = bell_diagonal_from_rates(e.e_b, e.e_p);
  switch (proto.kind) {
    case ProtocolChoice::Kind::none:
    case ProtocolChoice::Kind::one_way: return s.p00;
    case ProtocolChoice::Kind::recurrence: return iterate_recurrence(s, proto.rounds).first.p00;
    case ProtocolChoice::Kind::hamiltonian:
    case ProtocolChoice::Kind::haar_hamiltonian: {
      const double cI = std::pow(s.p00, proto.n);
      return haar_limit_fidelity_yield(cI, proto.m, proto.n).first;
    }
  }
  return 0.0;
}

double repeater_threshold_distance(const LinkBudget& lb, const ProtocolChoice& proto, double threshold) {
  auto f = [&](double l) { return repeater_fidelity(l, lb, proto) - threshold; };
  return last_positive([&](double l) { return f(l) >= 0 ? 1.0 : -1.0; }, 0.0, 2000.0, 4000, 1e-3);
}

}  // namespace hd
