#pragma once

#include <string>
#include <utility>

namespace hd {

double binary_entropy(double x);

std::pair<double, double> haar_limit_fidelity_yield(double c_identity, int m, int n);

struct CliffordBound {
  double bound = 0.0;
  double delta = 0.0;      // the Delta term
  double exponent1 = 0.0;  // growth rates (per n, base 2) of the two terms of Delta / (1-3p/4)^n
  double exponent2 = 0.0;
};
CliffordBound clifford_fidelity_bound(double p, int n, int m, int d_param, double delta);

// Survival weights of the diagonal protocol in the Hadamard basis.
struct DiagonalSurvival {
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
  double fidelity() const { return p1 / (p1 + p2 + p3); }
  double total() const { return p1 + p2 + p3; }
};
DiagonalSurvival diagonal_survival(double p, int n, int m);

struct QkdRate {
  double rate = 0.0;
  double e_b = 0.0;
  double e_p = 0.0;
};
QkdRate diagonal_qkd_rate(double p, int n, int m);

// Residual bit and phase error of the diagonal protocol for independent
// per-pair bit error e_b and phase error e_p (reduces to the depolarizing
// forms at e_b = p/2, e_p = (p/4)/(1-p/2)).
std::pair<double, double> diagonal_residual_errors(double e_b, double e_p, int n, int m);

struct ToleranceReport {
  double p_tol = 0.0;
  double error_rate_tol = 0.0;
  double m_over_n = 0.0;
  bool bracket_ok = true;
};
ToleranceReport noise_tolerance(double m_over_n);

// Largest error rate p/2 with 1 - f H(e_b) - H(e_p) > 0 for the finite (n, m)
// diagonal protocol; f = 1 drops the error-correction overhead.
double finite_tolerance(int n, int m, double f_ec = 1.0);
std::pair<double, int> finite_tolerance_best(int n, double f_ec = 1.0);

struct LinkBudget {
  double e_d = 0.015;
  double beta = 2.82e-4;
  double y0 = 3e-8;
  double alpha_db = 0.21;
  double f_ec = 1.06;
  void validate() const;
};

struct LinkErrors {
  double e_b = 0.0, e_p = 0.0, eta = 1.0;
};
LinkErrors link_error_rates(double l_km, const LinkBudget& lb);

struct ProtocolChoice {
  enum class Kind { none, one_way, recurrence, hamiltonian, haar_hamiltonian };
  Kind kind = Kind::one_way;
  int rounds = 0;
  int n = 15, m = 12;
  static ProtocolChoice none() { return {Kind::none, 0, 0, 0}; }
  static ProtocolChoice one_way() { return {Kind::one_way, 0, 0, 0}; }
  static ProtocolChoice recurrence(int r) { return {Kind::recurrence, r, 0, 0}; }
  static ProtocolChoice hamiltonian(int n, int m) { return {Kind::hamiltonian, 0, n, m}; }
  static ProtocolChoice haar_hamiltonian(int n, int m) { return {Kind::haar_hamiltonian, 0, n, m}; }
  std::string name() const;
  std::string token() const;  // inverse of parse_protocol_choice
};

// Parses "none", "one_way", "recurrence:R", "hamiltonian:N:M", "haar_hamiltonian:N:M".
ProtocolChoice parse_protocol_choice(const std::string& token);

// Key-rate expression at distance l (positive means a key can be extracted).
double qkd_rate_expression(double l_km, const ProtocolChoice& proto, const LinkBudget& lb);

struct DistanceReport {
  double distance = 0.0;
  bool reachable = true;
};
DistanceReport max_distance(const ProtocolChoice& proto, const LinkBudget& lb);

double repeater_fidelity(double l_km, const LinkBudget& lb, const ProtocolChoice& proto);
// Largest l with repeater_fidelity >= threshold (bisection after a grid scan).
double repeater_threshold_distance(const LinkBudget& lb, const ProtocolChoice& proto, double threshold);

}  // namespace hd
