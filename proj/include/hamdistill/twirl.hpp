#pragma once

#include <random>
#include <vector>

#include "hamdistill/hamlib.hpp"

namespace hd {

struct TimeMeasure {
  enum class Kind { delta_limit, uniform, samples };
  Kind kind = Kind::delta_limit;
  double T = 0.0;              // uniform(T), in time units
  std::vector<double> times;   // samples
  int sample_count = 200;      // t draws when uniform(T) is sampled
  std::uint64_t seed = 7;

  static TimeMeasure delta() { return {}; }
  static TimeMeasure uniform(double T, int sample_count = 200, std::uint64_t seed = 7);
  static TimeMeasure sampled(std::vector<double> times);
  void validate() const;
  std::string describe() const;
};

// Average of e^{-i g t} under the measure, g in rad per time unit.
cplx gap_filter(const TimeMeasure& mu, double g);

// Clusters of equal gaps lambda_k - lambda_l, label indexed by k*d + l.
struct GapClusters {
  std::vector<int> label;
  int count = 0;
  double tol = 0.0;
  bool degenerate = false;  // any coincidence beyond the trivial zero gaps
};
GapClusters cluster_gaps(const rvec& eigenvalues, double rel_tol = 1e-9);

// Treats each column of x (length d*d, index a*d+b) as a d x d matrix M and
// replaces it by A M B^T. Equivalent to (A (x) B) x.
cmat left_apply(const cmat& x, const cmat& a, const cmat& b, Exec exec = Exec::parallel);
// (V^dag (x) V^T) x (V (x) V*): A-then-B ordered operator into the V product frame.
cmat to_frame(const cmat& x, const cmat& v, Exec exec = Exec::parallel);
// Inverse of to_frame.
cmat from_frame(const cmat& x, const cmat& v, Exec exec = Exec::parallel);
// Multiplies frame element (ij),(kl) by the measure's filter of l_i-l_j-l_k+l_l.
void apply_gap_filter(cmat& x, const SpectralHamiltonian& h, const TimeMeasure& mu,
                      Exec exec = Exec::parallel);

DensityOperator twirl_density(const SpectralHamiltonian& h, const DensityOperator& rho,
                              const TimeMeasure& mu, Exec exec = Exec::parallel);

// Observable for twirl_branch_expectation: a dense interleaved operator, or the
// identical-outcome projector given implicitly by (m, basis).
struct Observable {
  bool dense = false;
  cmat op;
  int m = 0;
  MeasurementBasis basis;
  static Observable from_dense(cmat op) { return {true, std::move(op), 0, {}}; }
  static Observable identical_outcome(int m, const MeasurementBasis& b) { return {false, {}, m, b}; }
};

double twirl_branch_expectation(const SpectralHamiltonian& h, const BranchState& branch,
                                const Observable& obs, const TimeMeasure& mu,
                                Exec exec = Exec::parallel);

cmat haar_first_twirl_oracle(const cmat& x);
cmat haar_second_twirl_oracle(const cmat& x);
cmat swap_operator(int d);

}  // namespace hd
