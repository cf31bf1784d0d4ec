#pragma once

#include <random>
#include <vector>

#include "hamdistill/twirl.hpp"

namespace hd {

// Time-averaged weight that passes the identical-outcome check (survival) and
// the overlap of the kept pairs with |Phi+> (good, unnormalized).
struct BranchValue {
  double survival = 0.0;
  double good = 0.0;
};

// Evaluates Pauli branches of the twirled EPR ensemble against the
// identical-outcome measurement, working in the eigenbasis of H. Branch
// amplitudes are a = U^dag Psi U for an AB-matrix state Psi.
class BranchEngine {
 public:
  BranchEngine(const SpectralHamiltonian& h, int m, const MeasurementBasis& basis,
               const TimeMeasure& mu, Exec exec = Exec::parallel);

  static cmat eigen_amplitudes(const SpectralHamiltonian& h, const PauliString& p);
  static cmat eigen_amplitudes(const SpectralHamiltonian& h, const cmat& psi_ab);

  int m() const { return m_; }
  // True when evaluate() returns the exact time average for the measure.
  bool exact() const { return exact_; }
  BranchValue evaluate(const cmat& a) const;
  BranchValue evaluate_at(const cmat& a, double t) const;
  // Delta limit with the shared-cluster part supplied as c = U B U^dag from
  // GapPhaseSampler::draw; singleton and diagonal terms stay exact.
  BranchValue evaluate_with_shared(const cmat& a, const cmat& c) const;
  double draw_time(std::mt19937_64& rng) const;

 private:
  struct Group {
    std::vector<int> k, l;
    std::vector<int> keys;  // k*d + l
  };
  BranchValue eval_delta(const cmat& a) const;
  BranchValue eval_unshared(const cmat& a) const;
  BranchValue eval_group_pairwise(const cmat& a, const Group& g) const;
  BranchValue eval_group_blocks(const cmat& a, const Group& g) const;
  BranchValue eval_uniform_exact(const cmat& a) const;

  int n_ = 0, m_ = 0;
  Eigen::Index d_ = 0, dp_ = 0, nx_ = 0;
  rvec lambda_;  // scaled to rad per time unit
  cmat ut_;      // W U
  MeasurementBasis::Kind basis_kind_ = MeasurementBasis::Kind::hadamard;
  cmat pre_;     // C^dag for the Clifford-conjugated basis, else empty
  TimeMeasure mu_;
  bool exact_ = true;

  // delta limit
  std::vector<unsigned char> kind_;  // 0 singleton, 1 diagonal fast group, 2 general
  rmat q_, g_, s_;
  std::vector<Group> groups_;
  std::vector<unsigned char> use_pairwise_;

  // uniform(T), exact quadratic forms over vec(a)
  cmat ks_, kg_;
};

// Monte-Carlo stand-in for the delta-limit projection on gap clusters with
// several members. Each cluster gets an independent uniform phase, so every
// cross-cluster term averages to zero and E[evaluate_with_shared] equals the
// exact delta-limit value. Cost per draw is two d x d products, shared by all m.
class GapPhaseSampler {
 public:
  explicit GapPhaseSampler(const SpectralHamiltonian& h);

  bool active() const { return !keys_.empty(); }
  std::size_t shared_entries() const { return keys_.size(); }
  cmat draw(const cmat& a, std::mt19937_64& rng) const;

 private:
  Eigen::Index d_ = 0;
  cmat u_;
  rmat ur_;  // real eigenvectors when available
  std::vector<int> keys_, cluster_;
  int clusters_ = 0;
};

}  // namespace hd
