#pragma once

#include <array>
#include <random>
#include <vector>

#include "hamdistill/qcore.hpp"

namespace hd {

// Single-qubit Pauli weights in the order I, X, Y, Z.
using PauliWeights = std::array<double, 4>;

// i.i.d. product Pauli channel: c_P = prod_q w_q[P_q].
class PauliChannel {
 public:
  PauliChannel() = default;
  PauliChannel(int n, const PauliWeights& w);
  explicit PauliChannel(std::vector<PauliWeights> per_site);

  int n() const { return static_cast<int>(site_.size()); }
  const PauliWeights& site(int q) const { return site_[static_cast<std::size_t>(q)]; }
  double weight(const PauliString& p) const;
  double c_identity() const;
  // All 4^n terms with nonzero weight; index order of PauliString::from_index.
  std::vector<std::pair<PauliString, double>> enumerate() const;
  PauliString sample(std::mt19937_64& rng) const;
  // Exact draw conditioned on P != I.
  PauliString sample_non_identity(std::mt19937_64& rng) const;

 private:
  std::vector<PauliWeights> site_;
};

struct KrausChannel {
  std::vector<cmat> ops;
  int qubits() const;
  // Throws DomainError when sum K^dag K deviates from I by more than tol.
  void validate(double tol = 1e-10) const;
  cmat apply(const cmat& rho) const;
};

struct BellDiagonal {
  double p00 = 1.0;  // Phi+
  double p01 = 0.0;  // Psi+
  double p10 = 0.0;  // Phi-
  double p11 = 0.0;  // Psi-
  void validate() const;
  double bit_error() const { return p01 + p11; }
  double phase_error() const { return p10 + p11; }
};

PauliChannel local_depolarizing(int n, double p);
PauliChannel local_dephasing(int n, double p);

KrausChannel depolarizing_kraus(double p);
KrausChannel amplitude_damping(double gamma);
KrausChannel pauli_kraus(const PauliWeights& w);
// Channel that applies `first` and then `second`.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

// Pauli transfer diagonal (1/2) tr(W E(W)) for W = I, X, Y, Z.
PauliWeights ptm_diagonal(const KrausChannel& ch);
PauliWeights pauli_twirl_weights(const KrausChannel& ch);
PauliChannel pauli_twirl_channel(const KrausChannel& ch, int n = 1);

BellDiagonal bell_diagonal_from_rates(double e_b, double e_p, bool independent = true);
BellDiagonal werner(double p);

BranchState apply_pauli_branch(const PauliString& p, const BranchState& state);

// Per-pair states (K (x) I)|Phi+><Phi+|(K (x) I)^dag, 4x4 in A,B order.
cmat pair_state(const KrausChannel& ch);
cmat pair_state(const PauliWeights& w);

}  // namespace hd
