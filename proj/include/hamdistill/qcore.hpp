#pragma once

#include <string>
#include <vector>

#include "hamdistill/types.hpp"

namespace hd {

// n-qubit Pauli label with a phase i^phase_exp. Qubit 0 is the leftmost
// letter and the most significant bit of a basis index.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n);
  static PauliString parse(const std::string& s);
  static PauliString from_masks(int n, std::uint64_t x, std::uint64_t z);
  // Index in [0, 4^n): two bits per qubit (x bit, z bit), qubit 0 highest.
  static PauliString from_index(int n, std::uint64_t idx);

  int n() const { return static_cast<int>(letters_.size()); }
  int weight() const;
  char letter(int q) const { return letters_[q]; }
  void set(int q, char c);
  int phase_exp() const { return phase_; }
  cplx phase() const;
  bool is_identity() const;
  std::uint64_t x_mask() const;  // sites carrying X or Y
  std::uint64_t z_mask() const;  // sites carrying Z or Y
  int y_count() const;
  std::string str() const;
  // Letters of a contiguous block [first, first+count).
  PauliString slice(int first, int count) const;

  PauliString operator*(const PauliString& o) const;
  bool commutes_with(const PauliString& o) const;
  bool operator==(const PauliString& o) const {
    return letters_ == o.letters_ && phase_ == o.phase_;
  }

 private:
  std::vector<char> letters_;
  int phase_ = 0;
};

cmat pauli_matrix(const PauliString& p);
cmat kron(const cmat& a, const cmat& b);

// A 2n-qubit pure state in interleaved order A0,B0,A1,B1,...
struct BranchState {
  int n = 0;
  cvec amp;
};

// Dense 2n-qubit density operator in interleaved order.
struct DensityOperator {
  int n = 0;
  cmat mat;
};

BranchState epr_state(int n);

// Bit interleaving between the (a, b) register pair and the 2n-qubit index.
std::size_t interleave(std::size_t a, std::size_t b, int n);
void deinterleave(std::size_t idx, int n, std::size_t& a, std::size_t& b);

// |psi> = sum_ab Psi(a,b) |a>_A |b>_B, so (A (x) B)|psi> maps to A Psi B^T.
cmat to_ab_matrix(const BranchState& s);
BranchState from_ab_matrix(const cmat& psi);

// Reorder a 2n-qubit operator between interleaved order and A-then-B order.
cmat interleaved_to_ab(const cmat& op, int n);
cmat ab_to_interleaved(const cmat& op, int n);

struct MeasurementBasis {
  enum class Kind { computational, hadamard, clifford_conjugated };
  Kind kind = Kind::hadamard;
  cmat clifford;  // used by clifford_conjugated only

  static MeasurementBasis computational() { return {Kind::computational, {}}; }
  static MeasurementBasis hadamard() { return {Kind::hadamard, {}}; }
  static MeasurementBasis clifford_conjugated(const cmat& c) {
    return {Kind::clifford_conjugated, c};
  }
  std::string name() const;
};

// Alice's frame rotation W: the identical-outcome event becomes a
// computational-basis comparison of the first m qubits after W (x) W*.
cmat basis_rotation(int n, int m, const MeasurementBasis& basis);

cmat identical_outcome_projector(int n, int m, const MeasurementBasis& basis);

double state_fidelity(const DensityOperator& rho, const BranchState& psi);

struct SpectralDecomposition {
  rvec eigenvalues;  // ascending
  cmat vectors;      // columns are eigenvectors
};

SpectralDecomposition eigendecompose(const cmat& h);

bool is_hermitian(const cmat& a, double tol);
bool is_unitary(const cmat& u, double tol);

}  // namespace hd
