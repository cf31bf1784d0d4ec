#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamdistill/noise.hpp"
#include "hamdistill/twirl.hpp"

namespace hd {

struct NoiseSpec {
  enum class Kind { depolarizing, dephasing, amplitude_damping, depolarizing_amplitude_damping };
  Kind kind = Kind::depolarizing;
  double p = 0.2;
  double gamma = 0.0;

  bool is_pauli() const { return kind == Kind::depolarizing || kind == Kind::dephasing; }
  KrausChannel kraus() const;  // single-qubit channel
  PauliWeights pauli_weights(bool twirl) const;
  std::string name() const;
};

NoiseSpec::Kind parse_noise_kind(const std::string& s);

enum class SimPath { pauli_branch, density_matrix, automatic };

struct ProtocolConfig {
  int n = 3;
  int m = 1;
  HamiltonianSpec hamiltonian;
  NoiseSpec noise;
  TimeMeasure mu;
  MeasurementBasis::Kind basis = MeasurementBasis::Kind::hadamard;
  bool pauli_twirl_enabled = false;
  SimPath path = SimPath::automatic;
  int samples = 100000;
  std::uint64_t seed = 1;
  Exec exec = Exec::parallel;
};

struct ProtocolOutcome {
  // Identity-branch weight over surviving weight for Pauli noise; the kept-pair
  // overlap fidelity for untwirled non-Pauli noise.
  double fidelity = 0.0;
  double yield_value = 0.0;
  double per_pair_fidelity = 0.0;
  double survival_probability = 0.0;
  // Overlap of the normalized kept-pair state with |Phi+>^(n-m).
  double overlap_fidelity = 0.0;
  std::optional<double> std_error;
  std::optional<double> overlap_std_error;
  bool exact = true;
  int samples = 0;
  std::string path;
  // Degenerate gap clusters were estimated with random cluster phases.
  bool phase_sampled = false;
};

ProtocolOutcome run_protocol(const ProtocolConfig& cfg);
ProtocolOutcome run_protocol(const ProtocolConfig& cfg, const SpectralHamiltonian& h);
// Several m values on one Hamiltonian, sharing branch samples and the twirled state.
std::vector<ProtocolOutcome> run_protocol_sweep_m(const ProtocolConfig& cfg, const SpectralHamiltonian& h,
                                                  const std::vector<int>& ms);

SimPath resolve_path(const ProtocolConfig& cfg);

std::pair<double, double> fidelity_yield_from_detection(double c_identity, double detection_rate,
                                                        int m, int n);

std::pair<BellDiagonal, double> recurrence_round(const BellDiagonal& s);
std::pair<BellDiagonal, double> iterate_recurrence(const BellDiagonal& s, int rounds);
double hashing_yield(double e_b, double e_p);

}  // namespace hd
