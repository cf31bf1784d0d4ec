#pragma once

#include <map>
#include <random>
#include <string>

#include "hamdistill/qcore.hpp"

namespace hd {

enum class Family { diagonal, tfim_periodic, trapped_ion, rydberg, haar_random, clifford_diagonal };

std::string family_name(Family f);
Family parse_family(const std::string& s);

struct HamiltonianSpec {
  Family family = Family::diagonal;
  int n = 1;
  std::map<std::string, double> params;  // family-specific overrides
  std::uint64_t seed = 1;
};

struct SpectralHamiltonian {
  cmat matrix;
  SpectralDecomposition spectrum;
  HamiltonianSpec spec;
  // Phases are lambda * time_scale * t for t in the family's time units.
  double time_scale = 1.0;
  std::string time_unit_label = "arb";  // physical time of one unit
  double unit_in_physical = 1.0;        // one unit expressed in time_unit_label
  bool real = false;                    // matrix and eigenvectors are real
  bool permutation = false;             // eigenvectors form a permutation matrix
  cmat clifford;                        // C for clifford_diagonal
  int n() const { return spec.n; }
};

// Finalizes flags and the spectrum for an already filled matrix.
SpectralHamiltonian make_spectral(cmat matrix, HamiltonianSpec spec);

SpectralHamiltonian build_rydberg(int n, double omega, double detuning, double c6, double spacing,
                                  double phi);
SpectralHamiltonian build_trapped_ion(int n, double j0, double b, double alpha);
SpectralHamiltonian build_tfim_periodic(int n, double j0, double b);
SpectralHamiltonian build_diagonal(int n, std::uint64_t seed);
SpectralHamiltonian build_haar_random(int n, std::uint64_t seed);
SpectralHamiltonian build_clifford_diagonal(int n, int depth, std::uint64_t seed);
SpectralHamiltonian build_hamiltonian(const HamiltonianSpec& spec);

// Diagonal spectrum used by build_diagonal, exposed for composite families.
rvec diagonal_spectrum(int n, std::uint64_t seed);

cmat sample_haar_unitary(int dim, std::mt19937_64& rng);
cmat sample_haar_unitary(int dim, std::uint64_t seed);
cmat sample_random_clifford(int n, int depth, std::uint64_t seed);

struct GapReport {
  double min_spacing = 0.0;
  double min_collision = 0.0;
  bool pass = false;
};
GapReport check_gap_nondegeneracy(const rvec& eigenvalues, double tol);

// Stream derivation so that sample i depends only on (seed, i).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hd
