// fockloss/state_families.hpp
//
// Constructors for the state families studied here:
//
//   * two-mode squeezed vacuum  sqrt(1-l) sum_n l^{n/2} |n>|n>, truncated
//   * single-photon family      sqrt(p)|phi>|chi> + sqrt(1-p)|phi_perp>|chi_perp>
//                               with |phi> = cos a|0> + sin a|1>, |chi> likewise
//                               with angle b
//   * entangled coherent states over the even/odd cat basis
//                               |+-> = (|x> +- |-x>) / sqrt(2 +- 2 exp(-2x^2))
//       kind 1: sqrt(p)|++> + sqrt(1-p) e^{i phi} |-->
//       kind 2: sqrt(1-p)|++> + sqrt(p) e^{i phi} |-->
//       kind 3: sqrt(p)|+-> + sqrt(1-p) e^{i phi} |-+>

#pragma once

#include <vector>

#include "fockloss/fock_space.hpp"
#include "fockloss/linalg.hpp"
#include "fockloss/measures.hpp"

namespace fockloss {

inline constexpr double kEmbeddingTolerance = 1e-10;

struct TmssState {
  PureBipartiteState state;
  double truncation_error;  // weight discarded before renormalization
};

/// Two-mode squeezed vacuum with (untruncated) mean photon number nbar, cut at
/// the truncation and renormalized.
TmssState tmss(double nbar, Truncation truncation);

/// Squeezing parameter lambda = |gamma|^2 = nbar / (nbar + 2).
double tmss_lambda(double nbar);

/// First `rank` Schmidt coefficients lambda^{n/2}, renormalized.
std::vector<double> truncated_tmss_coefficients(double lambda, int rank);

/// lambda whose rank-truncated spectrum has the given entanglement entropy.
/// Throws ContractViolation when the entropy exceeds log2(rank).
double truncated_tmss_lambda_for_entropy(double entropy, int rank);

/// Sum_k c_k^2 (2k): photon number of sum_k c_k |k>|k>.
double diagonal_mean_photon_number(std::span<const double> coefficients);

struct SinglePhotonFamilyParams {
  double p;            // in [0, 1/2]
  double alpha_angle;  // mode A basis rotation
  double beta_angle;   // mode B basis rotation
};

/// State on the {|0>,|1>} x {|0>,|1>} block of the given truncation.
PureBipartiteState single_photon_state(const SinglePhotonFamilyParams& params, Truncation truncation = Truncation(1));

/// Closed form p (sin^2 a + sin^2 b) + (1-p)(cos^2 a + cos^2 b).
double single_photon_mean_photon_number(const SinglePhotonFamilyParams& params);

enum class EcsKind { EvenPairMinor = 1, EvenPairMajor = 2, Crossed = 3 };

struct EcsParams {
  EcsKind kind;
  double p;      // in [0, 1/2]
  double phi;    // relative phase
  double alpha;  // real coherent amplitude > 0
};

/// Coefficient matrix of the state in the orthonormal cat basis {|+>, |->}.
ComplexMatrix ecs_cat_coefficients(const EcsParams& params);

struct EcsState {
  PureBipartiteState state;
  double embedding_error;  // weight lost to the Fock cutoff before renormalization
};

/// Fock-basis embedding. Throws ContractViolation when the discarded weight
/// exceeds 1e-10.
EcsState ecs_state(const EcsParams& params, Truncation truncation);

/// Closed-form mean photon number: cat states carry x^2 tanh x^2 (even) and
/// x^2 coth x^2 (odd) photons.
double ecs_mean_photon_number(const EcsParams& params);

/// Orthonormal even/odd cat basis of amplitude x embedded in the truncation,
/// as the two columns of a dim x 2 matrix.
ComplexMatrix cat_basis(double amplitude, Truncation truncation);

/// Decohered state in the cat basis of amplitude sqrt(eta) alpha, from the
/// closed-form coherent dyad image. 4x4, exact (no Fock truncation).
ComplexMatrix decohered_ecs_qubit_state(const EcsParams& params, double eta);

/// EoF of the decohered entangled coherent state (closed-form route).
double decohered_ecs_eof(const EcsParams& params, double eta);

/// Same quantity through the Fock pipeline: embed, apply the Kraus channel,
/// restrict to the cat basis of amplitude sqrt(eta) alpha (leakage checked),
/// apply the Wootters formula.
double decohered_ecs_eof_fock(const EcsParams& params, double eta, Truncation truncation);

/// Smallest cutoff whose coherent tail at amplitude alpha is below tolerance.
Truncation truncation_for_coherent(double alpha, double tail_tolerance = 1e-12, int minimum_n_max = 1);

}  // namespace fockloss
