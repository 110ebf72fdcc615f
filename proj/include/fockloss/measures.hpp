// fockloss/measures.hpp
//
// Entanglement quantities. Pure-state measures are functions of the Schmidt
// coefficients c_k (sum c_k^2 = 1); mixed-state quantities are the negativity
// (any dimension) and the entanglement of formation in the two regimes where a
// closed form exists: two-qubit states (Wootters concurrence) and symmetric
// Gaussian states (lossy two-mode squeezed vacuum).
//
// All logarithms are base 2, so entropies are in ebits.

#pragma once

#include <span>
#include <vector>

#include "fockloss/fock_space.hpp"
#include "fockloss/linalg.hpp"

namespace fockloss {

inline constexpr double kSubspaceLeakageTolerance = 1e-8;

struct SchmidtSpectrum {
  std::vector<double> coefficients;  // descending, nonnegative
  ComplexMatrix basis_a;             // column k is |phi_k>_A
  ComplexMatrix basis_b;             // column k is |chi_k>_B
};

SchmidtSpectrum schmidt(const PureBipartiteState& psi);

/// -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
double binary_entropy(double x);

/// -sum c_k^2 log2 c_k^2.
double entanglement_entropy(std::span<const double> coefficients);
double entanglement_entropy(const SchmidtSpectrum& s);

/// ((sum c_k)^2 - 1) / 2.
double pure_negativity(std::span<const double> coefficients);
double pure_negativity(const SchmidtSpectrum& s);

/// 1 - sum c_k^4 (linearized mixedness of the reduced state).
double purity_measure(std::span<const double> coefficients);
double purity_measure(const SchmidtSpectrum& s);

/// (|rho^{T_A}|_1 - 1) / 2, computed from the eigenvalues of the partial
/// transpose.
double negativity(const DensityOperator& rho);

/// Two-dimensional subspace per mode (columns orthonormal) on which a state is
/// declared to live. The Wootters spin flip is taken in this basis.
struct QubitSubspace {
  ComplexMatrix basis_a;  // dim x 2
  ComplexMatrix basis_b;  // dim x 2

  /// span{|0>, |1>} in both modes.
  static QubitSubspace fock01(const Truncation& t);
};

/// 4x4 matrix (B_A (x) B_B)^H rho (B_A (x) B_B). Throws ContractViolation when
/// the weight outside the subspace exceeds 1e-8.
ComplexMatrix restrict_to_qubits(const DensityOperator& rho, const QubitSubspace& subspace);

/// Wootters concurrence of a 4x4 two-qubit density matrix.
double concurrence(const ComplexMatrix& rho4);
double concurrence(const DensityOperator& rho, const QubitSubspace& subspace);

/// Entanglement of formation h((1 + sqrt(1 - C^2)) / 2).
double eof_from_concurrence(double c);
double eof_two_qubit(const ComplexMatrix& rho4);
double eof_two_qubit(const DensityOperator& rho, const QubitSubspace& subspace);

/// Entanglement entropy of the (untruncated) two-mode squeezed vacuum with
/// mean photon number nbar over both modes; each reduced state is thermal
/// with mean nbar/2.
double tmss_entropy_from_nbar(double nbar);

/// Inverse of tmss_entropy_from_nbar by bisection (absolute accuracy 1e-10).
double tmss_nbar_from_entropy(double entropy);

/// Entanglement of formation of the two-mode squeezed vacuum (mean photon
/// number nbar) after symmetric loss with transmissivity eta.
double gaussian_symmetric_eof(double nbar, double eta);

/// EPR variance min(<(dx_A - dx_B)^2>, ...)/2 of the lossy state in vacuum
/// units; the closed-form EoF is a function of this quantity alone.
double gaussian_epr_variance(double nbar, double eta);

/// Negativity of the lossy two-mode squeezed vacuum, (1/Delta - 1)/2.
double gaussian_symmetric_negativity(double nbar, double eta);

struct MultimodeCounts {
  double superposition_ebits;  // log2 M
  double product_tmss_ebits;   // M * E_tmss(2/M)
};

/// Two photons spread over M modes per party: the equal superposition of the
/// M single-pair terms versus a product of M squeezed pairs of 2/M photons.
MultimodeCounts multimode_counts(int modes);

}  // namespace fockloss
