// fockloss/fock_space.hpp
//
// Truncated two-mode Fock space. Both modes share one photon cutoff n_max, so
// each mode has dimension n_max + 1 and the product space (n_max + 1)^2.
//
// Pair index layout (fixed, relied on by partial_transpose):
//     index(n_A, n_B) = n_A * (n_max + 1) + n_B

#pragma once

#include <cstddef>
#include <vector>

#include "fockloss/linalg.hpp"

namespace fockloss {

inline constexpr double kNormalizationTolerance = 1e-10;
inline constexpr double kDensityTolerance = 1e-8;

enum class Mode { A, B };

/// Photon-number cutoff shared by both modes.
class Truncation {
 public:
  explicit Truncation(int n_max);

  int n_max() const noexcept { return n_max_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(n_max_) + 1; }
  std::size_t pair_dim() const noexcept { return dim() * dim(); }
  std::size_t pair_index(std::size_t n_a, std::size_t n_b) const noexcept { return n_a * dim() + n_b; }

  friend bool operator==(const Truncation&, const Truncation&) = default;

 private:
  int n_max_;
};

/// Normalized pure state sum_{nm} alpha_{nm} |n>_A |m>_B.
class PureBipartiteState {
 public:
  /// Throws ContractViolation unless sum |alpha|^2 = 1 within 1e-10.
  PureBipartiteState(Truncation truncation, ComplexMatrix amplitudes);

  /// Rescales a nonzero amplitude matrix to unit norm.
  static PureBipartiteState normalized(Truncation truncation, ComplexMatrix amplitudes);

  const Truncation& truncation() const noexcept { return truncation_; }
  const ComplexMatrix& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(std::size_t n_a, std::size_t n_b) const { return amplitudes_(n_a, n_b); }

  /// Amplitudes flattened in pair-index order.
  std::vector<Complex> as_vector() const;

 private:
  Truncation truncation_;
  ComplexMatrix amplitudes_;
};

/// Hermitian, unit-trace, positive operator on the truncated product space.
class DensityOperator {
 public:
  /// Full validation: Hermitian, unit trace and spectrum >= -1e-8.
  DensityOperator(Truncation truncation, ComplexMatrix matrix);

  /// Skips the spectrum check. Used where positivity is structural (outer
  /// products, completely positive maps); Hermiticity and trace still checked.
  struct StructurallyPositive {};
  DensityOperator(Truncation truncation, ComplexMatrix matrix, StructurallyPositive);

  const Truncation& truncation() const noexcept { return truncation_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Complex operator()(std::size_t row, std::size_t col) const { return matrix_(row, col); }

 private:
  void check_shape_hermitian_trace() const;

  Truncation truncation_;
  ComplexMatrix matrix_;
};

DensityOperator pure_to_density(const PureBipartiteState& psi);

struct CoherentVector {
  std::vector<Complex> amplitudes;  // e^{-|a|^2/2} a^n / sqrt(n!), n = 0..n_max
  double tail_error;                // probability mass beyond n_max, not renormalized
};

CoherentVector coherent_vector(Complex alpha, Truncation truncation);

/// Mean photon number of both modes combined.
double mean_photon_number(const PureBipartiteState& psi);
double mean_photon_number(const DensityOperator& rho);

/// Reduced single-mode density matrix of the kept mode.
ComplexMatrix partial_trace(const DensityOperator& rho, Mode keep);

/// Transpose with respect to mode A:
///   <n_A, n_B| rho^{T_A} |m_A, m_B> = <m_A, n_B| rho |n_A, m_B>.
/// Pure index permutation, so it is exact and an involution.
ComplexMatrix partial_transpose(const DensityOperator& rho);
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const Truncation& truncation);

}  // namespace fockloss
