// fockloss/loss_channel.hpp
//
// Photon absorption: a coherent state |a> of a mode loses amplitude to an
// unobserved environment, |a>|0>_E -> |sqrt(eta) a>|sqrt(1-eta) a>_E, where
// eta is the fraction of photons that survives.
//
// Two realizations are provided and checked against each other in the tests:
//   * Kraus operators in the truncated Fock basis,
//       A_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>,   k = 0..n_max
//     Loss never raises the photon number, so the truncated family is complete
//     without tail error.
//   * The closed-form image of a coherent dyad |a><b|.

#pragma once

#include <cstddef>
#include <vector>

#include "fockloss/fock_space.hpp"
#include "fockloss/linalg.hpp"

namespace fockloss {

class LossChannel {
 public:
  /// Throws ContractViolation when eta is outside [0, 1].
  LossChannel(double eta, Truncation truncation);

  double eta() const noexcept { return eta_; }
  const Truncation& truncation() const noexcept { return truncation_; }

  std::size_t kraus_count() const noexcept { return weights_.size(); }

  /// Dense single-mode Kraus matrix A_k.
  ComplexMatrix kraus_operator(std::size_t k) const;

  /// Nonzero entry of A_k in column n, i.e. <n-k| A_k |n>. Zero when k > n.
  double kraus_weight(std::size_t k, std::size_t n) const { return weights_[k][n]; }

 private:
  double eta_;
  Truncation truncation_;
  std::vector<std::vector<double>> weights_;  // weights_[k][n]
};

LossChannel build_loss_channel(double eta, Truncation truncation);

/// Both modes through the same channel.
DensityOperator apply_two_mode(const LossChannel& channel, const DensityOperator& rho);

/// Independent channels per mode; the experiments always pass the same one.
DensityOperator apply_two_mode(const LossChannel& mode_a, const LossChannel& mode_b, const DensityOperator& rho);

/// Single-mode density matrix through the channel.
ComplexMatrix apply_single_mode(const LossChannel& channel, const ComplexMatrix& rho);

/// Unnormalized (A_k (x) A_l) psi, the branch in which the two environments
/// received k and l photons respectively.
ComplexMatrix kraus_branch(const LossChannel& channel, const PureBipartiteState& psi, std::size_t k, std::size_t l);

/// The channel maps |a><b| to scale * |sqrt(eta) a><sqrt(eta) b|.
struct CoherentDyadImage {
  Complex scale;
  Complex ket_amplitude;
  Complex bra_amplitude;
};

CoherentDyadImage coherent_dyad_image(Complex alpha, Complex beta, double eta);

}  // namespace fockloss
