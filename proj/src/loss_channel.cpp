// src/loss_channel.cpp

#include "fockloss/loss_channel.hpp"

#include <cmath>
#include <string>

#include "fockloss/error.hpp"

namespace fockloss {

namespace {

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// out(a, b, c, d) = sum_k w_k(a+k) w_k(c+k) in(a+k, b, c+k, d) on the A index
// pair, or the analogue on the B index pair. Tensor layout is the pair-index
// layout of the density matrix: row = a*dim + b, col = c*dim + d.
ComplexMatrix apply_on_mode(const LossChannel& ch, const ComplexMatrix& rho, Mode mode) {
  const std::size_t d = ch.truncation().dim();
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t k = 0; k < ch.kraus_count(); ++k) {
    for (std::size_t a = 0; a + k < d; ++a) {
      const double wa = ch.kraus_weight(k, a + k);
      if (wa == 0.0) continue;
      for (std::size_t c = 0; c + k < d; ++c) {
        const double w = wa * ch.kraus_weight(k, c + k);
        if (w == 0.0) continue;
        for (std::size_t s = 0; s < d; ++s) {
          for (std::size_t t = 0; t < d; ++t) {
            if (mode == Mode::A) {
              out(a * d + s, c * d + t) += w * rho((a + k) * d + s, (c + k) * d + t);
            } else {
              out(s * d + a, t * d + c) += w * rho(s * d + a + k, t * d + c + k);
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

LossChannel::LossChannel(double eta, Truncation truncation) : eta_(eta), truncation_(truncation) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ContractViolation("LossChannel: eta must lie in [0, 1], got " + std::to_string(eta));
  }
  const std::size_t d = truncation_.dim();
  weights_.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t n = k; n < d; ++n) {
      const double p = binomial(n, k) * std::pow(eta, static_cast<double>(n - k)) *
                       std::pow(1.0 - eta, static_cast<double>(k));
      weights_[k][n] = std::sqrt(p);
    }
  }
}

ComplexMatrix LossChannel::kraus_operator(std::size_t k) const {
  const std::size_t d = truncation_.dim();
  ComplexMatrix a(d, d);
  for (std::size_t n = k; n < d; ++n) a(n - k, n) = weights_[k][n];
  return a;
}

LossChannel build_loss_channel(double eta, Truncation truncation) { return LossChannel(eta, truncation); }

DensityOperator apply_two_mode(const LossChannel& mode_a, const LossChannel& mode_b, const DensityOperator& rho) {
  if (!(mode_a.truncation() == rho.truncation()) || !(mode_b.truncation() == rho.truncation())) {
    throw ContractViolation("apply_two_mode: channel and state truncations differ");
  }
  ComplexMatrix out = apply_on_mode(mode_b, apply_on_mode(mode_a, rho.matrix(), Mode::A), Mode::B);
  return DensityOperator(rho.truncation(), std::move(out), DensityOperator::StructurallyPositive{});
}

DensityOperator apply_two_mode(const LossChannel& channel, const DensityOperator& rho) {
  return apply_two_mode(channel, channel, rho);
}

ComplexMatrix apply_single_mode(const LossChannel& channel, const ComplexMatrix& rho) {
  const std::size_t d = channel.truncation().dim();
  if (rho.rows() != d || rho.cols() != d) throw ContractViolation("apply_single_mode: dimension mismatch");
  ComplexMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t a = 0; a + k < d; ++a)
      for (std::size_t c = 0; c + k < d; ++c)
        out(a, c) += channel.kraus_weight(k, a + k) * channel.kraus_weight(k, c + k) * rho(a + k, c + k);
  return out;
}

ComplexMatrix kraus_branch(const LossChannel& channel, const PureBipartiteState& psi, std::size_t k, std::size_t l) {
  if (!(channel.truncation() == psi.truncation())) throw ContractViolation("kraus_branch: truncation mismatch");
  const std::size_t d = channel.truncation().dim();
  if (k >= d || l >= d) throw ContractViolation("kraus_branch: Kraus index out of range");
  ComplexMatrix out(d, d);
  for (std::size_t n = k; n < d; ++n)
    for (std::size_t m = l; m < d; ++m)
      out(n - k, m - l) = channel.kraus_weight(k, n) * channel.kraus_weight(l, m) * psi.amplitude(n, m);
  return out;
}

CoherentDyadImage coherent_dyad_image(Complex alpha, Complex beta, double eta) {
  const Complex exponent = (1.0 - eta) * (std::conj(beta) * alpha - 0.5 * std::norm(alpha) - 0.5 * std::norm(beta));
  const double amp = std::sqrt(eta);
  return {std::exp(exponent), amp * alpha, amp * beta};
}

}  // namespace fockloss
