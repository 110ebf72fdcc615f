// src/state_families.cpp

#include "fockloss/state_families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fockloss/error.hpp"
#include "fockloss/loss_channel.hpp"

namespace fockloss {

namespace {

void require_weight(double p, const char* who) {
  if (!(p >= 0.0 && p <= 0.5)) throw ContractViolation(std::string(who) + ": p must lie in [0, 1/2]");
}

// Photon-number weight of the even and odd parts of |x> beyond n_max.
struct ParityTails {
  double even = 0.0;
  double odd = 0.0;
};

ParityTails parity_tails(double x, int n_max) {
  const double mean = x * x;
  ParityTails out;
  if (mean == 0.0) return out;
  double p = std::exp(-mean);
  for (int n = 1;; ++n) {
    p *= mean / n;
    if (n > n_max) {
      (n % 2 == 0 ? out.even : out.odd) += p;
      if (n > mean && p <= 1e-18 * (out.even + out.odd)) break;
      if (p == 0.0) break;
    }
  }
  return out;
}

// N_+ = 2 + 2 exp(-2x^2), N_- = 2 - 2 exp(-2x^2) without cancellation.
double cat_norm_plus(double x) { return 2.0 + 2.0 * std::exp(-2.0 * x * x); }
double cat_norm_minus(double x) { return -2.0 * std::expm1(-2.0 * x * x); }

// Channel image of the single-mode cat dyad |i><j| (i, j in {+, -}) expressed
// in the cat basis of amplitude sqrt(eta) x. Built from the coherent dyad
// image |s x><s' x| -> f_{ss'} |s x'><s' x'| with f_{+-} = g.
using CatSuperoperator = std::array<std::array<ComplexMatrix, 2>, 2>;

CatSuperoperator cat_superoperator(double x, double eta) {
  const double g = coherent_dyad_image(x, -x, eta).scale.real();
  const double one_minus_g = -std::expm1(-2.0 * (1.0 - eta) * x * x);
  const double np = cat_norm_plus(x);
  const double nm = cat_norm_minus(x);
  const double xo = std::sqrt(eta) * x;
  const double npo = cat_norm_plus(xo);
  const double nmo = cat_norm_minus(xo);

  CatSuperoperator k{};
  for (auto& row : k)
    for (auto& m : row) m = ComplexMatrix(2, 2);
  k[0][0](0, 0) = (1.0 + g) * npo / (2.0 * np);
  k[0][0](1, 1) = one_minus_g * nmo / (2.0 * np);
  k[1][1](0, 0) = one_minus_g * npo / (2.0 * nm);
  k[1][1](1, 1) = (1.0 + g) * nmo / (2.0 * nm);
  const double cross = std::sqrt(npo * nmo / (np * nm)) / 2.0;
  k[0][1](0, 1) = (1.0 + g) * cross;
  k[0][1](1, 0) = one_minus_g * cross;
  k[1][0](1, 0) = (1.0 + g) * cross;
  k[1][0](0, 1) = one_minus_g * cross;
  return k;
}

}  // namespace

double tmss_lambda(double nbar) {
  if (!(nbar >= 0.0)) throw ContractViolation("tmss: nbar must be >= 0");
  return nbar / (nbar + 2.0);
}

TmssState tmss(double nbar, Truncation truncation) {
  const double lambda = tmss_lambda(nbar);
  const std::size_t d = truncation.dim();
  ComplexMatrix amps(d, d);
  const double gamma = std::sqrt(lambda);
  double term = 1.0;
  for (std::size_t n = 0; n < d; ++n) {
    amps(n, n) = term;
    term *= gamma;
  }
  const double discarded = std::pow(lambda, static_cast<double>(d));
  return {PureBipartiteState::normalized(truncation, std::move(amps)), discarded};
}

std::vector<double> truncated_tmss_coefficients(double lambda, int rank) {
  if (rank < 1) throw ContractViolation("truncated_tmss_coefficients: rank must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractViolation("truncated_tmss_coefficients: lambda outside [0, 1]");
  std::vector<double> c(static_cast<std::size_t>(rank));
  double norm2 = 0.0;
  double term = 1.0;
  for (auto& ck : c) {
    ck = term;
    norm2 += term * term;
    term *= std::sqrt(lambda);
  }
  for (auto& ck : c) ck /= std::sqrt(norm2);
  return c;
}

double truncated_tmss_lambda_for_entropy(double entropy, int rank) {
  if (!(entropy >= 0.0) || entropy >= std::log2(static_cast<double>(rank))) {
    throw ContractViolation("truncated_tmss_lambda_for_entropy: entropy must lie in [0, log2(rank))");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (entanglement_entropy(truncated_tmss_coefficients(mid, rank)) < entropy ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double diagonal_mean_photon_number(std::span<const double> coefficients) {
  double n = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) n += 2.0 * static_cast<double>(k) * coefficients[k] * coefficients[k];
  return n;
}

PureBipartiteState single_photon_state(const SinglePhotonFamilyParams& params, Truncation truncation) {
  require_weight(params.p, "single_photon_state");
  const double ca = std::cos(params.alpha_angle), sa = std::sin(params.alpha_angle);
  const double cb = std::cos(params.beta_angle), sb = std::sin(params.beta_angle);
  const std::array<double, 2> phi{ca, sa}, phi_perp{-sa, ca};
  const std::array<double, 2> chi{cb, sb}, chi_perp{-sb, cb};
  const double w = std::sqrt(params.p);
  const double w_perp = std::sqrt(1.0 - params.p);
  ComplexMatrix amps(truncation.dim(), truncation.dim());
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t m = 0; m < 2; ++m) amps(n, m) = w * phi[n] * chi[m] + w_perp * phi_perp[n] * chi_perp[m];
  return PureBipartiteState::normalized(truncation, std::move(amps));
}

double single_photon_mean_photon_number(const SinglePhotonFamilyParams& params) {
  const double sa = std::sin(params.alpha_angle), sb = std::sin(params.beta_angle);
  const double ca = std::cos(params.alpha_angle), cb = std::cos(params.beta_angle);
  return params.p * (sa * sa + sb * sb) + (1.0 - params.p) * (ca * ca + cb * cb);
}

ComplexMatrix ecs_cat_coefficients(const EcsParams& params) {
  require_weight(params.p, "ecs_state");
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) throw ContractViolation("ecs_state: alpha must be > 0");
  if (!std::isfinite(params.phi)) throw ContractViolation("ecs_state: phi must be finite");
  const Complex phase = std::polar(1.0, params.phi);
  const double w = std::sqrt(params.p);
  const double w_other = std::sqrt(1.0 - params.p);
  ComplexMatrix c(2, 2);
  switch (params.kind) {
    case EcsKind::EvenPairMinor:
      c(0, 0) = w;
      c(1, 1) = w_other * phase;
      break;
    case EcsKind::EvenPairMajor:
      c(0, 0) = w_other;
      c(1, 1) = w * phase;
      break;
    case EcsKind::Crossed:
      c(0, 1) = w;
      c(1, 0) = w_other * phase;
      break;
    default:
      throw ContractViolation("ecs_state: unknown kind");
  }
  return c;
}

ComplexMatrix cat_basis(double amplitude, Truncation truncation) {
  const auto coh = coherent_vector(amplitude, truncation);
  ComplexMatrix basis(truncation.dim(), 2);
  double even = 0.0, odd = 0.0;
  for (std::size_t n = 0; n < truncation.dim(); ++n) {
    if (n % 2 == 0) {
      basis(n, 0) = coh.amplitudes[n];
      even += std::norm(coh.amplitudes[n]);
    } else {
      basis(n, 1) = coh.amplitudes[n];
      odd += std::norm(coh.amplitudes[n]);
    }
  }
  if (!(odd > 0.0)) {
    basis(1, 1) = 1.0;  // amplitude -> 0 limit of the odd cat
    odd = 1.0;
  }
  for (std::size_t n = 0; n < truncation.dim(); ++n) {
    basis(n, 0) /= std::sqrt(even);
    basis(n, 1) /= std::sqrt(odd);
  }
  return basis;
}

EcsState ecs_state(const EcsParams& params, Truncation truncation) {
  const ComplexMatrix c = ecs_cat_coefficients(params);
  const ComplexMatrix cats = cat_basis(params.alpha, truncation);

  const auto tails = parity_tails(params.alpha, truncation.n_max());
  const std::array<double, 2> lost{tails.even / (cat_norm_plus(params.alpha) / 4.0),
                                   tails.odd / (cat_norm_minus(params.alpha) / 4.0)};
  double kept = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) kept += std::norm(c(i, j)) * (1.0 - lost[i]) * (1.0 - lost[j]);
  const double embedding_error = 1.0 - kept;
  if (embedding_error > kEmbeddingTolerance) {
    throw ContractViolation("ecs_state: Fock cutoff n_max=" + std::to_string(truncation.n_max()) +
                            " discards weight " + std::to_string(embedding_error));
  }

  const std::size_t d = truncation.dim();
  ComplexMatrix amps(d, d);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      if (c(i, j) == Complex{}) continue;
      for (std::size_t n = 0; n < d; ++n)
        for (std::size_t m = 0; m < d; ++m) amps(n, m) += c(i, j) * cats(n, i) * cats(m, j);
    }
  return {PureBipartiteState::normalized(truncation, std::move(amps)), std::max(embedding_error, 0.0)};
}

double ecs_mean_photon_number(const EcsParams& params) {
  const ComplexMatrix c = ecs_cat_coefficients(params);
  const double x2 = params.alpha * params.alpha;
  const std::array<double, 2> n{x2 * std::tanh(x2), x2 / std::tanh(x2)};
  double total = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) total += std::norm(c(i, j)) * (n[i] + n[j]);
  return total;
}

ComplexMatrix decohered_ecs_qubit_state(const EcsParams& params, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ContractViolation("decohered_ecs_eof: eta must lie in [0, 1]");
  const ComplexMatrix c = ecs_cat_coefficients(params);
  if (eta == 0.0) {
    ComplexMatrix vacuum(4, 4);
    vacuum(0, 0) = 1.0;
    return vacuum;
  }
  const CatSuperoperator k = cat_superoperator(params.alpha, eta);
  ComplexMatrix rho(4, 4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t ca = 0; ca < 2; ++ca)
        for (std::size_t cb = 0; cb < 2; ++cb) {
          const Complex w = c(a, b) * std::conj(c(ca, cb));
          if (w == Complex{}) continue;
          rho += w * kron(k[a][ca], k[b][cb]);
        }
  return rho;
}

double decohered_ecs_eof(const EcsParams& params, double eta) {
  const ComplexMatrix rho = decohered_ecs_qubit_state(params, eta);
  const double residual = std::abs(1.0 - rho.trace().real());
  if (residual > kSubspaceLeakageTolerance) {
    throw ContractViolation("decohered_ecs_eof: support residual " + std::to_string(residual));
  }
  return eof_two_qubit(rho);
}

double decohered_ecs_eof_fock(const EcsParams& params, double eta, Truncation truncation) {
  const auto input = ecs_state(params, truncation);
  const auto output = apply_two_mode(build_loss_channel(eta, truncation), pure_to_density(input.state));
  const ComplexMatrix cats = cat_basis(std::sqrt(eta) * params.alpha, truncation);
  return eof_two_qubit(output, QubitSubspace{cats, cats});
}

Truncation truncation_for_coherent(double alpha, double tail_tolerance, int minimum_n_max) {
  for (int n_max = std::max(1, minimum_n_max);; ++n_max) {
    Truncation t(n_max);
    if (coherent_vector(alpha, t).tail_error < tail_tolerance) return t;
    if (n_max > 400) throw ContractViolation("truncation_for_coherent: amplitude too large");
  }
}

}  // namespace fockloss
