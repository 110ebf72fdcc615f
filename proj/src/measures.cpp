// src/measures.cpp

#include "fockloss/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fockloss/error.hpp"

namespace fockloss {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

SchmidtSpectrum schmidt(const PureBipartiteState& psi) {
  // psi = sum_nm a_nm |n>|m> = sum_k s_k (U e_k)_A (conj(V) e_k)_B
  auto dec = svd(psi.amplitudes());
  SchmidtSpectrum out;
  out.coefficients = std::move(dec.singular_values);
  out.basis_a = std::move(dec.u);
  out.basis_b = dec.v.conjugate();
  return out;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double entanglement_entropy(std::span<const double> coefficients) {
  double e = 0.0;
  for (double c : coefficients) e -= xlog2x(c * c);
  return e;
}

double entanglement_entropy(const SchmidtSpectrum& s) { return entanglement_entropy(s.coefficients); }

double pure_negativity(std::span<const double> coefficients) {
  const double sum = std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
  return 0.5 * (sum * sum - 1.0);
}

double pure_negativity(const SchmidtSpectrum& s) { return pure_negativity(s.coefficients); }

double purity_measure(std::span<const double> coefficients) {
  double s = 0.0;
  for (double c : coefficients) s += c * c * c * c;
  return 1.0 - s;
}

double purity_measure(const SchmidtSpectrum& s) { return purity_measure(s.coefficients); }

double negativity(const DensityOperator& rho) {
  const double n = 0.5 * (trace_norm(partial_transpose(rho)) - 1.0);
  return std::max(n, 0.0);
}

QubitSubspace QubitSubspace::fock01(const Truncation& t) {
  QubitSubspace s{ComplexMatrix(t.dim(), 2), ComplexMatrix(t.dim(), 2)};
  s.basis_a(0, 0) = 1.0;
  s.basis_a(1, 1) = 1.0;
  s.basis_b(0, 0) = 1.0;
  s.basis_b(1, 1) = 1.0;
  return s;
}

ComplexMatrix restrict_to_qubits(const DensityOperator& rho, const QubitSubspace& subspace) {
  const auto& t = rho.truncation();
  if (subspace.basis_a.rows() != t.dim() || subspace.basis_a.cols() != 2 || subspace.basis_b.rows() != t.dim() ||
      subspace.basis_b.cols() != 2) {
    throw ContractViolation("restrict_to_qubits: subspace bases must be (n_max+1) x 2");
  }
  const ComplexMatrix embed = kron(subspace.basis_a, subspace.basis_b);
  ComplexMatrix rho4 = embed.adjoint() * rho.matrix() * embed;
  const double leakage = std::abs(1.0 - rho4.trace().real());
  if (leakage > kSubspaceLeakageTolerance) {
    throw ContractViolation("restrict_to_qubits: state leaks out of the declared subspace (weight " +
                            std::to_string(leakage) + ")");
  }
  return rho4;
}

double concurrence(const ComplexMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4) throw ContractViolation("concurrence: expected a 4x4 density matrix");
  // sigma_y (x) sigma_y is real: the antidiagonal (-1, 1, 1, -1) pattern.
  ComplexMatrix flip(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  // With rho = X X^H, the lambda_i are the singular values of X^T flip X.
  // Going through sqrt of the eigenvalues of rho * tilde instead loses half
  // the digits on nearly pure states.
  const auto es = hermitian_eigensystem(rho4);
  ComplexMatrix x(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const double s = std::sqrt(std::max(es.eigenvalues[k], 0.0));
    for (std::size_t i = 0; i < 4; ++i) x(i, k) = s * es.eigenvectors(i, k);
  }
  auto lambda = singular_values(x.transpose() * flip * x);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double concurrence(const DensityOperator& rho, const QubitSubspace& subspace) {
  return concurrence(restrict_to_qubits(rho, subspace));
}

double eof_from_concurrence(double c) {
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return binary_entropy(x);
}

double eof_two_qubit(const ComplexMatrix& rho4) { return eof_from_concurrence(concurrence(rho4)); }

double eof_two_qubit(const DensityOperator& rho, const QubitSubspace& subspace) {
  return eof_from_concurrence(concurrence(rho, subspace));
}

double tmss_entropy_from_nbar(double nbar) {
  if (nbar < 0.0) throw ContractViolation("tmss_entropy_from_nbar: nbar must be >= 0");
  const double x = 0.5 * nbar;
  return xlog2x(x + 1.0) - xlog2x(x);
}

double tmss_nbar_from_entropy(double entropy) {
  if (entropy < 0.0) throw ContractViolation("tmss_nbar_from_entropy: entropy must be >= 0");
  if (entropy == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (tmss_entropy_from_nbar(hi) < entropy) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (tmss_entropy_from_nbar(mid) < entropy ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double gaussian_epr_variance(double nbar, double eta) {
  if (nbar < 0.0) throw ContractViolation("gaussian_epr_variance: nbar must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ContractViolation("gaussian_epr_variance: eta must lie in [0, 1]");
  // sinh^2 r = nbar/2, e^{-r} = cosh r - sinh r
  const double sh = std::sqrt(0.5 * nbar);
  const double ch = std::sqrt(1.0 + 0.5 * nbar);
  const double squeezed = 1.0 / ((ch + sh) * (ch + sh));  // e^{-2r}
  return eta * squeezed + (1.0 - eta);
}

double gaussian_symmetric_eof(double nbar, double eta) {
  const double delta = gaussian_epr_variance(nbar, eta);
  if (delta >= 1.0) return 0.0;
  const double root = std::sqrt(delta);
  const double c_plus = 0.25 * (1.0 / root + root) * (1.0 / root + root);
  const double c_minus = 0.25 * (1.0 / root - root) * (1.0 / root - root);
  return std::max(0.0, xlog2x(c_plus) - xlog2x(c_minus));
}

double gaussian_symmetric_negativity(double nbar, double eta) {
  const double delta = gaussian_epr_variance(nbar, eta);
  return delta >= 1.0 ? 0.0 : 0.5 * (1.0 / delta - 1.0);
}

MultimodeCounts multimode_counts(int modes) {
  if (modes < 1) throw ContractViolation("multimode_counts: need at least one mode");
  const double m = static_cast<double>(modes);
  return {std::log2(m), m * tmss_entropy_from_nbar(2.0 / m)};
}

}  // namespace fockloss
