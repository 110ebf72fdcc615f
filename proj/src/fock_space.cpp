// src/fock_space.cpp

#include "fockloss/fock_space.hpp"

#include <cmath>
#include <string>

#include "fockloss/error.hpp"

namespace fockloss {

Truncation::Truncation(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw ContractViolation("Truncation: n_max must be >= 1, got " + std::to_string(n_max));
}

namespace {

double squared_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return s;
}

void require_amplitude_shape(const Truncation& t, const ComplexMatrix& amplitudes) {
  if (amplitudes.rows() != t.dim() || amplitudes.cols() != t.dim()) {
    throw ContractViolation("PureBipartiteState: amplitude matrix must be (n_max+1) x (n_max+1)");
  }
  if (!amplitudes.all_finite()) throw ContractViolation("PureBipartiteState: non-finite amplitude");
}

}  // namespace

PureBipartiteState::PureBipartiteState(Truncation truncation, ComplexMatrix amplitudes)
    : truncation_(truncation), amplitudes_(std::move(amplitudes)) {
  require_amplitude_shape(truncation_, amplitudes_);
  const double norm2 = squared_norm(amplitudes_);
  if (std::abs(norm2 - 1.0) > kNormalizationTolerance) {
    throw ContractViolation("PureBipartiteState: state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
  }
}

PureBipartiteState PureBipartiteState::normalized(Truncation truncation, ComplexMatrix amplitudes) {
  require_amplitude_shape(truncation, amplitudes);
  const double norm2 = squared_norm(amplitudes);
  if (!(norm2 > 0.0)) throw ContractViolation("PureBipartiteState: cannot normalize the zero vector");
  amplitudes *= Complex{1.0 / std::sqrt(norm2), 0.0};
  return PureBipartiteState(truncation, std::move(amplitudes));
}

std::vector<Complex> PureBipartiteState::as_vector() const {
  return std::vector<Complex>(amplitudes_.entries().begin(), amplitudes_.entries().end());
}

DensityOperator::DensityOperator(Truncation truncation, ComplexMatrix matrix)
    : truncation_(truncation), matrix_(std::move(matrix)) {
  check_shape_hermitian_trace();
  const double smallest = hermitian_eigenvalues(matrix_).front();
  if (smallest < -kDensityTolerance) {
    throw ContractViolation("DensityOperator: negative eigenvalue " + std::to_string(smallest));
  }
}

DensityOperator::DensityOperator(Truncation truncation, ComplexMatrix matrix, StructurallyPositive)
    : truncation_(truncation), matrix_(std::move(matrix)) {
  check_shape_hermitian_trace();
}

void DensityOperator::check_shape_hermitian_trace() const {
  const std::size_t n = truncation_.pair_dim();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw ContractViolation("DensityOperator: matrix must be (n_max+1)^2 square");
  }
  if (!matrix_.all_finite()) throw ContractViolation("DensityOperator: non-finite entry");
  const double defect = hermiticity_defect(matrix_);
  if (defect > kDensityTolerance) {
    throw ContractViolation("DensityOperator: not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kDensityTolerance) {
    throw ContractViolation("DensityOperator: trace is " + std::to_string(tr.real()) + ", expected 1");
  }
}

DensityOperator pure_to_density(const PureBipartiteState& psi) {
  const auto v = psi.as_vector();
  ComplexMatrix rho(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == Complex{}) continue;
    for (std::size_t j = 0; j < v.size(); ++j) rho(i, j) = v[i] * std::conj(v[j]);
  }
  return DensityOperator(psi.truncation(), std::move(rho), DensityOperator::StructurallyPositive{});
}

CoherentVector coherent_vector(Complex alpha, Truncation truncation) {
  const double mean = std::norm(alpha);
  CoherentVector out;
  out.amplitudes.resize(truncation.dim());
  Complex term{std::exp(-0.5 * mean), 0.0};
  out.amplitudes[0] = term;
  for (std::size_t n = 1; n < truncation.dim(); ++n) {
    term *= alpha / std::sqrt(static_cast<double>(n));
    out.amplitudes[n] = term;
  }
  // Poisson tail summed directly; 1 - sum would lose everything below 1e-16.
  double tail = 0.0;
  if (mean > 0.0) {
    double p = std::norm(out.amplitudes.back());
    for (std::size_t n = truncation.dim();; ++n) {
      p *= mean / static_cast<double>(n);
      tail += p;
      if (static_cast<double>(n) > mean && p <= 1e-18 * tail) break;
      if (p == 0.0) break;
    }
  }
  out.tail_error = tail;
  return out;
}

double mean_photon_number(const PureBipartiteState& psi) {
  const auto& a = psi.amplitudes();
  double s = 0.0;
  for (std::size_t n = 0; n < a.rows(); ++n)
    for (std::size_t m = 0; m < a.cols(); ++m) s += static_cast<double>(n + m) * std::norm(a(n, m));
  return s;
}

double mean_photon_number(const DensityOperator& rho) {
  const auto& t = rho.truncation();
  double s = 0.0;
  for (std::size_t n = 0; n < t.dim(); ++n)
    for (std::size_t m = 0; m < t.dim(); ++m) {
      const std::size_t i = t.pair_index(n, m);
      s += static_cast<double>(n + m) * rho(i, i).real();
    }
  return s;
}

ComplexMatrix partial_trace(const DensityOperator& rho, Mode keep) {
  const auto& t = rho.truncation();
  const std::size_t d = t.dim();
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < d; ++k) {
        s += keep == Mode::A ? rho(t.pair_index(i, k), t.pair_index(j, k)) : rho(t.pair_index(k, i), t.pair_index(k, j));
      }
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const Truncation& t) {
  const std::size_t d = t.dim();
  if (rho.rows() != t.pair_dim() || rho.cols() != t.pair_dim()) {
    throw ContractViolation("partial_transpose: matrix does not match truncation");
  }
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t na = 0; na < d; ++na)
    for (std::size_t nb = 0; nb < d; ++nb)
      for (std::size_t ma = 0; ma < d; ++ma)
        for (std::size_t mb = 0; mb < d; ++mb)
          out(t.pair_index(na, nb), t.pair_index(ma, mb)) = rho(t.pair_index(ma, nb), t.pair_index(na, mb));
  return out;
}

ComplexMatrix partial_transpose(const DensityOperator& rho) { return partial_transpose(rho.matrix(), rho.truncation()); }

}  // namespace fockloss
