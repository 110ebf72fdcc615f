// src/linalg.cpp

#include "fockloss/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fockloss/error.hpp"

namespace fockloss {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ContractViolation("ComplexMatrix: entry count does not match shape");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> values) {
  return ComplexMatrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

std::vector<Complex> ComplexMatrix::column_vector(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out = *this;
  for (auto& z : out.entries_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ContractViolation("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ContractViolation("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw ContractViolation("matrix product: inner dimensions differ");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex s = a(i, j);
      if (s == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return out;
}

double hermiticity_defect(const ComplexMatrix& h) {
  if (!h.is_square()) throw ContractViolation("hermiticity_defect: matrix is not square");
  double defect = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j) defect = std::max(defect, std::abs(h(i, j) - std::conj(h(j, i))));
  return defect;
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractViolation("max_abs_difference: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

namespace {

// 2x2 unitary [[u00, u01], [u10, u11]] that diagonalizes the Hermitian block
// [[a, b], [conj(b), d]] via U^H B U.
struct PlaneRotation {
  Complex u00, u01, u10, u11;
  double t;  // tangent of the real rotation angle
};

PlaneRotation jacobi_rotation(double a, double d, Complex b) {
  const double mag = std::abs(b);
  const Complex phase = b / mag;
  const double theta = (d - a) / (2.0 * mag);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  if (!std::isfinite(theta * theta)) t = 0.5 / theta;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex e = std::conj(phase);
  return {Complex{c, 0.0}, Complex{s, 0.0}, -s * e, c * e, t};
}

// Right-multiply columns p, q of m by the rotation.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const PlaneRotation& r) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Complex mp = m(i, p);
    const Complex mq = m(i, q);
    m(i, p) = mp * r.u00 + mq * r.u10;
    m(i, q) = mp * r.u01 + mq * r.u11;
  }
}

// Left-multiply rows p, q of m by the adjoint of the rotation.
void rotate_rows_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q, const PlaneRotation& r) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Complex mp = m(p, j);
    const Complex mq = m(q, j);
    m(p, j) = std::conj(r.u00) * mp + std::conj(r.u10) * mq;
    m(q, j) = std::conj(r.u01) * mp + std::conj(r.u11) * mq;
  }
}

double off_diagonal_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

void require_hermitian(const ComplexMatrix& h, const char* who) {
  if (!h.is_square()) throw ContractViolation(std::string(who) + ": matrix is not square");
  if (h.rows() == 0) throw ContractViolation(std::string(who) + ": empty matrix");
  if (!h.all_finite()) throw ContractViolation(std::string(who) + ": non-finite entry");
  const double defect = hermiticity_defect(h);
  if (defect > kHermiticityTolerance) {
    throw ContractViolation(std::string(who) + ": matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
}

EigenSystem jacobi_diagonalize(const ComplexMatrix& input, bool want_vectors) {
  require_hermitian(input, "hermitian_eigensystem");
  const std::size_t n = input.rows();

  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};
  const double norm = h.frobenius_norm();
  const double skip_below = 1e-17 * norm;

  constexpr int kMaxSweeps = 100;
  double previous_off = off_diagonal_norm(h);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (previous_off <= kJacobiOffDiagonalTolerance * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = h(p, q);
        if (std::abs(b) <= skip_below) continue;
        const double a = h(p, p).real();
        const double d = h(q, q).real();
        const PlaneRotation r = jacobi_rotation(a, d, b);
        rotate_columns(h, p, q, r);
        rotate_rows_adjoint(h, p, q, r);
        h(p, p) = a - r.t * std::abs(b);
        h(q, q) = d + r.t * std::abs(b);
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        if (want_vectors) rotate_columns(v, p, q, r);
      }
    }
    const double off = off_diagonal_norm(h);
    // Stagnation at the rounding floor counts as converged.
    if (off >= previous_off && off <= 1e-12 * norm) {
      previous_off = off;
      break;
    }
    previous_off = off;
  }
  if (previous_off > 1e-12 * norm) {
    throw ContractViolation("hermitian_eigensystem: Jacobi iteration did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return h(x, x).real() < h(y, y).real(); });

  EigenSystem out;
  out.eigenvalues.reserve(n);
  for (std::size_t k : order) out.eigenvalues.push_back(h(k, k).real());
  if (want_vectors) {
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

// Orthonormal completion: replaces the columns flagged in `missing` with unit
// vectors orthogonal to every other column.
void complete_orthonormal(ComplexMatrix& u, const std::vector<bool>& missing) {
  const std::size_t m = u.rows();
  std::vector<bool> filled(u.cols());
  for (std::size_t c = 0; c < u.cols(); ++c) filled[c] = !missing[c];
  auto project_out = [&](std::vector<Complex>& x) {
    for (std::size_t o = 0; o < u.cols(); ++o) {
      if (!filled[o]) continue;
      Complex dot{};
      for (std::size_t r = 0; r < m; ++r) dot += std::conj(u(r, o)) * x[r];
      for (std::size_t r = 0; r < m; ++r) x[r] -= dot * u(r, o);
    }
  };
  for (std::size_t c = 0; c < u.cols(); ++c) {
    if (filled[c]) continue;
    // canonical vector with the largest residual; at least sqrt(free / m)
    std::vector<Complex> best;
    double best_norm = 0.0;
    for (std::size_t candidate = 0; candidate < m; ++candidate) {
      std::vector<Complex> x(m, Complex{});
      x[candidate] = 1.0;
      project_out(x);
      project_out(x);
      double nrm = 0.0;
      for (const auto& z : x) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = std::move(x);
      }
    }
    if (best_norm < 1e-3) throw ContractViolation("svd: orthonormal completion failed");
    for (std::size_t r = 0; r < m; ++r) u(r, c) = best[r] / best_norm;
    filled[c] = true;
  }
}

}  // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& h) { return jacobi_diagonalize(h, true); }

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) { return jacobi_diagonalize(h, false).eigenvalues; }

SingularValueDecomposition svd(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw ContractViolation("svd: empty matrix");
  if (!m.all_finite()) throw ContractViolation("svd: non-finite entry");

  const bool wide = m.rows() < m.cols();
  ComplexMatrix w = wide ? m.adjoint() : m;
  const std::size_t rows = w.rows();
  const std::size_t n = w.cols();
  ComplexMatrix v = ComplexMatrix::identity(n);

  constexpr int kMaxSweeps = 100;
  // rounding in the column inner products grows with the row count
  const double eps = std::numeric_limits<double>::epsilon();
  const double orthogonality = std::max(1e-15, 4.0 * eps * static_cast<double>(rows));
  const double negligible = eps * eps * std::pow(w.frobenius_norm(), 2);
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma{};
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(w(i, p));
          beta += std::norm(w(i, q));
          gamma += std::conj(w(i, p)) * w(i, q);
        }
        // columns below eps |M| are noise; rotating them never settles
        if (std::min(alpha, beta) <= negligible) continue;
        if (std::abs(gamma) <= orthogonality * std::sqrt(alpha) * std::sqrt(beta) || std::abs(gamma) == 0.0) continue;
        converged = false;
        const PlaneRotation r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, p, q, r);
        rotate_columns(v, p, q, r);
      }
    }
  }
  if (!converged) throw ContractViolation("svd: one-sided Jacobi did not converge");

  std::vector<double> sigma(n);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(w(i, c));
    sigma[c] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const std::size_t k = n;  // n = min(rows, cols) after the optional adjoint
  const double largest = sigma.empty() ? 0.0 : sigma[order.front()];
  ComplexMatrix left(rows, k);
  ComplexMatrix right(n, k);
  std::vector<double> values(k);
  std::vector<bool> missing(k, false);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t src = order[c];
    values[c] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) right(i, c) = v(i, src);
    if (sigma[src] <= 1e-13 * largest || sigma[src] == 0.0) {
      missing[c] = true;
      continue;
    }
    for (std::size_t i = 0; i < rows; ++i) left(i, c) = w(i, src) / sigma[src];
  }
  complete_orthonormal(left, missing);

  SingularValueDecomposition out;
  out.singular_values = std::move(values);
  if (wide) {
    // m^H = L S R^H  =>  m = R S L^H
    out.u = std::move(right);
    out.v = std::move(left);
  } else {
    out.u = std::move(left);
    out.v = std::move(right);
  }
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) { return svd(m).singular_values; }

double trace_norm(const ComplexMatrix& h) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(h)) s += std::abs(lambda);
  return s;
}

}  // namespace fockloss
