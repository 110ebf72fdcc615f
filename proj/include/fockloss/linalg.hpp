// fockloss/linalg.hpp
//
// Dense complex linear algebra for the small matrices this library works with
// (at most a few hundred rows, typically (n_max+1)^2 <= 64). Everything here is
// a pure function of its inputs.
//
// Precision contracts:
//   hermitian_eigensystem   reconstruction |H - V L V^H|_max <= 1e-10 |H|_max,
//                           V^H V = I to 1e-10
//   singular_values / svd   sum sigma_k^2 = |M|_F^2 to 1e-10 relative
//
// Inputs to the Hermitian routines are admitted when |H - H^H|_max <= 1e-8.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fockloss {

using Complex = std::complex<double>;

inline constexpr double kHermiticityTolerance = 1e-8;
inline constexpr double kJacobiOffDiagonalTolerance = 1e-14;

/// Row-major dense complex matrix with value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix column(std::span<const Complex> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<Complex> entries() noexcept { return entries_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  std::vector<Complex> column_vector(std::size_t c) const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |H - H^H| entrywise; 0 for exactly Hermitian input.
double hermiticity_defect(const ComplexMatrix& h);

/// max |A - B| entrywise. Shapes must agree.
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

/// Cyclic complex Jacobi diagonalization. Throws ContractViolation for
/// non-square, non-finite or non-Hermitian input.
EigenSystem hermitian_eigensystem(const ComplexMatrix& h);

/// Eigenvalues only (same algorithm, skips accumulating the eigenvectors).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// M = U diag(sigma) V^H, with U (rows x k), V (cols x k), k = min(rows, cols).
/// Columns of U and V are orthonormal, sigma descending.
struct SingularValueDecomposition {
  ComplexMatrix u;
  std::vector<double> singular_values;
  ComplexMatrix v;
};

/// One-sided (Hestenes) Jacobi SVD.
SingularValueDecomposition svd(const ComplexMatrix& m);

std::vector<double> singular_values(const ComplexMatrix& m);

/// Sum of |lambda_k| over the spectrum of a Hermitian matrix.
double trace_norm(const ComplexMatrix& h);

}  // namespace fockloss
