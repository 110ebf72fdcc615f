// Shared generators for the unit tests.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fockloss/fock_space.hpp"
#include "fockloss/linalg.hpp"
#include "fockloss/sampling.hpp"

namespace testing_support {

using fockloss::Complex;
using fockloss::ComplexMatrix;

inline Complex random_complex(fockloss::SeededRng& rng) { return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; }

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, fockloss::SeededRng& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = random_complex(rng);
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, fockloss::SeededRng& rng) {
  const ComplexMatrix m = random_matrix(n, n, rng);
  ComplexMatrix h = m + m.adjoint();
  h *= 0.5;
  return h;
}

// Gram-Schmidt on a random complex matrix.
inline ComplexMatrix random_unitary(std::size_t n, fockloss::SeededRng& rng) {
  ComplexMatrix u = random_matrix(n, n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t o = 0; o < c; ++o) {
        Complex dot{};
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(u(r, o)) * u(r, c);
        for (std::size_t r = 0; r < n; ++r) u(r, c) -= dot * u(r, o);
      }
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) nrm += std::norm(u(r, c));
    for (std::size_t r = 0; r < n; ++r) u(r, c) /= std::sqrt(nrm);
  }
  return u;
}

inline fockloss::PureBipartiteState random_pure(fockloss::Truncation t, fockloss::SeededRng& rng) {
  return fockloss::PureBipartiteState::normalized(t, random_matrix(t.dim(), t.dim(), rng));
}

// Random mixture of a few pure states.
inline fockloss::DensityOperator random_density(fockloss::Truncation t, fockloss::SeededRng& rng, int terms = 3) {
  ComplexMatrix rho(t.pair_dim(), t.pair_dim());
  double total = 0.0;
  for (int k = 0; k < terms; ++k) {
    const double w = rng.uniform(0.1, 1.0);
    total += w;
    const auto v = random_pure(t, rng).as_vector();
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) rho(i, j) += w * v[i] * std::conj(v[j]);
  }
  rho *= 1.0 / total;
  return fockloss::DensityOperator(t, std::move(rho));
}

// Pure state of the given Schmidt rank: random spectrum in random local bases.
inline fockloss::PureBipartiteState random_pure_of_rank(fockloss::Truncation t, std::size_t rank,
                                                        fockloss::SeededRng& rng) {
  std::vector<double> c(rank);
  double norm = 0.0;
  for (auto& x : c) {
    x = rng.uniform(0.05, 1.0);
    norm += x * x;
  }
  for (auto& x : c) x /= std::sqrt(norm);
  const ComplexMatrix ua = random_unitary(t.dim(), rng);
  const ComplexMatrix ub = random_unitary(t.dim(), rng);
  ComplexMatrix amps(t.dim(), t.dim());
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t n = 0; n < t.dim(); ++n)
      for (std::size_t m = 0; m < t.dim(); ++m) amps(n, m) += c[k] * ua(n, k) * ub(m, k);
  return fockloss::PureBipartiteState::normalized(t, std::move(amps));
}

}  // namespace testing_support
