#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fockloss/error.hpp"
#include "fockloss/fock_space.hpp"
#include "fockloss/state_families.hpp"
#include "support.hpp"

using namespace fockloss;
using namespace testing_support;

namespace {

PureBipartiteState basis_state(Truncation t, std::size_t n, std::size_t m) {
  ComplexMatrix a(t.dim(), t.dim());
  a(n, m) = 1.0;
  return PureBipartiteState(t, std::move(a));
}

PureBipartiteState pair_state(Truncation t, double sign) {
  ComplexMatrix a(t.dim(), t.dim());
  a(0, 1) = 1.0 / std::sqrt(2.0);
  a(1, 0) = sign / std::sqrt(2.0);
  return PureBipartiteState(t, std::move(a));
}

}  // namespace

TEST_SUITE("fock_space") {
  TEST_CASE("truncation layout") {
    CHECK_THROWS_AS(Truncation(0), ContractViolation);
    const Truncation t(3);
    CHECK(t.dim() == 4);
    CHECK(t.pair_dim() == 16);
    CHECK(t.pair_index(2, 3) == 11);
  }

  TEST_CASE("pure state normalization is enforced") {
    const Truncation t(1);
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-3;
    CHECK_THROWS_AS(PureBipartiteState(t, a), ContractViolation);
    CHECK_NOTHROW(PureBipartiteState::normalized(t, a));
    CHECK_THROWS_AS(PureBipartiteState::normalized(t, ComplexMatrix(2, 2)), ContractViolation);
  }

  TEST_CASE("pure_to_density") {
    const Truncation t(2);
    const auto vac = pure_to_density(basis_state(t, 0, 0));
    CHECK(vac(0, 0).real() == 1.0);
    CHECK(vac.matrix().frobenius_norm() == doctest::Approx(1.0));

    const auto bell = pure_to_density(pair_state(Truncation(1), 1.0));
    int nonzero = 0;
    for (const auto& z : bell.matrix().entries()) {
      if (std::abs(z) > 1e-15) {
        ++nonzero;
        CHECK(z.real() == doctest::Approx(0.5));
      }
    }
    CHECK(nonzero == 4);
  }

  TEST_CASE("density operator validation") {
    const Truncation t(1);
    ComplexMatrix m = ComplexMatrix::identity(4);
    CHECK_THROWS_AS(DensityOperator(t, m), ContractViolation);  // trace 4
    m *= 0.25;
    CHECK_NOTHROW(DensityOperator(t, m));
    m(0, 0) = -0.25;
    m(1, 1) = 0.75;
    CHECK_THROWS_AS(DensityOperator(t, m), ContractViolation);  // negative eigenvalue
  }

  TEST_CASE("coherent vector amplitudes and tail") {
    const auto vac = coherent_vector(0.0, Truncation(4));
    CHECK(vac.amplitudes[0] == Complex(1.0));
    for (std::size_t n = 1; n < vac.amplitudes.size(); ++n) CHECK(vac.amplitudes[n] == Complex{});
    CHECK(vac.tail_error == 0.0);

    // Poisson tail sum_{n>6} e^{-1}/n!
    double tail = 0.0, term = std::exp(-1.0);
    for (int n = 1; n < 40; ++n) {
      term /= n;
      if (n > 6) tail += term;
    }
    const auto one = coherent_vector(1.0, Truncation(6));
    CHECK(one.tail_error < 1e-4);
    CHECK(std::abs(one.tail_error - tail) < 1e-15);
    double kept = 0.0;
    for (const auto& z : one.amplitudes) kept += std::norm(z);
    CHECK(std::abs(kept + one.tail_error - 1.0) < 1e-14);
  }

  TEST_CASE("coherent overlap matches the closed form") {
    const Truncation t(40);
    const Complex alphas[] = {{0.3, 0.1}, {1.0, -0.5}, {-1.2, 0.4}};
    for (const Complex a : alphas)
      for (const Complex b : alphas) {
        const auto va = coherent_vector(a, t).amplitudes;
        const auto vb = coherent_vector(b, t).amplitudes;
        Complex overlap{};
        for (std::size_t n = 0; n < va.size(); ++n) overlap += std::conj(va[n]) * vb[n];
        const Complex expected = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
        CHECK(std::abs(overlap - expected) < 1e-12);
      }
  }

  TEST_CASE("mean photon number") {
    CHECK(mean_photon_number(basis_state(Truncation(2), 0, 0)) == 0.0);
    const auto sq = tmss(1.0, Truncation(24));  // lambda = 1/3
    CHECK(std::abs(mean_photon_number(sq.state) - 1.0) < 1e-6);

    // alpha = beta = 0 member of the single-photon family has 4/3 photons
    const auto maxp = single_photon_state({1.0 / 3.0, 0.0, 0.0});
    CHECK(mean_photon_number(maxp) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    SeededRng rng(21);
    for (int i = 0; i < 50; ++i) {
      const auto psi = random_pure(Truncation(3), rng);
      CHECK(std::abs(mean_photon_number(pure_to_density(psi)) - mean_photon_number(psi)) < 1e-10);
    }
  }

  TEST_CASE("single-photon family photon number matches the closed form") {
    SeededRng rng(22);
    for (int i = 0; i < 200; ++i) {
      const SinglePhotonFamilyParams params{rng.uniform(0.0, 0.5), rng.uniform(0.0, 2 * std::numbers::pi),
                                            rng.uniform(0.0, 2 * std::numbers::pi)};
      CHECK(std::abs(mean_photon_number(single_photon_state(params)) - single_photon_mean_photon_number(params)) <
            1e-12);
    }
  }

  TEST_CASE("partial trace") {
    const Truncation t(1);
    // |0><0| (x) sigma
    ComplexMatrix sigma(2, 2);
    sigma(0, 0) = 0.3;
    sigma(1, 1) = 0.7;
    sigma(0, 1) = Complex(0.1, 0.2);
    sigma(1, 0) = Complex(0.1, -0.2);
    ComplexMatrix vac(2, 2);
    vac(0, 0) = 1.0;
    const DensityOperator prod(t, kron(vac, sigma));
    CHECK(max_abs_difference(partial_trace(prod, Mode::B), sigma) < 1e-15);

    const auto bell = pure_to_density(pair_state(t, 1.0));
    const auto ra = partial_trace(bell, Mode::A);
    CHECK(ra(0, 0).real() == doctest::Approx(0.5));
    CHECK(ra(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(ra(0, 1)) < 1e-15);

    const auto sq = tmss(1.0, Truncation(8));
    const auto thermal = partial_trace(pure_to_density(sq.state), Mode::A);
    for (std::size_t n = 0; n + 1 < 9; ++n)
      CHECK(thermal(n + 1, n + 1).real() / thermal(n, n).real() == doctest::Approx(1.0 / 3.0));

    SeededRng rng(23);
    for (int i = 0; i < 20; ++i) {
      const auto rho = random_density(Truncation(2), rng);
      CHECK(std::abs(partial_trace(rho, Mode::A).trace() - 1.0) < 1e-12);
      CHECK(std::abs(partial_trace(rho, Mode::B).trace() - 1.0) < 1e-12);
      CHECK(hermiticity_defect(partial_trace(rho, Mode::A)) < 1e-14);
    }
  }

  TEST_CASE("partial transpose") {
    const Truncation t(1);
    const auto singlet = pure_to_density(pair_state(t, -1.0));
    const auto ev = hermitian_eigenvalues(partial_transpose(singlet));
    CHECK(ev.front() == doctest::Approx(-0.5));
    CHECK(ev.back() == doctest::Approx(0.5));

    ComplexMatrix mix(4, 4);
    mix(0, 0) = 0.5;
    mix(3, 3) = 0.5;
    for (double e : hermitian_eigenvalues(partial_transpose(DensityOperator(t, mix)))) CHECK(e >= -1e-15);

    SeededRng rng(24);
    for (int i = 0; i < 50; ++i) {
      const Truncation tt(1 + i % 3);
      const auto rho = random_density(tt, rng);
      const ComplexMatrix pt = partial_transpose(rho);
      CHECK(max_abs_difference(partial_transpose(pt, tt), rho.matrix()) == 0.0);
      CHECK(hermiticity_defect(pt) < 1e-15);
      CHECK(std::abs(pt.trace() - rho.matrix().trace()) < 1e-15);
    }

    // product state: PT only transposes the A factor, spectrum unchanged
    ComplexMatrix a2 = ComplexMatrix::identity(3);
    a2 *= 1.0 / 3.0;
    a2(0, 1) = Complex(0.0, 0.1);
    a2(1, 0) = Complex(0.0, -0.1);
    ComplexMatrix b2(3, 3);
    b2(2, 2) = 1.0;
    const Truncation t2(2);
    const DensityOperator prod(t2, kron(a2, b2));
    const ComplexMatrix pt = partial_transpose(prod);
    CHECK(max_abs_difference(pt, kron(a2.transpose(), b2)) < 1e-15);
  }
}
