#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fockloss/error.hpp"
#include "fockloss/loss_channel.hpp"
#include "fockloss/measures.hpp"
#include "fockloss/state_families.hpp"
#include "support.hpp"

using namespace fockloss;
using namespace testing_support;

namespace {

PureBipartiteState qubit_pair(Complex a00, Complex a01, Complex a10, Complex a11) {
  ComplexMatrix a(2, 2);
  a(0, 0) = a00;
  a(0, 1) = a01;
  a(1, 0) = a10;
  a(1, 1) = a11;
  return PureBipartiteState::normalized(Truncation(1), std::move(a));
}

double lossy_eof(const PureBipartiteState& psi, double eta) {
  const auto rho = apply_two_mode(LossChannel(eta, psi.truncation()), pure_to_density(psi));
  return eof_two_qubit(rho, QubitSubspace::fock01(psi.truncation()));
}

double h(double x) { return -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

ComplexMatrix random_unitary2(SeededRng& rng) { return random_unitary(2, rng); }

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("schmidt decomposition examples") {
    const auto prod = schmidt(qubit_pair(1, 0, 0, 0));
    CHECK(prod.coefficients[0] == doctest::Approx(1.0));
    CHECK(prod.coefficients[1] == doctest::Approx(0.0));

    const auto bell = schmidt(qubit_pair(0, 1, 1, 0));
    CHECK(bell.coefficients[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(bell.coefficients[1] == doctest::Approx(1 / std::sqrt(2.0)));

    const auto sq = schmidt(tmss(1.0, Truncation(6)).state);
    for (std::size_t n = 0; n + 1 < sq.coefficients.size(); ++n)
      CHECK(sq.coefficients[n + 1] / sq.coefficients[n] == doctest::Approx(1 / std::sqrt(3.0)));
  }

  TEST_CASE("schmidt reconstruction on random states") {
    SeededRng rng(41);
    for (int i = 0; i < 100; ++i) {
      const Truncation t(1 + i % 5);
      const auto psi = random_pure(t, rng);
      const auto s = schmidt(psi);
      double norm = 0.0;
      ComplexMatrix rec(t.dim(), t.dim());
      for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
        CHECK(s.coefficients[k] >= 0.0);
        if (k > 0) CHECK(s.coefficients[k] <= s.coefficients[k - 1]);
        norm += s.coefficients[k] * s.coefficients[k];
        for (std::size_t n = 0; n < t.dim(); ++n)
          for (std::size_t m = 0; m < t.dim(); ++m) rec(n, m) += s.coefficients[k] * s.basis_a(n, k) * s.basis_b(m, k);
      }
      CHECK(std::abs(norm - 1.0) < 1e-10);
      CHECK(max_abs_difference(rec, psi.amplitudes()) < 1e-9);
    }
  }

  TEST_CASE("pure-state functionals") {
    const std::vector<double> third{std::sqrt(1.0 / 3), std::sqrt(2.0 / 3)};
    CHECK(entanglement_entropy(third) == doctest::Approx(0.9183).epsilon(1e-4));
    CHECK(entanglement_entropy(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
    CHECK(entanglement_entropy(std::vector<double>(4, 0.5)) == doctest::Approx(2.0).epsilon(1e-15));

    CHECK(pure_negativity(std::vector<double>{1.0, 0.0}) == 0.0);
    CHECK(pure_negativity(std::vector<double>(2, 1 / std::sqrt(2.0))) == doctest::Approx(0.5));

    CHECK(purity_measure(std::vector<double>{1.0, 0.0}) == 0.0);
    CHECK(purity_measure(std::vector<double>(2, 1 / std::sqrt(2.0))) == doctest::Approx(0.5));
    CHECK(purity_measure(std::vector<double>(4, 0.5)) == doctest::Approx(0.75));

    const auto c = truncated_tmss_coefficients(truncated_tmss_lambda_for_entropy(0.2, 4), 4);
    CHECK(entanglement_entropy(c) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(std::abs(pure_negativity(c) - 0.2079) < 1e-4);
  }

  TEST_CASE("functionals are invariant under coefficient permutation") {
    SeededRng rng(42);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> c(5);
      double n = 0.0;
      for (auto& x : c) {
        x = rng.uniform();
        n += x * x;
      }
      for (auto& x : c) x /= std::sqrt(n);
      const double e = entanglement_entropy(c), ng = pure_negativity(c), p = purity_measure(c);
      std::sort(c.begin(), c.end());
      do {
        CHECK(entanglement_entropy(c) == doctest::Approx(e).epsilon(1e-14));
        CHECK(pure_negativity(c) == doctest::Approx(ng).epsilon(1e-14));
        CHECK(purity_measure(c) == doctest::Approx(p).epsilon(1e-14));
      } while (std::next_permutation(c.begin(), c.end()) && rng.uniform() < 0.9);
    }
  }

  TEST_CASE("negativity of pure states equals the Schmidt formula") {
    SeededRng rng(43);
    for (int i = 0; i < 200; ++i) {
      const Truncation t(6);
      const std::size_t rank = 1 + static_cast<std::size_t>(i % 7);
      const auto psi = random_pure_of_rank(t, rank, rng);
      CHECK(std::abs(negativity(pure_to_density(psi)) - pure_negativity(schmidt(psi))) < 1e-9);
    }
  }

  TEST_CASE("negativity of a separable mixture and of the Werner-type state") {
    const Truncation t(1);
    ComplexMatrix mix(4, 4);
    mix(0, 0) = 0.3;
    mix(1, 1) = 0.2;
    mix(3, 3) = 0.5;
    CHECK(negativity(DensityOperator(t, mix)) == doctest::Approx(0.0));

    for (double eta : {0.25, 0.5, 0.9}) {
      ComplexMatrix w(4, 4);
      w(0, 0) = 1 - eta;
      w(1, 1) = w(2, 2) = eta / 2;
      w(1, 2) = w(2, 1) = -eta / 2;
      // PT couples |00> and |11>: block [[1-eta, -eta/2], [-eta/2, 0]]
      const double expected = 0.5 * (std::sqrt((1 - eta) * (1 - eta) + eta * eta) - (1 - eta));
      CHECK(std::abs(negativity(DensityOperator(t, w)) - expected) < 1e-12);
    }
  }

  TEST_CASE("concurrence examples") {
    const auto fock01 = QubitSubspace::fock01(Truncation(1));
    CHECK(concurrence(pure_to_density(qubit_pair(1, 0, 0, 1)), fock01) == doctest::Approx(1.0));
    CHECK(concurrence(pure_to_density(qubit_pair(0.6, 0.8, 0, 0)), fock01) == doctest::Approx(0.0).epsilon(1e-12));

    SeededRng rng(44);
    for (int i = 0; i < 50; ++i) {
      const double p = rng.uniform(), eta = rng.uniform();
      ComplexMatrix x(4, 4);
      x(0, 0) = 1 - eta;
      x(1, 1) = eta * p;
      x(2, 2) = eta * (1 - p);
      x(1, 2) = x(2, 1) = -eta * std::sqrt(p * (1 - p));
      CHECK(std::abs(concurrence(x) - 2 * eta * std::sqrt(p * (1 - p))) < 1e-9);
    }
  }

  TEST_CASE("concurrence needs support inside the declared subspace") {
    const Truncation t(2);
    ComplexMatrix a(3, 3);
    a(2, 2) = 1.0;
    CHECK_THROWS_AS(concurrence(pure_to_density(PureBipartiteState(t, a)), QubitSubspace::fock01(t)),
                    ContractViolation);
  }

  TEST_CASE("eof of the three single-photon states after half loss") {
    const double a = std::sqrt(1.0 / 3), b = std::sqrt(2.0 / 3);
    CHECK(std::abs(lossy_eof(qubit_pair(0, a, -b, 0), 0.5) - 0.3236) < 1e-4);
    CHECK(std::abs(lossy_eof(qubit_pair(-b, 0, 0, a), 0.5) - 0.1622) < 1e-4);
    CHECK(std::abs(lossy_eof(qubit_pair(a, 0, 0, b), 0.5) - 0.0438) < 1e-4);
    CHECK(lossy_eof(qubit_pair(0, a, -b, 0), 1.0) == doctest::Approx(h(1.0 / 3)).epsilon(1e-10));
  }

  TEST_CASE("eof is invariant under local unitaries on the qubit subspace") {
    SeededRng rng(45);
    for (int i = 0; i < 100; ++i) {
      const auto rho = random_density(Truncation(1), rng, 2);
      const ComplexMatrix u = kron(random_unitary2(rng), random_unitary2(rng));
      const ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
      CHECK(std::abs(eof_two_qubit(rotated) - eof_two_qubit(rho.matrix())) < 1e-9);
    }
  }

  TEST_CASE("tmss closed forms") {
    CHECK(tmss_entropy_from_nbar(1.0) == doctest::Approx(1.5 * std::log2(3.0) - 1).epsilon(1e-13));
    CHECK(std::abs(tmss_entropy_from_nbar(1.0) - 1.3774) < 1e-4);
    CHECK(std::abs(tmss_nbar_from_entropy(1.0) - 0.5876) < 1e-4);
    CHECK(std::abs(tmss_nbar_from_entropy(h(1.0 / 3)) - 0.5138) < 1e-4);
    CHECK(tmss_entropy_from_nbar(0.0) == 0.0);
    for (double x = 1e-3; x <= 10.0; x *= 1.3)
      CHECK(std::abs(tmss_nbar_from_entropy(tmss_entropy_from_nbar(x)) - x) < 1e-8);
  }

  TEST_CASE("symmetric Gaussian eof") {
    for (double nbar : {0.0, 0.1, 0.5138, 1.0, 4.0}) {
      CHECK(std::abs(gaussian_symmetric_eof(nbar, 1.0) - tmss_entropy_from_nbar(nbar)) < 1e-10);
      CHECK(gaussian_symmetric_eof(nbar, 0.0) == 0.0);
    }
    // independent evaluation of the closed form
    for (double nbar : {0.3, 0.5138, 2.0})
      for (double eta : {0.2, 0.5, 0.8}) {
        const double s = std::sqrt(nbar / 2), c = std::sqrt(1 + nbar / 2);
        const double delta = eta * (c - s) * (c - s) + 1 - eta;
        const double cp = std::pow(1 / std::sqrt(delta) + std::sqrt(delta), 2) / 4;
        const double cm = std::pow(1 / std::sqrt(delta) - std::sqrt(delta), 2) / 4;
        const double expected = cp * std::log2(cp) - (cm > 0 ? cm * std::log2(cm) : 0.0);
        CHECK(std::abs(gaussian_epr_variance(nbar, eta) - delta) < 1e-12);
        CHECK(std::abs(gaussian_symmetric_eof(nbar, eta) - expected) < 1e-12);
        CHECK(gaussian_symmetric_eof(nbar, eta) < tmss_entropy_from_nbar(nbar));
      }
  }

  TEST_CASE("Gaussian negativity agrees with the Fock computation") {
    const Truncation t(30);
    for (double eta : {0.3, 0.7}) {
      const auto rho = apply_two_mode(LossChannel(eta, t), pure_to_density(tmss(0.5, t).state));
      CHECK(std::abs(negativity(rho) - gaussian_symmetric_negativity(0.5, eta)) < 1e-6);
    }
  }

  TEST_CASE("negativity decreases along the loss grid") {
    const Truncation t(10);
    const auto rho0 = pure_to_density(tmss(1.0, t).state);
    double last = negativity(rho0);
    for (int i = 9; i >= 0; --i) {
      const double now = negativity(apply_two_mode(LossChannel(0.1 * i, t), rho0));
      CHECK(now - last <= 1e-9);
      last = now;
    }
    CHECK(last == doctest::Approx(0.0));
  }

  TEST_CASE("multimode counts") {
    CHECK(multimode_counts(1).superposition_ebits == 0.0);
    CHECK(multimode_counts(1).product_tmss_ebits == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(multimode_counts(2).superposition_ebits == 1.0);
    for (int m : {3, 16, 1024})
      CHECK(multimode_counts(m).product_tmss_ebits == doctest::Approx(m * tmss_entropy_from_nbar(2.0 / m)).epsilon(1e-14));
  }

  TEST_CASE("conditioning on an undisturbed environment") {
    const double eta = 0.5;
    const LossChannel ch(eta, Truncation(1));
    auto averaged = [&](const PureBipartiteState& psi, double& vacuum_probability, double& vacuum_entropy) {
      double total = 0.0;
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
          const ComplexMatrix branch = kraus_branch(ch, psi, k, l);
          const double prob = std::pow(branch.frobenius_norm(), 2);
          if (prob < 1e-15) continue;
          const double e = entanglement_entropy(schmidt(PureBipartiteState::normalized(Truncation(1), branch)));
          if (k == 0 && l == 0) {
            vacuum_probability = prob;
            vacuum_entropy = e;
          }
          total += prob * e;
        }
      return total;
    };
    double p0 = 0, e0 = 0;
    const double kept = averaged(qubit_pair(1, 0, 0, 1), p0, e0);
    CHECK(p0 == doctest::Approx(5.0 / 8).epsilon(1e-15));
    CHECK(e0 == doctest::Approx(h(0.2)).epsilon(1e-12));
    CHECK(std::abs(e0 - 0.7219) < 1e-3);
    CHECK(std::abs(kept - 0.4512) < 1e-3);

    const double kept_single = averaged(qubit_pair(0, 1, 1, 0), p0, e0);
    CHECK(kept_single == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("measures ignore the squeezing phase") {
    const Truncation t(8);
    const double lambda = 0.3;
    for (double phase : {0.0, 0.7, 2.0, std::numbers::pi}) {
      ComplexMatrix a(t.dim(), t.dim());
      for (std::size_t n = 0; n < t.dim(); ++n) a(n, n) = std::pow(std::polar(std::sqrt(lambda), phase), static_cast<int>(n));
      const auto psi = PureBipartiteState::normalized(t, a);
      const auto real_psi = PureBipartiteState::normalized(t, [&] {
        ComplexMatrix r(t.dim(), t.dim());
        for (std::size_t n = 0; n < t.dim(); ++n) r(n, n) = std::pow(std::sqrt(lambda), static_cast<int>(n));
        return r;
      }());
      CHECK(entanglement_entropy(schmidt(psi)) == doctest::Approx(entanglement_entropy(schmidt(real_psi))).epsilon(1e-12));
      const LossChannel ch(0.6, t);
      CHECK(std::abs(negativity(apply_two_mode(ch, pure_to_density(psi))) -
                     negativity(apply_two_mode(ch, pure_to_density(real_psi)))) < 1e-10);
    }
  }
}
