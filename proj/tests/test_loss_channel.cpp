#include <cmath>

#include "doctest.h"
#include "fockloss/error.hpp"
#include "fockloss/loss_channel.hpp"
#include "fockloss/state_families.hpp"
#include "support.hpp"

using namespace fockloss;
using namespace testing_support;

namespace {

ComplexMatrix dyad(const std::vector<Complex>& ket, const std::vector<Complex>& bra) {
  ComplexMatrix m(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
  return m;
}

std::vector<Complex> kron_vec(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

}  // namespace

TEST_SUITE("loss_channel") {
  TEST_CASE("Kraus completeness on the eta grid") {
    for (int n_max : {1, 4, 10}) {
      const Truncation t(n_max);
      for (int i = 0; i <= 10; ++i) {
        const LossChannel ch(0.1 * i, t);
        ComplexMatrix sum(t.dim(), t.dim());
        for (std::size_t k = 0; k < ch.kraus_count(); ++k) sum += ch.kraus_operator(k).adjoint() * ch.kraus_operator(k);
        CHECK(max_abs_difference(sum, ComplexMatrix::identity(t.dim())) < 1e-12);
      }
    }
  }

  TEST_CASE("eta outside [0, 1] is rejected") {
    CHECK_THROWS_AS(LossChannel(-0.01, Truncation(2)), ContractViolation);
    CHECK_THROWS_AS(build_loss_channel(1.5, Truncation(2)), ContractViolation);
    CHECK_THROWS_AS(LossChannel(std::nan(""), Truncation(2)), ContractViolation);
  }

  TEST_CASE("noiseless and total-loss limits") {
    const Truncation t(3);
    const LossChannel id(1.0, t);
    CHECK(max_abs_difference(id.kraus_operator(0), ComplexMatrix::identity(4)) == 0.0);
    for (std::size_t k = 1; k < id.kraus_count(); ++k) CHECK(id.kraus_operator(k).max_abs() == 0.0);

    SeededRng rng(31);
    const auto rho = random_density(t, rng);
    CHECK(max_abs_difference(apply_two_mode(id, rho).matrix(), rho.matrix()) < 1e-15);

    const auto vac = apply_two_mode(LossChannel(0.0, t), rho);
    CHECK(std::abs(vac(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(vac.matrix().frobenius_norm() - 1.0) < 1e-12);
  }

  TEST_CASE("single photon decays to vacuum with probability 1 - eta") {
    const Truncation t(2);
    ComplexMatrix one(3, 3);
    one(1, 1) = 1.0;
    const double eta = 0.3;
    const auto out = apply_single_mode(LossChannel(eta, t), one);
    CHECK(out(1, 1).real() == doctest::Approx(eta));
    CHECK(out(0, 0).real() == doctest::Approx(1.0 - eta));
    CHECK(out.trace().real() == doctest::Approx(1.0));
  }

  TEST_CASE("trace preservation and positivity on random density operators") {
    SeededRng rng(32);
    for (int i = 0; i < 500; ++i) {
      const Truncation t(1 + i % 3);
      const auto rho = random_density(t, rng, 1 + i % 4);
      const double eta = rng.uniform();
      const auto out = apply_two_mode(LossChannel(eta, t), rho);
      CHECK(std::abs(out.matrix().trace() - 1.0) < 1e-12);
      CHECK(hermiticity_defect(out.matrix()) < 1e-14);
      CHECK(hermitian_eigenvalues(out.matrix()).front() >= -1e-10);
    }
  }

  TEST_CASE("semigroup composition") {
    SeededRng rng(33);
    const Truncation t(4);
    for (int i = 0; i < 20; ++i) {
      const auto rho = random_density(t, rng);
      const double e1 = rng.uniform(), e2 = rng.uniform();
      const auto twice = apply_two_mode(LossChannel(e2, t), apply_two_mode(LossChannel(e1, t), rho));
      const auto once = apply_two_mode(LossChannel(e1 * e2, t), rho);
      CHECK(max_abs_difference(twice.matrix(), once.matrix()) < 1e-10);
    }
  }

  TEST_CASE("mean photon number scales by eta") {
    SeededRng rng(34);
    const Truncation t(5);
    for (int i = 0; i < 50; ++i) {
      const auto rho = random_density(t, rng);
      const double eta = rng.uniform();
      const double before = mean_photon_number(rho);
      CHECK(std::abs(mean_photon_number(apply_two_mode(LossChannel(eta, t), rho)) - eta * before) < 1e-10);
    }
  }

  TEST_CASE("per-mode channels act independently") {
    SeededRng rng(35);
    const Truncation t(3);
    const auto rho = random_density(t, rng);
    const auto out = apply_two_mode(LossChannel(0.3, t), LossChannel(1.0, t), rho);
    // mode B untouched: its reduced state is unchanged
    CHECK(max_abs_difference(partial_trace(out, Mode::B), partial_trace(rho, Mode::B)) < 1e-13);
    CHECK_THROWS_AS(apply_two_mode(LossChannel(0.3, Truncation(2)), rho), ContractViolation);
  }

  TEST_CASE("Kraus branches sum to the channel output") {
    SeededRng rng(36);
    const Truncation t(3);
    const auto psi = random_pure(t, rng);
    const LossChannel ch(0.6, t);
    ComplexMatrix sum(t.pair_dim(), t.pair_dim());
    for (std::size_t k = 0; k < t.dim(); ++k)
      for (std::size_t l = 0; l < t.dim(); ++l) {
        const ComplexMatrix b = kraus_branch(ch, psi, k, l);
        std::vector<Complex> v;
        for (std::size_t n = 0; n < t.dim(); ++n)
          for (std::size_t m = 0; m < t.dim(); ++m) v.push_back(b(n, m));
        sum += dyad(v, v);
      }
    CHECK(max_abs_difference(sum, apply_two_mode(ch, pure_to_density(psi)).matrix()) < 1e-13);
  }

  TEST_CASE("coherent dyad closed form") {
    CHECK(std::abs(coherent_dyad_image(Complex(0.7, 0.2), Complex(0.7, 0.2), 0.4).scale - 1.0) < 1e-15);
    CHECK(std::abs(coherent_dyad_image(Complex(0.7, 0.2), Complex(-0.3, 1.0), 1.0).scale - 1.0) < 1e-15);
    const Complex a(0.9, -0.4);
    CHECK(std::abs(coherent_dyad_image(a, -a, 0.5).scale) == doctest::Approx(std::exp(-std::norm(a))));
    const auto img = coherent_dyad_image(a, 2.0 * a, 0.25);
    CHECK(std::abs(img.ket_amplitude - 0.5 * a) < 1e-15);
    CHECK(std::abs(img.bra_amplitude - a) < 1e-15);
  }

  TEST_CASE("Kraus action on coherent dyads matches the closed form") {
    // amplitudes beyond the cutoff feed the kept block, so the tail must sit
    // well below the 1e-8 target squared
    const Truncation t(40);
    const Complex grid[] = {{0.0, 0.0}, {1.5, 0.0}, {-0.7, 0.8}, {0.3, -1.2}, {1.0, 1.0}};
    for (double eta : {0.2, 0.5, 0.9}) {
      const LossChannel ch(eta, t);
      for (const Complex a : grid)
        for (const Complex b : grid) {
          if (std::abs(a) > 1.5 || std::abs(b) > 1.5) continue;
          const auto image = coherent_dyad_image(a, b, eta);
          const ComplexMatrix in = dyad(coherent_vector(a, t).amplitudes, coherent_vector(b, t).amplitudes);
          const ComplexMatrix expected =
              image.scale *
              dyad(coherent_vector(image.ket_amplitude, t).amplitudes, coherent_vector(image.bra_amplitude, t).amplitudes);
          CHECK(max_abs_difference(apply_single_mode(ch, in), expected) < 1e-8);
        }
    }
  }

  TEST_CASE("two-mode channel on a coherent superposition matches the closed form") {
    const Truncation t(24);
    const Complex a(1.2, 0.0), b(-0.5, 0.6);
    const double eta = 0.5;
    const auto va = coherent_vector(a, t).amplitudes, vb = coherent_vector(b, t).amplitudes;
    const auto aa = kron_vec(va, va), bb = kron_vec(vb, vb);
    std::vector<Complex> psi(aa.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = aa[i] + bb[i];
    double norm = 0.0;
    for (const auto& z : psi) norm += std::norm(z);
    ComplexMatrix rho = dyad(psi, psi);
    rho *= 1.0 / norm;
    const auto out = apply_two_mode(LossChannel(eta, t), DensityOperator(t, rho, DensityOperator::StructurallyPositive{}));

    ComplexMatrix expected(t.pair_dim(), t.pair_dim());
    const Complex amps[] = {a, b};
    for (const Complex x : amps)
      for (const Complex y : amps) {
        const auto img = coherent_dyad_image(x, y, eta);
        const auto vx = coherent_vector(img.ket_amplitude, t).amplitudes;
        const auto vy = coherent_vector(img.bra_amplitude, t).amplitudes;
        expected += (img.scale * img.scale / norm) * dyad(kron_vec(vx, vx), kron_vec(vy, vy));
      }
    CHECK(max_abs_difference(out.matrix(), expected) < 1e-8);
  }
}
