// src/sampling.cpp

#include "fockloss/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fockloss/error.hpp"
#include "fockloss/measures.hpp"

namespace fockloss {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SeededRng SeededRng::substream(std::uint64_t index) const {
  return SeededRng(splitmix64(splitmix64(seed_) ^ splitmix64(index + 1)));
}

ComplexMatrix givens_chain(std::span<const double> angles) {
  const std::size_t m = angles.size() + 1;
  ComplexMatrix g = ComplexMatrix::identity(m);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double c = std::cos(angles[k]);
    const double s = std::sin(angles[k]);
    // left-multiply by the rotation in the (k, k+1) plane
    for (std::size_t j = 0; j < m; ++j) {
      const Complex top = g(k, j);
      const Complex bottom = g(k + 1, j);
      g(k, j) = c * top - s * bottom;
      g(k + 1, j) = s * top + c * bottom;
    }
  }
  return g;
}

BasisSample random_basis(int m, double theta_max, SeededRng& rng) {
  if (m < 2) throw ContractViolation("random_basis: dimension must be >= 2");
  if (!(theta_max > 0.0 && theta_max <= 2.0 * std::numbers::pi)) {
    throw ContractViolation("random_basis: theta_max must lie in (0, 2 pi]");
  }
  BasisSample out;
  out.angles.resize(static_cast<std::size_t>(m - 1));
  for (double& a : out.angles) a = rng.uniform(0.0, theta_max);
  out.matrix = givens_chain(out.angles);
  return out;
}

PureBipartiteState rebase_state(std::span<const double> coefficients, const ComplexMatrix& basis_a,
                                const ComplexMatrix& basis_b, Truncation truncation) {
  const std::size_t d = truncation.dim();
  if (basis_a.rows() != d || basis_a.cols() != d || basis_b.rows() != d || basis_b.cols() != d) {
    throw ContractViolation("rebase_state: bases must be (n_max+1) x (n_max+1)");
  }
  if (coefficients.size() > d) throw ContractViolation("rebase_state: more coefficients than basis vectors");
  ComplexMatrix amps(d, d);
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] == 0.0) continue;
    for (std::size_t n = 0; n < d; ++n)
      for (std::size_t m = 0; m < d; ++m) amps(n, m) += coefficients[k] * basis_a(n, k) * basis_b(m, k);
  }
  return PureBipartiteState(truncation, std::move(amps));
}

PureBipartiteState diagonal_state(std::span<const double> coefficients) {
  if (coefficients.empty()) throw ContractViolation("diagonal_state: no coefficients");
  const Truncation t(std::max<int>(1, static_cast<int>(coefficients.size()) - 1));
  ComplexMatrix amps(t.dim(), t.dim());
  for (std::size_t k = 0; k < coefficients.size(); ++k) amps(k, k) = coefficients[k];
  return PureBipartiteState(t, std::move(amps));
}

namespace {

// c_1, c_2 as functions of c_3 for fixed tail sums.
struct Elimination {
  double s_total;  // sqrt(2N+1) - sum tail
  double q_total;  // 1 - sum tail^2

  struct Point {
    double c1, c2, c3, r;
  };

  std::optional<Point> at(double c3) const {
    if (!(c3 >= 0.0)) return std::nullopt;
    const double s = s_total - c3;
    const double q = q_total - c3 * c3;
    const double disc = 2.0 * q - s * s;
    if (s < 0.0 || disc < 0.0) return std::nullopt;
    const double r = std::sqrt(disc);
    const double c2 = 0.5 * (s - r);
    if (c2 < 0.0) return std::nullopt;
    return Point{0.5 * (s + r), c2, c3, r};
  }
};

double entropy_gradient(double c) {
  return -2.0 * c * (std::log2(c * c) + 1.0 / std::numbers::ln2);
}

}  // namespace

ConstrainedSchmidtResult solve_constrained_schmidt(double e_target, double n_target, std::span<const double> tail) {
  if (tail.empty()) throw ContractViolation("solve_constrained_schmidt: need rank >= 4 (non-empty tail)");
  for (double t : tail)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ContractViolation("solve_constrained_schmidt: tail entries must be >= 0");
  if (!(n_target >= 0.0) || !(e_target >= 0.0)) {
    throw ContractViolation("solve_constrained_schmidt: targets must be >= 0");
  }

  ConstrainedSchmidtResult result;
  const double tail_sum = std::accumulate(tail.begin(), tail.end(), 0.0);
  const double tail_entropy = entanglement_entropy(tail);
  double tail_sq = 0.0;
  for (double t : tail) tail_sq += t * t;
  const Elimination elim{std::sqrt(2.0 * n_target + 1.0) - tail_sum, 1.0 - tail_sq};

  // disc(c3) = -3 c3^2 + 2 S c3 + 2Q - S^2 >= 0
  const double spread = 6.0 * elim.q_total - 2.0 * elim.s_total * elim.s_total;
  if (elim.s_total < 0.0 || elim.q_total < 0.0 || spread < 0.0) {
    result.infeasible_reason = "normalization and negativity cannot both be met with this tail";
    return result;
  }
  const double lo = std::max(0.0, (elim.s_total - std::sqrt(spread)) / 3.0);
  const double hi = std::min(elim.s_total, (elim.s_total + std::sqrt(spread)) / 3.0);
  if (!(hi > lo)) {
    result.infeasible_reason = "empty feasible interval for c3";
    return result;
  }

  auto residual = [&](const Elimination::Point& p) {
    const double e = entanglement_entropy(std::vector<double>{p.c1, p.c2, p.c3}) + tail_entropy;
    return e - e_target;
  };
  auto residual_at = [&](double c3) -> std::optional<double> {
    const auto p = elim.at(c3);
    if (!p) return std::nullopt;
    return residual(*p);
  };

  // Lowest sign-change bracket among feasible scan points.
  std::optional<double> a, b;
  double fa = 0.0;
  std::optional<double> prev_x, prev_f;
  for (int i = 0; i < kBracketScanPoints; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (kBracketScanPoints - 1);
    const auto f = residual_at(x);
    if (f && prev_f && (*f == 0.0 || std::signbit(*f) != std::signbit(*prev_f))) {
      a = prev_x;
      fa = *prev_f;
      b = x;
      break;
    }
    prev_x = f ? std::optional<double>(x) : std::nullopt;
    prev_f = f;
  }
  if (!a) {
    result.infeasible_reason = "entropy target not attained on the feasible c3 interval";
    return result;
  }

  double left = *a, right = *b;
  const bool left_negative = fa < 0.0;
  double x = 0.5 * (left + right);
  auto fx_opt = residual_at(x);
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    if (!fx_opt) {
      result.infeasible_reason = "Newton iterate left the feasible region";
      result.iterations = it;
      return result;
    }
    const double fx = *fx_opt;
    result.residuals.push_back(std::abs(fx));
    result.iterations = it + 1;
    if (std::abs(fx) < kNewtonTolerance) {
      const auto p = *elim.at(x);
      result.coefficients = {p.c1, p.c2, p.c3};
      result.coefficients.insert(result.coefficients.end(), tail.begin(), tail.end());
      std::sort(result.coefficients.begin(), result.coefficients.end(), std::greater<>());
      return result;
    }
    ((fx < 0.0) == left_negative ? left : right) = x;

    const auto p = *elim.at(x);
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (p.r > kNewtonFallbackStep && p.c1 > 0.0 && p.c2 > 0.0 && p.c3 > 0.0) {
      const double ratio = (elim.s_total - 3.0 * p.c3) / p.r;  // (s - 2 c3) / r
      slope = entropy_gradient(p.c1) * 0.5 * (-1.0 + ratio) + entropy_gradient(p.c2) * 0.5 * (-1.0 - ratio) +
              entropy_gradient(p.c3);
    } else {
      const auto fp = residual_at(x + kNewtonFallbackStep);
      const auto fm = residual_at(x - kNewtonFallbackStep);
      if (fp && fm) slope = (*fp - *fm) / (2.0 * kNewtonFallbackStep);
    }

    bool accepted = false;
    if (std::isfinite(slope) && slope != 0.0) {
      double step = -fx / slope;
      for (int halving = 0; halving < 40 && !accepted; ++halving, step *= 0.5) {
        const double candidate = x + step;
        if (!(candidate > left && candidate < right)) continue;
        const auto fc = residual_at(candidate);
        if (fc && std::abs(*fc) < std::abs(fx)) {
          x = candidate;
          fx_opt = fc;
          accepted = true;
        }
      }
    }
    if (!accepted) {
      x = 0.5 * (left + right);
      fx_opt = residual_at(x);
    }
  }
  result.infeasible_reason = "Newton iteration did not converge in 100 iterations";
  return result;
}

ConstrainedSampleSet sample_constrained_states(int rank, double e_target, double n_target, std::size_t count,
                                               SeededRng& rng) {
  if (rank < 4) throw ContractViolation("sample_constrained_states: rank must be >= 4");
  ConstrainedSampleSet out;
  // Any entry c leaves M-1 nonnegative entries with sum sigma - c and squares
  // 1 - c^2, so (sigma - c)^2 >= 1 - c^2. Below the dominant coefficient this
  // caps c at (sigma - sqrt(2 - sigma^2)) / 2.
  const double sigma = std::sqrt(2.0 * n_target + 1.0);
  out.box_upper = std::min(sigma, 1.0);
  if (sigma * sigma < 2.0) out.box_upper = std::min(out.box_upper, 0.5 * (sigma - std::sqrt(2.0 - sigma * sigma)));
  std::vector<double> tail(static_cast<std::size_t>(rank - 3));
  while (out.spectra.size() < count) {
    for (double& t : tail) t = rng.uniform(0.0, out.box_upper);
    ++out.attempts;
    auto solved = solve_constrained_schmidt(e_target, n_target, tail);
    if (solved.feasible()) {
      out.tails.push_back(tail);
      out.spectra.push_back(std::move(solved.coefficients));
    } else {
      ++out.rejections;
    }
    if (out.attempts >= 10000 &&
        static_cast<double>(out.spectra.size()) < kMinFeasibilityRate * static_cast<double>(out.attempts)) {
      throw ContractViolation("sample_constrained_states: feasibility rate " +
                              std::to_string(static_cast<double>(out.spectra.size()) / out.attempts) +
                              " below 1e-3 after " + std::to_string(out.attempts) + " draws (E=" +
                              std::to_string(e_target) + ", N=" + std::to_string(n_target) + ")");
    }
  }
  return out;
}

RefinementResult compass_refine(std::vector<double> start_tail, double e_target, double n_target,
                                const SpectrumObjective& objective, double initial_step, double min_step,
                                int max_evaluations) {
  auto start = solve_constrained_schmidt(e_target, n_target, start_tail);
  if (!start.feasible()) throw ContractViolation("compass_refine: starting tail is infeasible");
  RefinementResult best{std::move(start_tail), start.coefficients, objective(start.coefficients), 1};
  double step = initial_step;
  while (step >= min_step && best.evaluations < max_evaluations) {
    RefinementResult candidate_best = best;
    for (std::size_t i = 0; i < best.tail.size(); ++i) {
      for (const double sign : {1.0, -1.0}) {
        std::vector<double> trial = best.tail;
        trial[i] += sign * step;
        if (trial[i] < 0.0) continue;
        auto solved = solve_constrained_schmidt(e_target, n_target, trial);
        if (!solved.feasible()) continue;
        const double value = objective(solved.coefficients);
        ++best.evaluations;
        if (value > candidate_best.value) {
          candidate_best.tail = std::move(trial);
          candidate_best.coefficients = std::move(solved.coefficients);
          candidate_best.value = value;
        }
      }
    }
    if (candidate_best.value > best.value) {
      candidate_best.evaluations = best.evaluations;
      best = std::move(candidate_best);
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace fockloss
