// fockloss/sampling.hpp
//
// Two ways of exploring state space around the two-mode squeezed vacuum:
//
//   * rebasing: keep a Schmidt spectrum, rotate both local bases by a chain of
//     real plane rotations G_{k,k+1}(theta_k) with theta_k < theta_max;
//   * constrained spectra: fix normalization, pure negativity and entropy and
//     solve for c_1, c_2, c_3 given the remaining coefficients.
//
// The rotation chain is a sub-family of O(M): M-1 angles do not cover the
// group for M > 2.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fockloss/fock_space.hpp"
#include "fockloss/linalg.hpp"

namespace fockloss {

inline constexpr double kConstraintTolerance = 1e-10;
inline constexpr double kNewtonTolerance = 1e-10;
inline constexpr int kNewtonMaxIterations = 100;
inline constexpr double kNewtonFallbackStep = 1e-7;
inline constexpr int kBracketScanPoints = 64;
inline constexpr double kMinFeasibilityRate = 1e-3;

std::uint64_t splitmix64(std::uint64_t x);

/// mt19937_64 with doubles built from the top 53 bits, so the stream is the
/// same on every platform (std distributions are not).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Independent generator for the index-th sub-task, derived from the seed only.
  SeededRng substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct BasisSample {
  std::vector<double> angles;  // M-1 rotation angles
  ComplexMatrix matrix;        // M x M, real orthogonal
};

/// G_{M-2}(theta_{M-2}) ... G_0(theta_0), where G_k rotates the (k, k+1) plane.
ComplexMatrix givens_chain(std::span<const double> angles);

/// Angles uniform on [0, theta_max). Requires M >= 2 and theta_max in (0, 2 pi].
BasisSample random_basis(int m, double theta_max, SeededRng& rng);

/// sum_k c_k |a_k>|b_k> with a_k, b_k the columns of the bases. Both bases are
/// (n_max+1) x (n_max+1); missing coefficients count as zero.
PureBipartiteState rebase_state(std::span<const double> coefficients, const ComplexMatrix& basis_a,
                                const ComplexMatrix& basis_b, Truncation truncation);

/// sum_k c_k |kk> on the smallest truncation that holds it.
PureBipartiteState diagonal_state(std::span<const double> coefficients);

struct ConstrainedSchmidtResult {
  std::vector<double> coefficients;  // descending; empty when infeasible
  std::string infeasible_reason;
  int iterations = 0;
  std::vector<double> residuals;  // |E(c) - E_target| after each Newton iterate

  bool feasible() const noexcept { return !coefficients.empty(); }
};

/// Solves for c_1, c_2, c_3 with c_4... = tail fixed so that sum c_k^2 = 1,
/// sum c_k = sqrt(2 N + 1) and the entropy equals e_target.
///
/// Given c_3, c_1 and c_2 follow in closed form; c_3 is then found by damped
/// Newton iteration started inside the lowest sign-change bracket of a
/// 64-point scan over the feasible c_3 interval.
ConstrainedSchmidtResult solve_constrained_schmidt(double e_target, double n_target, std::span<const double> tail);

struct ConstrainedSampleSet {
  std::vector<std::vector<double>> tails;    // drawn c_4... per accepted sample
  std::vector<std::vector<double>> spectra;  // solved spectra, descending
  std::size_t attempts = 0;
  std::size_t rejections = 0;
  double box_upper = 0.0;  // tail entries drawn from [0, box_upper)
};

/// Draws tails uniformly from [0, c_max)^{rank-3} and keeps the feasible ones
/// until `count` are accepted. c_max = min(sqrt(2N+1), 1), further capped by
/// the largest value a non-dominant coefficient can take under the sum and
/// normalization constraints. The cap loses no spectra since the solution is
/// sorted afterwards. Throws ContractViolation when the acceptance rate drops
/// below 1e-3 (checked once 10^4 draws have been made).
ConstrainedSampleSet sample_constrained_states(int rank, double e_target, double n_target, std::size_t count,
                                               SeededRng& rng);

struct RefinementResult {
  std::vector<double> tail;
  std::vector<double> coefficients;
  double value = 0.0;
  int evaluations = 0;
};

using SpectrumObjective = std::function<double(std::span<const double> coefficients)>;

/// Compass search maximizing the objective over the tail coordinates, keeping
/// the constraints through solve_constrained_schmidt. Step halves whenever no
/// coordinate move improves; stops below min_step or after max_evaluations.
RefinementResult compass_refine(std::vector<double> start_tail, double e_target, double n_target,
                                const SpectrumObjective& objective, double initial_step, double min_step,
                                int max_evaluations);

}  // namespace fockloss
