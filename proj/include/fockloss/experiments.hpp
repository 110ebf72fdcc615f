// fockloss/experiments.hpp
//
// Numbered experiments. Each run_* function validates its config, evaluates
// the samples (fanned out over threads, aggregated in index order) and returns
// a Table whose metadata records the resolved config, seed, library version,
// tolerance constants and a few summary statistics.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockloss/table.hpp"

namespace fockloss {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kEcsLimitAlpha = 1e-6;  // stand-in for alpha -> 0

enum class ExperimentId { Fig1, Fig2, Fig34, Fig5, Fig67, Fig89, TmssTable };

std::string experiment_name(ExperimentId id);
/// Throws ConfigError for unknown names.
ExperimentId experiment_from_name(const std::string& name);
const std::vector<ExperimentId>& all_experiments();

struct ExperimentConfig {
  ExperimentId id = ExperimentId::Fig1;
  double eta = 0.5;
  double p = 1.0 / 3.0;
  int angle_grid_points = 101;  // fig1/fig5: points per axis on [0, pi]
  std::vector<double> phases;   // fig2
  std::vector<double> alpha_grid;
  int n_max = 6;
  std::size_t samples = 1000;
  std::vector<double> theta_max;  // fig34
  std::optional<double> e_target;
  std::optional<double> n_target;  // fig67/fig89; default: truncated TMSS value
  int rank = 4;
  int refine_evaluations = 0;  // fig67/fig89 compass search budget after sampling
  std::vector<double> nbar_grid;  // tmss-table
  std::uint64_t seed = 1;

  // Execution only; never part of the output.
  unsigned threads = 0;  // 0: hardware concurrency
  std::filesystem::path out;
};

ExperimentConfig default_config(ExperimentId id);

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& cfg);

/// Overlays keys of a JSON object onto the config. Throws ConfigError on
/// unknown keys or wrong types.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);

/// Resolved config as written into the metadata header (no execution fields).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Entanglement target used by fig34/fig67/fig89 when none is given.
double resolved_e_target(const ExperimentConfig& cfg);
double resolved_n_target(const ExperimentConfig& cfg);

Table run_fig1(const ExperimentConfig& cfg);
Table run_fig2(const ExperimentConfig& cfg);
Table run_fig34(const ExperimentConfig& cfg);
Table run_fig5(const ExperimentConfig& cfg);
Table run_fig67(const ExperimentConfig& cfg);
Table run_fig89(const ExperimentConfig& cfg);
Table run_tmss_table(const ExperimentConfig& cfg);

Table run_experiment(const ExperimentConfig& cfg);

/// Negativity after symmetric loss of sum_k c_k |kk>.
double decohered_diagonal_negativity(std::span<const double> coefficients, double eta);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Calls fn(i) for i in [0, n) on up to `threads` workers; results in index
/// order. The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fockloss
