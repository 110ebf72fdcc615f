// tools/fockloss.cpp
//
// Experiment driver. One subcommand per experiment, plus `sweep` which runs
// all of them with their defaults into one directory.
//
//   fockloss fig34 --samples 2000 --seed 7 --out fig34.csv
//   fockloss fig89 --config fig89.json --refine 400
//   fockloss sweep --out results/
//
// Exit codes: 0 ok, 2 bad configuration, 3 numerical contract violated.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockloss/error.hpp"
#include "fockloss/experiments.hpp"
#include "json.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;

struct Flags {
  std::optional<double> eta, p, e_target, n_target;
  std::optional<int> n_max, rank, refine;
  std::optional<std::size_t> samples;
  std::vector<double> theta_max;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  std::string config;
};

void add_common(CLI::App* cmd, Flags& f, bool single_experiment) {
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--samples", f.samples, "number of sampled states");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
  cmd->add_option("--config", f.config, "JSON file with config keys")->check(CLI::ExistingFile);
  if (!single_experiment) {
    cmd->add_option("--out", f.out, "output directory")->default_str("results");
    return;
  }
  cmd->add_option("--out", f.out, "output CSV path");
  cmd->add_option("--eta", f.eta, "transmissivity");
  cmd->add_option("--p", f.p, "superposition weight");
  cmd->add_option("--n-max", f.n_max, "photon cutoff per mode");
  cmd->add_option("--theta-max", f.theta_max, "basis angle bound(s)");
  cmd->add_option("--e-target", f.e_target, "pure-state entanglement target");
  cmd->add_option("--n-target", f.n_target, "pure-state negativity target");
  cmd->add_option("--rank", f.rank, "Schmidt rank");
  cmd->add_option("--refine", f.refine, "compass-search evaluations after sampling");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fockloss::ConfigError("cannot read config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw fockloss::ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void overlay(fockloss::ExperimentConfig& cfg, const Flags& f) {
  if (f.eta) cfg.eta = *f.eta;
  if (f.p) cfg.p = *f.p;
  if (f.e_target) cfg.e_target = f.e_target;
  if (f.n_target) cfg.n_target = f.n_target;
  if (f.n_max) cfg.n_max = *f.n_max;
  if (f.rank) cfg.rank = *f.rank;
  if (f.refine) cfg.refine_evaluations = *f.refine;
  if (f.samples) cfg.samples = *f.samples;
  if (!f.theta_max.empty()) cfg.theta_max = f.theta_max;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
}

void run_one(fockloss::ExperimentId id, const Flags& f) {
  auto cfg = fockloss::default_config(id);
  if (!f.config.empty()) fockloss::apply_json(cfg, load_json(f.config));
  overlay(cfg, f);
  if (!f.out.empty()) cfg.out = f.out;
  if (cfg.out.empty()) cfg.out = fockloss::experiment_name(id) + ".csv";
  fockloss::validate(cfg);
  const auto table = fockloss::run_experiment(cfg);
  fockloss::write_csv_file(table, cfg.out);
  std::fprintf(stderr, "%s: %zu rows -> %s\n", fockloss::experiment_name(id).c_str(), table.row_count(),
               cfg.out.string().c_str());
}

// Sweep config file: {"fig34": {...}, "fig89": {...}} keyed by experiment.
void run_sweep(const Flags& f) {
  const std::filesystem::path dir = f.out.empty() ? "results" : f.out;
  const nlohmann::json overrides = f.config.empty() ? nlohmann::json::object() : load_json(f.config);
  if (!overrides.is_object()) throw fockloss::ConfigError("sweep config must be a JSON object");
  for (const auto& [key, value] : overrides.items()) fockloss::experiment_from_name(key);
  for (auto id : fockloss::all_experiments()) {
    auto cfg = fockloss::default_config(id);
    const auto name = fockloss::experiment_name(id);
    if (overrides.contains(name)) fockloss::apply_json(cfg, overrides.at(name));
    if (f.seed) cfg.seed = *f.seed;
    if (f.threads) cfg.threads = *f.threads;
    if (f.samples && (id == fockloss::ExperimentId::Fig34 || id == fockloss::ExperimentId::Fig67 ||
                      id == fockloss::ExperimentId::Fig89)) {
      cfg.samples = *f.samples;
    }
    cfg.out = dir / (name + ".csv");
    fockloss::validate(cfg);
    const auto table = fockloss::run_experiment(cfg);
    fockloss::write_csv_file(table, cfg.out);
    std::fprintf(stderr, "%s: %zu rows -> %s\n", name.c_str(), table.row_count(), cfg.out.string().c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-loss robustness experiments on truncated two-mode Fock space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(FOCKLOSS_VERSION));

  Flags flags;
  std::vector<std::pair<CLI::App*, fockloss::ExperimentId>> commands;
  const std::pair<const char*, const char*> descriptions[] = {
      {"fig1", "decohered EoF over the single-photon family"},
      {"fig2", "decohered EoF of the three entangled coherent families"},
      {"fig34", "rebased squeezed-state spectra under random local bases"},
      {"fig5", "decohered negativity over the single-photon family"},
      {"fig67", "constrained rank-4 spectra"},
      {"fig89", "constrained rank-5 spectra"},
      {"tmss-table", "two-mode squeezed vacuum checkpoints"},
  };
  for (const auto& [name, help] : descriptions) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, flags, true);
    commands.emplace_back(cmd, fockloss::experiment_from_name(name));
  }
  auto* sweep = app.add_subcommand("sweep", "run every experiment into one directory");
  add_common(sweep, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sweep->parsed()) {
      run_sweep(flags);
    } else {
      for (const auto& [cmd, id] : commands)
        if (cmd->parsed()) run_one(id, flags);
    }
  } catch (const fockloss::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const fockloss::ContractViolation& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return kExitContract;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitContract;
  }
  return 0;
}
