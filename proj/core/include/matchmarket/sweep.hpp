#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "matchmarket/config.hpp"
#include "matchmarket/evolve.hpp"
#include "matchmarket/stats.hpp"

namespace matchmarket {

/// Per-step rows for one (lambda, seed) cell.
struct CellResult {
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::vector<StepStats> steps;
};

/// Run one trajectory for the config with the given lambda and seed and
/// summarize every step (memory stays flat; states are not retained).
CellResult run_cell(const ExperimentConfig& config, double lambda, std::uint64_t seed);

/// Exact trajectory CSV bytes for a cell:
/// header `t,lambda,seed,mean_utility,std_utility,couple_share,single_share,
/// married_share,m1,m2,m3,m4`, preceded by one comment line carrying the
/// config hash and seed list. 12 significant digits throughout.
std::string trajectory_csv(const CellResult& cell, const ExperimentConfig& config);

struct SweepOutput {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// One trajectory per (lambda, seed), cells in parallel, one CSV per cell,
/// plus the optional analytic CSVs and a manifest recording the seeds and
/// config hash. Re-running the manifest reproduces every file byte for byte.
SweepOutput run_sweep(const ExperimentConfig& config);

/// Re-run a manifest. Returns the list of files whose bytes differ from what
/// was already on disk (empty = fully reproduced).
std::vector<std::filesystem::path> replay_manifest(const std::filesystem::path& manifest_path);

/// Married-share curve by step for one lambda (seed-averaged).
struct LambdaCurve {
  double lambda = 0.0;
  std::vector<double> married_share;
};

/// Load and seed-average the married-share curves from a sweep output
/// directory (grouping the trajectory CSVs by lambda).
std::vector<LambdaCurve> load_married_share_curves(const std::filesystem::path& dir);

}  // namespace matchmarket
