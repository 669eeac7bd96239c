// matchmarket: a matching-market laboratory.
//
// Subcommands:
//   simulate        one trajectory, per-step stats CSV
//   sweep           (lambda, seed) grid from a TOML config, manifest + CSVs
//   analytic        exact mean-field evolution (uniform model)
//   stable-baseline Gale-Shapley stable matching and its average utility
//   fit             fit married-share curves to real cohort data
//   replay          re-run a sweep manifest and verify byte-identical outputs
//
// Exit codes: 0 success, 2 config error, 3 data error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "matchmarket/analytic.hpp"
#include "matchmarket/config.hpp"
#include "matchmarket/errors.hpp"
#include "matchmarket/fit.hpp"
#include "matchmarket/stable.hpp"
#include "matchmarket/sweep.hpp"

namespace mm = matchmarket;

namespace {

struct DistOptions {
  std::string family = "gaussian";
  double mu = 0.0;
  double sigma = 1.0;
};

void add_dist_options(CLI::App* cmd, const std::string& prefix, DistOptions& opt) {
  cmd->add_option("--" + prefix + "-family", opt.family, "gaussian|uniform|pointmass");
  cmd->add_option("--" + prefix + "-mu", opt.mu, "location parameter");
  cmd->add_option("--" + prefix + "-sigma", opt.sigma, "scale parameter");
}

int cmd_simulate(const std::string& lambda_tok, const std::string& policy, int n, int steps,
                 std::uint64_t seed, const DistOptions& off, const DistOptions& diag,
                 double sigma_lambda, int split, const std::string& out_path) {
  mm::ExperimentConfig config;
  config.n = n;
  config.steps = steps;
  config.seeds = {seed};
  config.offdiag = mm::parse_distribution(off.family, off.mu, off.sigma);
  config.diag = mm::parse_distribution(diag.family, diag.mu, diag.sigma);
  config.sigma_lambda = sigma_lambda;
  if (policy == "none") config.policy_kind = mm::MarriageKind::None;
  else if (policy == "fixed") config.policy_kind = mm::MarriageKind::FixedThreshold;
  else if (policy == "heterogeneous") config.policy_kind = mm::MarriageKind::HeterogeneousThreshold;
  else if (policy == "adaptive") config.policy_kind = mm::MarriageKind::AdaptiveProposal;
  else throw mm::ConfigError("unknown policy '" + policy + "'");
  const double lambda = mm::parse_lambda_token(lambda_tok);
  config.lambdas = {lambda};
  if (split > 0) config.partition_sizes = {split, n - split};
  config.validate();

  const mm::CellResult cell = mm::run_cell(config, lambda, seed);
  const std::string csv = mm::trajectory_csv(cell, config);
  if (out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw mm::ConfigError("cannot write " + out_path);
    out << csv;
    const auto& last = cell.steps.back();
    std::cout << "wrote " << out_path << "\n"
              << "final step " << last.step << ": mean_utility=" << mm::format_sig12(last.mean_utility)
              << " married_share=" << mm::format_sig12(last.married_share) << "\n";
  }
  return 0;
}

int cmd_analytic(double mu, double sigma, int steps, int n_max, const std::string& family,
                 const std::string& out_dir) {
  namespace an = mm::analytic;
  if (family == "gaussian") {
    const an::ModelSpec model = an::ModelSpec::gaussian(mu, sigma);
    const an::FirstStepMoments fs = an::first_step_moments(model, n_max);
    std::cout << "gaussian model: first-step closed forms (multi-step evolution is exact only "
                 "for the uniform model)\n";
    std::cout << "b1=" << mm::format_sig12(fs.b1) << " r1=" << mm::format_sig12(fs.r1) << "\n";
    for (int n = 1; n <= n_max; ++n) {
      std::cout << "E[U1^" << n << "]=" << mm::format_sig12(fs.population[n]) << "\n";
    }
    return 0;
  }
  if (family != "uniform") throw mm::ConfigError("analytic family must be uniform or gaussian");

  mm::ExperimentConfig config;
  config.n = 2;  // unused by the analytic path
  config.steps = steps;
  config.n_max = std::max(n_max, 2);
  config.offdiag = mm::DistributionSpec::uniform(mu, sigma);
  config.diag = config.offdiag;
  config.analytic_enabled = true;
  config.output_dir = out_dir;
  config.lambdas = {std::numeric_limits<double>::infinity()};
  config.policy_kind = mm::MarriageKind::None;

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  an::ModelSpec model{config.offdiag, config.diag, std::nullopt};
  an::MomentState s = an::initial_moment_state(model, config.n_max);
  std::cout << "t=0 b=" << mm::fraction_string(s.b) << " r=" << mm::fraction_string(s.r) << "\n";
  for (int t = 0; t < steps; ++t) {
    s = an::moment_step(s, model, config.n_max);
    std::cout << "t=" << s.t << " b=" << mm::fraction_string(s.b)
              << " r=" << mm::fraction_string(s.r)
              << " E[U]=" << mm::format_sig12(mm::to_double(s.population_moments[1])) << "\n";
  }
  const mm::SweepOutput out = mm::run_sweep(config);
  std::cout << "wrote";
  for (const auto& f : out.files) std::cout << " " << f.filename().string();
  std::cout << " manifest.json to " << out_dir << "\n";
  return 0;
}

int cmd_stable(int n, int matrices, std::uint64_t seed0, const DistOptions& off,
               const std::string& out_path) {
  const mm::DistributionSpec spec = mm::parse_distribution(off.family, off.mu, off.sigma);
  if (n % 2 != 0) throw mm::ConfigError("stable-baseline needs even n");
  std::ofstream out;
  if (!out_path.empty()) {
    out.open(out_path, std::ios::binary);
    if (!out) throw mm::ConfigError("cannot write " + out_path);
    out << "matrix,seed,u_gs,proposals,blocking_pairs\n";
  }
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < matrices; ++i) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i);
    mm::RngStream rng(seed);
    const mm::AffinityMatrix a = mm::build_affinity(n, spec, spec, rng);
    const mm::BipartiteInstance inst = mm::random_equal_split(a, rng);
    const mm::StableMatching match = mm::gale_shapley(inst);
    const auto blocking = mm::verify_stability(inst, match.assignment);
    sum += match.u_gs;
    sum_sq += match.u_gs * match.u_gs;
    std::cout << "matrix " << i << " (seed " << seed << "): u_gs=" << mm::format_sig12(match.u_gs)
              << " proposals=" << match.proposals << " blocking_pairs=" << blocking.size() << "\n";
    if (out) {
      out << i << "," << seed << "," << mm::format_sig12(match.u_gs) << "," << match.proposals
          << "," << blocking.size() << "\n";
    }
  }
  const double mean = sum / matrices;
  const double var = sum_sq / matrices - mean * mean;
  std::cout << "u_gs mean=" << mm::format_sig12(mean)
            << " sd=" << mm::format_sig12(std::sqrt(var > 0 ? var : 0.0)) << " over " << matrices
            << " matrices\n";
  return 0;
}

int cmd_fit(const std::string& sim_dir, const std::string& real_path, const std::string& out_path) {
  const std::vector<mm::LambdaCurve> curves = mm::load_married_share_curves(sim_dir);
  if (curves.empty()) throw mm::DataError("no trajectory CSVs found in " + sim_dir);
  const std::vector<mm::RealSeries> series = mm::ingest_marriage_series(real_path);
  const mm::FitReport report = mm::fit_model_to_series(curves, series);

  std::ostringstream os;
  os << "cohort,lambda,slope_years_per_step,intercept_years,rmse\n";
  for (const auto& row : report.rows) {
    os << row.cohort << "," << mm::format_sig12(row.lambda) << "," << mm::format_sig12(row.slope)
       << "," << mm::format_sig12(row.intercept) << "," << mm::format_sig12(row.rmse) << "\n";
  }
  std::cout << os.str();
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw mm::ConfigError("cannot write " + out_path);
    out << os.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchmarket: stochastic matching-market laboratory"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one trajectory and write per-step stats");
  int sim_n = 10000, sim_steps = 100, sim_split = 0;
  std::uint64_t sim_seed = 1;
  std::string sim_lambda = "none", sim_policy = "fixed", sim_out = "trajectory.csv";
  double sim_sigma_lambda = 0.0;
  DistOptions sim_off, sim_diag;
  sim->add_option("--n", sim_n, "agent count");
  sim->add_option("--steps", sim_steps, "number of steps T");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--lambda", sim_lambda, "marriage threshold or \"none\"");
  sim->add_option("--policy", sim_policy, "none|fixed|heterogeneous|adaptive");
  sim->add_option("--sigma-lambda", sim_sigma_lambda, "threshold spread (heterogeneous)");
  sim->add_option("--split", sim_split, "two-sided society: size of group 0 (0 = unpartitioned)");
  sim->add_option("--out", sim_out, "output CSV path ('-' for stdout)");
  add_dist_options(sim, "offdiag", sim_off);
  add_dist_options(sim, "diag", sim_diag);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a (lambda, seed) grid from a TOML config");
  std::string sweep_config;
  std::string sweep_out_override;
  std::vector<std::string> sweep_lambda_override;
  std::vector<std::uint64_t> sweep_seed_override;
  int sweep_n_override = 0, sweep_steps_override = 0;
  sweep->add_option("--config", sweep_config, "TOML config file")->required();
  sweep->add_option("--output-dir", sweep_out_override, "override run.output_dir");
  sweep->add_option("--lambda", sweep_lambda_override, "override policy.lambda list");
  sweep->add_option("--seeds", sweep_seed_override, "override run.seeds");
  sweep->add_option("--n", sweep_n_override, "override run.n");
  sweep->add_option("--steps", sweep_steps_override, "override run.steps");

  // analytic
  auto* ana = app.add_subcommand("analytic", "exact mean-field evolution (uniform model)");
  double ana_mu = 0.0, ana_sigma = 1.0;
  int ana_steps = 5, ana_nmax = 4;
  std::string ana_family = "uniform", ana_out = "analytic_out";
  ana->add_option("--mu", ana_mu, "entry-law location");
  ana->add_option("--sigma", ana_sigma, "entry-law scale");
  ana->add_option("--steps", ana_steps, "evolution steps");
  ana->add_option("--n-max", ana_nmax, "highest moment order");
  ana->add_option("--family", ana_family, "uniform|gaussian (gaussian: first step only)");
  ana->add_option("--out", ana_out, "output directory (uniform only)");

  // stable-baseline
  auto* stb = app.add_subcommand("stable-baseline", "Gale-Shapley baseline utility");
  int stb_n = 1000, stb_matrices = 5;
  std::uint64_t stb_seed = 1;
  std::string stb_out;
  DistOptions stb_off;
  stb->add_option("--n", stb_n, "society size (split in half)");
  stb->add_option("--matrices", stb_matrices, "number of random matrices");
  stb->add_option("--seed", stb_seed, "first seed");
  stb->add_option("--out", stb_out, "optional CSV output path");
  add_dist_options(stb, "offdiag", stb_off);

  // fit
  auto* fit = app.add_subcommand("fit", "fit married-share curves to real cohort data");
  std::string fit_sim, fit_real, fit_out;
  fit->add_option("--sim", fit_sim, "sweep output directory with trajectory CSVs")->required();
  fit->add_option("--real", fit_real, "real-data CSV (cohort,age_years,share_married)")->required();
  fit->add_option("--out", fit_out, "optional report CSV path");

  // replay
  auto* rep = app.add_subcommand("replay", "re-run a sweep manifest and verify outputs");
  std::string rep_manifest;
  rep->add_option("manifest", rep_manifest, "manifest.json path")->required();

  try {
    app.parse(argc, argv);

    if (*sim) {
      return cmd_simulate(sim_lambda, sim_policy, sim_n, sim_steps, sim_seed, sim_off, sim_diag,
                          sim_sigma_lambda, sim_split, sim_out);
    }
    if (*sweep) {
      mm::ExperimentConfig config = mm::ExperimentConfig::from_toml(
          mm::TomlTable::parse_file(sweep_config));
      if (!sweep_out_override.empty()) config.output_dir = sweep_out_override;
      if (!sweep_lambda_override.empty()) {
        config.lambdas.clear();
        for (const auto& tok : sweep_lambda_override) {
          config.lambdas.push_back(mm::parse_lambda_token(tok));
        }
      }
      if (!sweep_seed_override.empty()) config.seeds = sweep_seed_override;
      if (sweep_n_override > 0) config.n = sweep_n_override;
      if (sweep_steps_override > 0) config.steps = sweep_steps_override;
      config.validate();
      const mm::SweepOutput out = mm::run_sweep(config);
      std::cout << "wrote " << out.files.size() << " files and " << out.manifest.string() << "\n";
      return 0;
    }
    if (*ana) return cmd_analytic(ana_mu, ana_sigma, ana_steps, ana_nmax, ana_family, ana_out);
    if (*stb) return cmd_stable(stb_n, stb_matrices, stb_seed, stb_off, stb_out);
    if (*fit) return cmd_fit(fit_sim, fit_real, fit_out);
    if (*rep) {
      const auto changed = mm::replay_manifest(rep_manifest);
      if (changed.empty()) {
        std::cout << "replay reproduced all outputs byte-identically\n";
        return 0;
      }
      std::cerr << "replay MISMATCH in " << changed.size() << " file(s):\n";
      for (const auto& f : changed) std::cerr << "  " << f.string() << "\n";
      return 1;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const mm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mm::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
