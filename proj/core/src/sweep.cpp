#include "matchmarket/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "matchmarket/analytic.hpp"
#include "matchmarket/errors.hpp"

namespace matchmarket {

namespace {

constexpr const char* kTrajectoryHeader =
    "t,lambda,seed,mean_utility,std_utility,couple_share,single_share,married_share,m1,m2,m3,m4";

MarriagePolicy policy_for(const ExperimentConfig& config, double lambda) {
  MarriagePolicy p;
  p.kind = std::isinf(lambda) && config.policy_kind == MarriageKind::FixedThreshold
               ? MarriageKind::None
               : config.policy_kind;
  p.lambda = lambda;
  p.sigma_lambda = config.sigma_lambda;
  return p;
}

std::optional<PartitionSpec> partitions_for(const ExperimentConfig& config) {
  if (config.partition_sizes.empty()) return std::nullopt;
  PartitionSpec spec = PartitionSpec::two_groups(config.n, config.partition_sizes[0]);
  if (config.bisexual_count > 0) {
    const auto& g = spec.groups[config.bisexual_group];
    spec.bisexual_subset.assign(g.begin(), g.begin() + config.bisexual_count);
  }
  return spec;
}

void run_parallel(int jobs, int threads, const std::function<void(int)>& work) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      std::min<unsigned>(threads > 0 ? static_cast<unsigned>(threads) : hw,
                         static_cast<unsigned>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = static_cast<int>(w); i < jobs; i += static_cast<int>(workers)) work(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string cell_file_name(double lambda, std::uint64_t seed) {
  return "trajectory_lambda=" + lambda_token(lambda) + "_seed=" + std::to_string(seed) + ".csv";
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << bytes;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string seed_list(const ExperimentConfig& config) {
  std::string out;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(config.seeds[i]);
  }
  return out;
}

std::vector<analytic::MomentState> analytic_sequence(const ExperimentConfig& config) {
  using namespace analytic;
  const ModelSpec model{config.offdiag, config.diag, std::nullopt};
  const int n_max = std::max(config.n_max, 4);
  std::vector<MomentState> seq;
  seq.reserve(static_cast<std::size_t>(config.steps) + 1);
  seq.push_back(initial_moment_state(model, n_max));
  for (int t = 0; t < config.steps; ++t) seq.push_back(moment_step(seq.back(), model, n_max));
  return seq;
}

std::string analytic_csv(const ExperimentConfig& config,
                         const std::vector<analytic::MomentState>& seq) {
  std::ostringstream os;
  os << "# config_hash=" << std::hex << config.config_hash() << std::dec << " seeds="
     << seed_list(config) << " source=analytic\n";
  os << kTrajectoryHeader << "\n";
  for (const auto& st : seq) {
    os << st.t << ",inf,-1";
    const double m1 = to_double(st.population_moments[1]);
    const double m2 = to_double(st.population_moments[2]);
    const double var = m2 - m1 * m1;
    os << "," << format_sig12(m1) << "," << format_sig12(var > 0 ? std::sqrt(var) : 0.0);
    os << "," << format_sig12(to_double(st.b)) << "," << format_sig12(to_double(st.r)) << ",0";
    for (int n = 1; n <= 4; ++n) {
      os << ","
         << format_sig12(n < static_cast<int>(st.population_moments.size())
                             ? to_double(st.population_moments[static_cast<std::size_t>(n)])
                             : 0.0);
    }
    os << "\n";
  }
  return os.str();
}

std::string analytic_exact_csv(const ExperimentConfig& config,
                               const std::vector<analytic::MomentState>& seq) {
  std::ostringstream os;
  os << "# config_hash=" << std::hex << config.config_hash() << std::dec << " seeds="
     << seed_list(config) << " source=analytic exact rationals p/q\n";
  os << "t,b,r";
  for (int n = 1; n <= config.n_max; ++n) os << ",EC" << n << ",ES" << n << ",EU" << n;
  os << "\n";
  for (const auto& st : seq) {
    os << st.t << "," << fraction_string(st.b) << "," << fraction_string(st.r);
    for (int n = 1; n <= config.n_max; ++n) {
      const auto idx = static_cast<std::size_t>(n);
      os << "," << fraction_string(st.couple_moments[idx]) << ","
         << fraction_string(st.single_moments[idx]) << ","
         << fraction_string(st.population_moments[idx]);
    }
    os << "\n";
  }
  return os.str();
}

std::string analytic_densities_txt(const ExperimentConfig& config,
                                   const std::vector<analytic::MomentState>& seq) {
  using analytic::PolyDensity;
  std::ostringstream os;
  os << "# config_hash=" << std::hex << config.config_hash() << std::dec << " seeds="
     << seed_list(config) << " polynomial densities, coefficients constant-term first (p/q)\n";
  for (const auto& st : seq) {
    auto line = [&](const char* which, const std::optional<PolyDensity>& d) {
      os << "t=" << st.t << " " << which;
      if (!d) {
        os << " (none)\n";
        return;
      }
      os << " support=[" << fraction_string(d->support().lo) << ","
         << fraction_string(d->support().hi) << "] coeffs:";
      for (int i = 0; i <= d->poly().degree(); ++i) os << " " << fraction_string(d->poly().coeff(i));
      os << "\n";
    };
    line("couple", st.couple_density);
    line("single", st.single_density);
  }
  return os.str();
}

}  // namespace

CellResult run_cell(const ExperimentConfig& config, double lambda, std::uint64_t seed) {
  CellResult cell;
  cell.lambda = lambda;
  cell.seed = seed;
  cell.steps.reserve(static_cast<std::size_t>(config.steps) + 1);

  RngStream rng(seed);
  const AffinityMatrix a = build_affinity(config.n, config.offdiag, config.diag, rng, config.storage);
  run_trajectory_observed(a, config.steps, policy_for(config, lambda), partitions_for(config), rng,
                          [&](const PopulationState& s) {
                            cell.steps.push_back(summarize_step(s, std::max(config.n_max, 4)));
                          });
  return cell;
}

std::string trajectory_csv(const CellResult& cell, const ExperimentConfig& config) {
  std::ostringstream os;
  os << "# config_hash=" << std::hex << config.config_hash() << std::dec << " seeds=";
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    if (i) os << ",";
    os << config.seeds[i];
  }
  os << "\n" << kTrajectoryHeader << "\n";
  for (const StepStats& st : cell.steps) {
    os << st.step << "," << (std::isinf(cell.lambda) ? "inf" : format_sig12(cell.lambda)) << ","
       << cell.seed;
    os << "," << format_sig12(st.mean_utility) << "," << format_sig12(st.std_utility) << ","
       << format_sig12(st.couple_share) << "," << format_sig12(st.single_share) << ","
       << format_sig12(st.married_share);
    for (int n = 0; n < 4; ++n) {
      os << "," << format_sig12(n < static_cast<int>(st.moments.size()) ? st.moments[n] : 0.0);
    }
    os << "\n";
  }
  return os.str();
}

SweepOutput run_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output directory is not writable: " + dir.string());
  }

  struct Cell {
    double lambda;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const double l : config.lambdas) {
    for (const std::uint64_t s : config.seeds) cells.push_back({l, s});
  }

  std::vector<std::string> contents(cells.size());
  std::exception_ptr first_error;
  std::mutex err_mu;
  run_parallel(static_cast<int>(cells.size()), config.threads, [&](int i) {
    try {
      const CellResult r = run_cell(config, cells[static_cast<std::size_t>(i)].lambda,
                                    cells[static_cast<std::size_t>(i)].seed);
      contents[static_cast<std::size_t>(i)] = trajectory_csv(r, config);
    } catch (...) {
      const std::scoped_lock lock(err_mu);
      if (!first_error) first_error = std::current_exception();
    }
  });
  if (first_error) std::rethrow_exception(first_error);

  SweepOutput out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto path = dir / cell_file_name(cells[i].lambda, cells[i].seed);
    write_file(path, contents[i]);
    out.files.push_back(path);
  }

  if (config.analytic_enabled) {
    if (!analytic::ModelSpec{config.offdiag, config.diag, std::nullopt}.exact_capable()) {
      throw ConfigError(
          "config field 'run.analytic' requires the uniform model with diag = offdiag");
    }
    const std::vector<analytic::MomentState> seq = analytic_sequence(config);
    const auto a1 = dir / "analytic.csv";
    const auto a2 = dir / "analytic_exact.csv";
    const auto a3 = dir / "analytic_densities.txt";
    write_file(a1, analytic_csv(config, seq));
    write_file(a2, analytic_exact_csv(config, seq));
    write_file(a3, analytic_densities_txt(config, seq));
    out.files.push_back(a1);
    out.files.push_back(a2);
    out.files.push_back(a3);
  }

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["config_hash"] = std::to_string(config.config_hash());
  manifest["config"] = nlohmann::json::parse(config.to_json_string());
  manifest["seeds"] = config.seeds;
  std::vector<std::string> names;
  names.reserve(out.files.size());
  for (const auto& f : out.files) names.push_back(f.filename().string());
  manifest["files"] = names;
  out.manifest = dir / "manifest.json";
  write_file(out.manifest, manifest.dump(2) + "\n");
  return out;
}

std::vector<std::filesystem::path> replay_manifest(const std::filesystem::path& manifest_path) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    throw DataError(std::string("manifest parse error: ") + e.what());
  }
  ExperimentConfig config = ExperimentConfig::from_json_string(manifest.at("config").dump());
  // Outputs land next to the manifest regardless of where it was created.
  config.output_dir = manifest_path.parent_path().string();

  std::map<std::filesystem::path, std::string> before;
  for (const auto& name : manifest.at("files")) {
    const auto p = manifest_path.parent_path() / name.get<std::string>();
    if (std::filesystem::exists(p)) before[p] = read_file(p);
  }
  const SweepOutput out = run_sweep(config);
  std::vector<std::filesystem::path> changed;
  for (const auto& f : out.files) {
    const auto it = before.find(f);
    if (it != before.end() && it->second != read_file(f)) changed.push_back(f);
  }
  return changed;
}

std::vector<LambdaCurve> load_married_share_curves(const std::filesystem::path& dir) {
  std::map<double, std::map<int, std::pair<double, int>>> acc;  // lambda -> t -> (sum, count)
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trajectory_", 0) != 0 || entry.path().extension() != ".csv") continue;
    std::ifstream in(entry.path());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 't') continue;
      std::istringstream row(line);
      std::string tok;
      std::vector<std::string> cols;
      while (std::getline(row, tok, ',')) cols.push_back(tok);
      if (cols.size() < 8) throw DataError("malformed trajectory row in " + name);
      const int t = std::stoi(cols[0]);
      const double lambda = cols[1] == "inf" ? std::numeric_limits<double>::infinity()
                                             : std::stod(cols[1]);
      const double share = std::stod(cols[7]);
      auto& slot = acc[lambda][t];
      slot.first += share;
      slot.second += 1;
    }
  }
  std::vector<LambdaCurve> curves;
  for (const auto& [lambda, by_t] : acc) {
    LambdaCurve c;
    c.lambda = lambda;
    c.married_share.resize(by_t.rbegin()->first + 1, 0.0);
    for (const auto& [t, sum_count] : by_t) {
      c.married_share[static_cast<std::size_t>(t)] = sum_count.first / sum_count.second;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace matchmarket
