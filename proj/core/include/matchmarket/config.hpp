#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matchmarket/affinity.hpp"
#include "matchmarket/distribution.hpp"
#include "matchmarket/policy.hpp"

namespace matchmarket {

/// Minimal TOML subset: [section] headers, `key = value` lines, # comments.
/// Values: integers, floats, booleans, "strings", and single-line arrays of
/// those (mixed element types allowed, as in TOML 1.0). Keys are addressed
/// as "section.key".
class TomlTable {
 public:
  using Scalar = std::variant<std::int64_t, double, bool, std::string>;

  static TomlTable parse(const std::string& text);
  static TomlTable parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return scalars_.count(key) || arrays_.count(key); }
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::vector<Scalar>> get_array(const std::string& key) const;

 private:
  std::map<std::string, Scalar> scalars_;
  std::map<std::string, std::vector<Scalar>> arrays_;
};

/// Full description of one experiment sweep. Validated before any run
/// starts; hashed into every output file.
struct ExperimentConfig {
  int schema_version = 1;
  int n = 1000;
  int steps = 100;
  int n_max = 4;
  DistributionSpec offdiag = DistributionSpec::gaussian(0.0, 1.0);
  DistributionSpec diag = DistributionSpec::gaussian(0.0, 1.0);
  MarriageKind policy_kind = MarriageKind::FixedThreshold;
  double sigma_lambda = 0.0;
  std::vector<double> lambdas = {std::numeric_limits<double>::infinity()};
  std::vector<std::uint64_t> seeds = {1};
  std::vector<int> partition_sizes;  // empty = unpartitioned
  int bisexual_group = -1;
  int bisexual_count = 0;
  std::string output_dir = "out";
  bool analytic_enabled = false;
  AffinityStorage storage = AffinityStorage::Auto;
  int threads = 0;  // 0 = hardware concurrency

  /// Throws ConfigError naming the offending field.
  void validate() const;

  static ExperimentConfig from_toml(const TomlTable& t);

  /// Canonical one-line rendering; the config hash is FNV-1a over it.
  std::string canonical_string() const;
  std::uint64_t config_hash() const;

  std::string to_json_string() const;
  static ExperimentConfig from_json_string(const std::string& text);
};

/// "none" <-> infinity spelling for marriage thresholds in configs.
double parse_lambda_token(const std::string& token);
std::string lambda_token(double lambda);

/// Decimal with 12 significant digits (the numeric output format).
std::string format_sig12(double v);

enum class DistSide { OffDiagonal, Diagonal };
DistributionSpec parse_distribution(const std::string& family, double mu, double sigma);

}  // namespace matchmarket
