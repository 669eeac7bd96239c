#include "matchmarket/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matchmarket/errors.hpp"
#include "matchmarket/rng.hpp"

namespace matchmarket {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw ConfigError("config parse error at line " + std::to_string(line) + ": " + what);
}

TomlTable::Scalar parse_scalar(const std::string& tok, int line) {
  if (tok.empty()) parse_fail(line, "empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') parse_fail(line, "unterminated string");
    return tok.substr(1, tok.size() - 2);
  }
  if (tok == "true") return true;
  if (tok == "false") return false;
  const bool looks_float = tok.find_first_of(".eE") != std::string::npos ||
                           tok == "inf" || tok == "-inf" || tok == "+inf";
  if (!looks_float) {
    std::int64_t iv = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
    if (ec == std::errc() && p == tok.data() + tok.size()) return iv;
  }
  try {
    std::size_t used = 0;
    const double dv = std::stod(tok, &used);
    if (used == tok.size()) return dv;
  } catch (...) {
  }
  parse_fail(line, "cannot parse value '" + tok + "'");
}

// Split a single-line array body on top-level commas (strings may hold commas).
std::vector<std::string> split_array_items(const std::string& body, int line) {
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (const char c : body) {
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  const std::string last = trim(cur);
  if (!last.empty()) items.push_back(last);
  if (in_str) parse_fail(line, "unterminated string in array");
  return items;
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
  TomlTable t;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // strip comments outside strings
    std::string stripped;
    bool in_str = false;
    for (const char c : raw) {
      if (c == '"') in_str = !in_str;
      if (c == '#' && !in_str) break;
      stripped += c;
    }
    const std::string line = trim(stripped);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) parse_fail(line_no, "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (t.has(full)) parse_fail(line_no, "duplicate key '" + full + "'");
    if (!val.empty() && val.front() == '[') {
      if (val.back() != ']') parse_fail(line_no, "arrays must close on the same line");
      std::vector<Scalar> items;
      for (const std::string& tok : split_array_items(val.substr(1, val.size() - 2), line_no)) {
        items.push_back(parse_scalar(tok, line_no));
      }
      t.arrays_[full] = std::move(items);
    } else {
      t.scalars_[full] = parse_scalar(val, line_no);
    }
  }
  return t;
}

TomlTable TomlTable::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::int64_t> TomlTable::get_int(const std::string& key) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw ConfigError("config field '" + key + "' must be an integer");
}

std::optional<double> TomlTable::get_double(const std::string& key) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) return std::nullopt;
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
  throw ConfigError("config field '" + key + "' must be a number");
}

std::optional<bool> TomlTable::get_bool(const std::string& key) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) return std::nullopt;
  if (const auto* v = std::get_if<bool>(&it->second)) return *v;
  throw ConfigError("config field '" + key + "' must be a boolean");
}

std::optional<std::string> TomlTable::get_string(const std::string& key) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  throw ConfigError("config field '" + key + "' must be a string");
}

std::optional<std::vector<TomlTable::Scalar>> TomlTable::get_array(const std::string& key) const {
  const auto it = arrays_.find(key);
  if (it == arrays_.end()) return std::nullopt;
  return it->second;
}

double parse_lambda_token(const std::string& token) {
  if (token == "none") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (...) {
  }
  throw ConfigError("lambda must be a number or \"none\", got '" + token + "'");
}

std::string lambda_token(double lambda) {
  if (std::isinf(lambda)) return "none";
  return format_sig12(lambda);
}

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

DistributionSpec parse_distribution(const std::string& family, double mu, double sigma) {
  std::string f = family;
  std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return std::tolower(c); });
  DistributionSpec s;
  if (f == "gaussian" || f == "normal") {
    s = DistributionSpec::gaussian(mu, sigma);
  } else if (f == "uniform") {
    s = DistributionSpec::uniform(mu, sigma);
  } else if (f == "pointmass" || f == "point_mass" || f == "delta") {
    s = DistributionSpec::point_mass(mu);
  } else {
    throw ConfigError("unknown distribution family '" + family + "'");
  }
  s.validate();
  return s;
}

namespace {

const char* family_name(DistFamily f) {
  switch (f) {
    case DistFamily::Gaussian:
      return "gaussian";
    case DistFamily::Uniform:
      return "uniform";
    case DistFamily::PointMass:
      return "pointmass";
  }
  return "?";
}

const char* policy_name(MarriageKind k) {
  switch (k) {
    case MarriageKind::None:
      return "none";
    case MarriageKind::FixedThreshold:
      return "fixed";
    case MarriageKind::HeterogeneousThreshold:
      return "heterogeneous";
    case MarriageKind::AdaptiveProposal:
      return "adaptive";
  }
  return "?";
}

MarriageKind parse_policy_kind(const std::string& name) {
  if (name == "none") return MarriageKind::None;
  if (name == "fixed") return MarriageKind::FixedThreshold;
  if (name == "heterogeneous") return MarriageKind::HeterogeneousThreshold;
  if (name == "adaptive") return MarriageKind::AdaptiveProposal;
  throw ConfigError("unknown policy kind '" + name + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (schema_version != 1) throw ConfigError("config field 'schema_version' must be 1");
  if (n < 2) throw ConfigError("config field 'run.n' must be >= 2");
  if (steps < 1) throw ConfigError("config field 'run.steps' must be >= 1");
  if (n_max < 2) throw ConfigError("config field 'run.n_max' must be >= 2");
  offdiag.validate();
  diag.validate();
  if (sigma_lambda < 0) throw ConfigError("config field 'policy.sigma_lambda' must be >= 0");
  if (lambdas.empty()) throw ConfigError("config field 'policy.lambda' must not be empty");
  if (seeds.empty()) throw ConfigError("config field 'run.seeds' must not be empty");
  if (!partition_sizes.empty()) {
    if (partition_sizes.size() != 2) {
      throw ConfigError("config field 'partition.group_sizes' must list exactly two sizes");
    }
    if (partition_sizes[0] <= 0 || partition_sizes[1] <= 0 ||
        partition_sizes[0] + partition_sizes[1] != n) {
      throw ConfigError("config field 'partition.group_sizes' must be positive and sum to n");
    }
    if (bisexual_count > 0) {
      if (bisexual_group != 0 && bisexual_group != 1) {
        throw ConfigError("config field 'partition.bisexual_group' must be 0 or 1");
      }
      if (bisexual_count > partition_sizes[bisexual_group]) {
        throw ConfigError("config field 'partition.bisexual_count' exceeds the group size");
      }
    }
  }
  if (output_dir.empty()) throw ConfigError("config field 'run.output_dir' must not be empty");
  if (threads < 0) throw ConfigError("config field 'run.threads' must be >= 0");
}

ExperimentConfig ExperimentConfig::from_toml(const TomlTable& t) {
  ExperimentConfig c;
  if (const auto v = t.get_int("schema_version")) c.schema_version = static_cast<int>(*v);
  if (const auto v = t.get_int("run.n")) c.n = static_cast<int>(*v);
  if (const auto v = t.get_int("run.steps")) c.steps = static_cast<int>(*v);
  if (const auto v = t.get_int("run.n_max")) c.n_max = static_cast<int>(*v);
  if (const auto v = t.get_string("run.output_dir")) c.output_dir = *v;
  if (const auto v = t.get_bool("run.analytic")) c.analytic_enabled = *v;
  if (const auto v = t.get_int("run.threads")) c.threads = static_cast<int>(*v);
  if (const auto v = t.get_string("run.storage")) {
    if (*v == "auto") c.storage = AffinityStorage::Auto;
    else if (*v == "dense") c.storage = AffinityStorage::Dense;
    else if (*v == "lazy") c.storage = AffinityStorage::Lazy;
    else throw ConfigError("config field 'run.storage' must be auto|dense|lazy");
  }
  if (const auto arr = t.get_array("run.seeds")) {
    c.seeds.clear();
    for (const auto& s : *arr) {
      if (const auto* iv = std::get_if<std::int64_t>(&s)) {
        c.seeds.push_back(static_cast<std::uint64_t>(*iv));
      } else {
        throw ConfigError("config field 'run.seeds' must hold integers");
      }
    }
  }

  auto spec_of = [&](const std::string& side, const DistributionSpec& dflt) {
    DistributionSpec s = dflt;
    const auto fam = t.get_string("affinity." + side + "_family");
    const auto mu = t.get_double("affinity." + side + "_mu");
    const auto sg = t.get_double("affinity." + side + "_sigma");
    if (fam || mu || sg) {
      s = parse_distribution(fam.value_or(family_name(dflt.family)), mu.value_or(dflt.mu),
                             sg.value_or(dflt.sigma));
    }
    return s;
  };
  c.offdiag = spec_of("offdiag", c.offdiag);
  c.diag = spec_of("diag", c.diag);

  if (const auto v = t.get_string("policy.kind")) c.policy_kind = parse_policy_kind(*v);
  if (const auto v = t.get_double("policy.sigma_lambda")) c.sigma_lambda = *v;
  if (const auto arr = t.get_array("policy.lambda")) {
    c.lambdas.clear();
    for (const auto& s : *arr) {
      if (const auto* sv = std::get_if<std::string>(&s)) {
        c.lambdas.push_back(parse_lambda_token(*sv));
      } else if (const auto* dv = std::get_if<double>(&s)) {
        c.lambdas.push_back(*dv);
      } else if (const auto* iv = std::get_if<std::int64_t>(&s)) {
        c.lambdas.push_back(static_cast<double>(*iv));
      } else {
        throw ConfigError("config field 'policy.lambda' must hold numbers or \"none\"");
      }
    }
  } else if (const auto v = t.get_string("policy.lambda")) {
    c.lambdas = {parse_lambda_token(*v)};
  } else if (const auto v = t.get_double("policy.lambda")) {
    c.lambdas = {*v};
  }

  if (const auto arr = t.get_array("partition.group_sizes")) {
    c.partition_sizes.clear();
    for (const auto& s : *arr) {
      if (const auto* iv = std::get_if<std::int64_t>(&s)) {
        c.partition_sizes.push_back(static_cast<int>(*iv));
      } else {
        throw ConfigError("config field 'partition.group_sizes' must hold integers");
      }
    }
  }
  if (const auto v = t.get_int("partition.bisexual_group")) c.bisexual_group = static_cast<int>(*v);
  if (const auto v = t.get_int("partition.bisexual_count")) c.bisexual_count = static_cast<int>(*v);

  c.validate();
  return c;
}

std::string ExperimentConfig::canonical_string() const {
  std::ostringstream os;
  os << "v" << schema_version << ";n=" << n << ";T=" << steps << ";nmax=" << n_max
     << ";off=" << family_name(offdiag.family) << "," << format_sig12(offdiag.mu) << ","
     << format_sig12(offdiag.sigma) << ";diag=" << family_name(diag.family) << ","
     << format_sig12(diag.mu) << "," << format_sig12(diag.sigma)
     << ";policy=" << policy_name(policy_kind) << ";slam=" << format_sig12(sigma_lambda)
     << ";lambdas=";
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (i) os << ",";
    os << lambda_token(lambdas[i]);
  }
  os << ";seeds=";
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) os << ",";
    os << seeds[i];
  }
  os << ";part=";
  for (std::size_t i = 0; i < partition_sizes.size(); ++i) {
    if (i) os << ",";
    os << partition_sizes[i];
  }
  os << ";bi=" << bisexual_group << "," << bisexual_count << ";analytic=" << analytic_enabled;
  return os.str();
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a64(canonical_string()); }

std::string ExperimentConfig::to_json_string() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["run"] = {{"n", n},
              {"steps", steps},
              {"n_max", n_max},
              {"seeds", seeds},
              {"output_dir", output_dir},
              {"analytic", analytic_enabled},
              {"threads", threads}};
  j["affinity"] = {{"offdiag_family", family_name(offdiag.family)},
                   {"offdiag_mu", offdiag.mu},
                   {"offdiag_sigma", offdiag.sigma},
                   {"diag_family", family_name(diag.family)},
                   {"diag_mu", diag.mu},
                   {"diag_sigma", diag.sigma}};
  std::vector<std::string> lam;
  lam.reserve(lambdas.size());
  for (const double l : lambdas) lam.push_back(lambda_token(l));
  j["policy"] = {{"kind", policy_name(policy_kind)},
                 {"sigma_lambda", sigma_lambda},
                 {"lambda", lam}};
  j["partition"] = {{"group_sizes", partition_sizes},
                    {"bisexual_group", bisexual_group},
                    {"bisexual_count", bisexual_count}};
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("manifest parse error: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.schema_version = j.at("schema_version").get<int>();
    const auto& run = j.at("run");
    c.n = run.at("n").get<int>();
    c.steps = run.at("steps").get<int>();
    c.n_max = run.at("n_max").get<int>();
    c.seeds = run.at("seeds").get<std::vector<std::uint64_t>>();
    c.output_dir = run.at("output_dir").get<std::string>();
    c.analytic_enabled = run.at("analytic").get<bool>();
    c.threads = run.at("threads").get<int>();
    const auto& aff = j.at("affinity");
    c.offdiag = parse_distribution(aff.at("offdiag_family").get<std::string>(),
                                   aff.at("offdiag_mu").get<double>(),
                                   aff.at("offdiag_sigma").get<double>());
    c.diag = parse_distribution(aff.at("diag_family").get<std::string>(),
                                aff.at("diag_mu").get<double>(),
                                aff.at("diag_sigma").get<double>());
    const auto& pol = j.at("policy");
    c.policy_kind = parse_policy_kind(pol.at("kind").get<std::string>());
    c.sigma_lambda = pol.at("sigma_lambda").get<double>();
    c.lambdas.clear();
    for (const auto& l : pol.at("lambda")) c.lambdas.push_back(parse_lambda_token(l.get<std::string>()));
    const auto& part = j.at("partition");
    c.partition_sizes = part.at("group_sizes").get<std::vector<int>>();
    c.bisexual_group = part.at("bisexual_group").get<int>();
    c.bisexual_count = part.at("bisexual_count").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest field error: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace matchmarket
