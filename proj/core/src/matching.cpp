#include "matchmarket/matching.hpp"

#include <algorithm>
#include <string>

#include "matchmarket/errors.hpp"

namespace matchmarket {

MatchPlan draw_pairing(std::span<const int> eligible, RngStream& rng) {
  MatchPlan plan;
  if (eligible.empty()) return plan;

  // A uniform permutation paired off in adjacent positions induces a uniform
  // perfect matching: every matching corresponds to the same number of
  // permutations. The leftover element of an odd set is uniform as well.
  std::vector<int> buf(eligible.begin(), eligible.end());
  rng.shuffle(std::span<int>(buf));

  std::size_t m = buf.size();
  if (m % 2 == 1) {
    plan.unmatched.push_back(buf.back());
    --m;
  }
  plan.pairs.reserve(m / 2);
  for (std::size_t i = 0; i + 1 < m; i += 2) {
    plan.pairs.emplace_back(buf[i], buf[i + 1]);
  }
  return plan;
}

void PartitionSpec::validate(int n) const {
  if (groups.size() != 2) {
    throw ConfigError("partition: exactly two groups are supported, got " +
                      std::to_string(groups.size()));
  }
  std::vector<std::uint8_t> seen(n, 0);
  for (const auto& g : groups) {
    for (const int k : g) {
      if (k < 0 || k >= n) throw ConfigError("partition: agent index out of range");
      if (seen[k]) throw ConfigError("partition: agent " + std::to_string(k) + " in two groups");
      seen[k] = 1;
    }
  }
  for (int k = 0; k < n; ++k) {
    if (!seen[k]) throw ConfigError("partition: agent " + std::to_string(k) + " in no group");
  }
  if (!bisexual_subset.empty()) {
    for (int gi = 0; gi < 2; ++gi) {
      const auto& g = groups[gi];
      const bool all_in = std::all_of(bisexual_subset.begin(), bisexual_subset.end(), [&](int k) {
        return std::find(g.begin(), g.end(), k) != g.end();
      });
      if (all_in) return;
    }
    throw ConfigError("partition: bisexual subset must lie inside one group");
  }
}

PartitionSpec PartitionSpec::two_groups(int n, int n0) {
  if (n0 <= 0 || n0 >= n) throw ConfigError("partition: group sizes must be positive");
  PartitionSpec p;
  p.groups.resize(2);
  for (int k = 0; k < n0; ++k) p.groups[0].push_back(k);
  for (int k = n0; k < n; ++k) p.groups[1].push_back(k);
  return p;
}

MatchPlan draw_partitioned_plan(const PartitionSpec& partitions, std::span<const int> eligible,
                                RngStream& rng) {
  if (partitions.groups.size() != 2) {
    throw ConfigError("partition: exactly two groups are supported");
  }
  std::vector<std::uint8_t> in_group0;
  {
    int max_idx = 0;
    for (const auto& g : partitions.groups) {
      for (const int k : g) max_idx = std::max(max_idx, k);
    }
    for (const int k : eligible) max_idx = std::max(max_idx, k);
    in_group0.assign(static_cast<std::size_t>(max_idx) + 1, 0);
    for (const int k : partitions.groups[0]) in_group0[k] = 1;
  }

  std::vector<int> side0, side1;
  for (const int k : eligible) (in_group0[k] ? side0 : side1).push_back(k);

  MatchPlan plan;
  std::vector<int>* small = &side0;
  std::vector<int>* large = &side1;
  if (small->size() > large->size()) std::swap(small, large);

  if (small->empty()) {
    // One side gone (e.g. fully married): nothing crosses; everyone left is
    // unmatched apart from the within-group pass below.
    plan.unmatched = *large;
  } else {
    rng.shuffle(std::span<int>(*large));
    for (std::size_t i = 0; i < small->size(); ++i) {
      plan.pairs.emplace_back((*small)[i], (*large)[i]);
    }
    plan.unmatched.assign(large->begin() + static_cast<std::ptrdiff_t>(small->size()),
                          large->end());
    std::sort(plan.unmatched.begin(), plan.unmatched.end());
  }

  if (!partitions.bisexual_subset.empty() && plan.unmatched.size() >= 2) {
    std::vector<std::uint8_t> is_bi(in_group0.size(), 0);
    for (const int k : partitions.bisexual_subset) {
      if (k < static_cast<int>(is_bi.size())) is_bi[k] = 1;
    }
    std::vector<int> pool, rest;
    for (const int k : plan.unmatched) (is_bi[k] ? pool : rest).push_back(k);
    if (pool.size() >= 2) {
      MatchPlan sub = draw_pairing(pool, rng);
      for (const auto& pr : sub.pairs) plan.pairs.push_back(pr);
      rest.insert(rest.end(), sub.unmatched.begin(), sub.unmatched.end());
      std::sort(rest.begin(), rest.end());
      plan.unmatched = std::move(rest);
    }
  }
  return plan;
}

}  // namespace matchmarket
