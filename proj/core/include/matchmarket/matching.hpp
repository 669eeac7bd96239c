#pragma once

#include <span>
#include <utility>
#include <vector>

#include "matchmarket/rng.hpp"

namespace matchmarket {

/// One step's pairing over the eligible (unmarried) agents: disjoint pairs
/// plus the agents left out this step. pairs + unmatched covers the eligible
/// set exactly.
struct MatchPlan {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched;
};

/// Uniformly random perfect matching on `eligible` (a fixed-point-free
/// involution). With an odd count exactly one uniformly chosen agent sits the
/// step out. Callers pass `eligible` in a deterministic order so runs
/// reproduce.
MatchPlan draw_pairing(std::span<const int> eligible, RngStream& rng);

/// Two-sided society: groups partition the agents and matching happens only
/// across groups. An optional subset of one group may additionally pair
/// within its own group when left out of the cross matching.
struct PartitionSpec {
  std::vector<std::vector<int>> groups;
  bool cross_only = true;
  std::vector<int> bisexual_subset;

  /// Exactly two disjoint groups covering 0..n-1, bisexual_subset inside one
  /// group. Throws ConfigError otherwise.
  void validate(int n) const;

  /// Convenience: first `n0` agents vs the rest.
  static PartitionSpec two_groups(int n, int n0);
};

/// Each eligible agent of the smaller group is paired with a distinct
/// uniformly chosen agent of the larger group; leftover larger-group agents
/// are unmatched except that leftover members of bisexual_subset get one
/// extra uniform matching pass among themselves.
MatchPlan draw_partitioned_plan(const PartitionSpec& partitions, std::span<const int> eligible,
                                RngStream& rng);

}  // namespace matchmarket
