#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "matchmarket/affinity.hpp"
#include "matchmarket/matching.hpp"
#include "matchmarket/policy.hpp"
#include "matchmarket/population.hpp"

namespace matchmarket {

/// Synchronous one-step update. All acceptance decisions read step-t
/// utilities; there are no within-step cascades.
///  Phase 1: a matched pair (k, l) becomes a new couple iff
///           A_kl > u_t[k] and A_lk > u_t[l] (strict).
///  Phase 2: an agent not in a new couple whose step-t partner entered one
///           becomes single with utility A_kk; everyone else keeps state.
///  Phase 3: with an active policy, every couple whose two utilities strictly
///           exceed their thresholds joins the married set (including couples
///           formed this very step and pre-existing ones).
///
/// `thresholds`, when non-empty, supplies the resolved per-agent thresholds
/// for this step (heterogeneous draws or adaptive running statistics);
/// otherwise the policy's scalar lambda applies. The plan must cover exactly
/// the unmarried agents of `state` or a StateError is thrown.
PopulationState evolve_step(const PopulationState& state, const AffinityMatrix& a,
                            const MatchPlan& plan, const MarriagePolicy& policy,
                            std::span<const double> thresholds = {});

struct TrajectoryConfig {
  int steps = 0;
  MarriagePolicy policy;
  std::optional<PartitionSpec> partitions;
  std::uint64_t seed = 0;
};

struct Trajectory {
  std::vector<PopulationState> states;  // t = 0..T
  TrajectoryConfig config;
};

/// Run T steps from the all-singles state, drawing a fresh plan each step
/// (married agents excluded). Invariants are checked after every step.
Trajectory run_trajectory(const AffinityMatrix& a, int steps, const MarriagePolicy& policy,
                          const std::optional<PartitionSpec>& partitions, RngStream rng);

/// Streaming variant: states are handed to `on_state` (including t = 0) and
/// not retained. The sweep runner uses this to keep memory flat.
void run_trajectory_observed(const AffinityMatrix& a, int steps, const MarriagePolicy& policy,
                             const std::optional<PartitionSpec>& partitions, RngStream rng,
                             const std::function<void(const PopulationState&)>& on_state);

}  // namespace matchmarket
