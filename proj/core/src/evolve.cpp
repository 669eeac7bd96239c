#include "matchmarket/evolve.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "matchmarket/errors.hpp"

namespace matchmarket {

namespace {

void check_plan_matches_state(const PopulationState& state, const MatchPlan& plan) {
  const int n = state.n();
  std::vector<std::uint8_t> covered(n, 0);
  auto touch = [&](int k) {
    if (k < 0 || k >= n) throw StateError("inconsistent plan: agent index out of range");
    if (state.is_married(k)) {
      throw StateError("inconsistent plan: married agent " + std::to_string(k) + " in plan");
    }
    if (covered[k]) {
      throw StateError("inconsistent plan: agent " + std::to_string(k) + " appears twice");
    }
    covered[k] = 1;
  };
  for (const auto& [k, l] : plan.pairs) {
    if (k == l) throw StateError("inconsistent plan: self pair");
    touch(k);
    touch(l);
  }
  for (const int k : plan.unmatched) touch(k);
  for (int k = 0; k < n; ++k) {
    if (!state.is_married(k) && !covered[k]) {
      throw StateError("inconsistent plan: unmarried agent " + std::to_string(k) + " missing");
    }
  }
}

}  // namespace

PopulationState evolve_step(const PopulationState& state, const AffinityMatrix& a,
                            const MatchPlan& plan, const MarriagePolicy& policy,
                            std::span<const double> thresholds) {
  check_plan_matches_state(state, plan);
  const int n = state.n();

  // Phase 1: decide every pair on step-t utilities only.
  std::vector<std::uint8_t> in_new_couple(n, 0);
  std::vector<int> new_partner(n, kNoPartner);
  for (const auto& [k, l] : plan.pairs) {
    const double a_kl = a.at(k, l);
    const double a_lk = a.at(l, k);
    if (a_kl > state.utilities[k] && a_lk > state.utilities[l]) {
      in_new_couple[k] = in_new_couple[l] = 1;
      new_partner[k] = l;
      new_partner[l] = k;
    }
  }

  // Phase 2: apply new couples, dump abandoned partners, keep the rest.
  PopulationState next = state;
  next.step = state.step + 1;
  for (int k = 0; k < n; ++k) {
    if (in_new_couple[k]) {
      const int l = new_partner[k];
      next.partner[k] = l;
      next.utilities[k] = a.at(k, l);
      continue;
    }
    const int old = state.partner[k];
    if (old != kNoPartner && in_new_couple[old]) {
      next.partner[k] = kNoPartner;
      next.utilities[k] = a.at(k, k);
    }
    // otherwise unchanged: singles stay single, surviving couples persist
  }

  // Phase 3: marriage check on the updated couples.
  if (policy.kind != MarriageKind::None) {
    auto threshold_of = [&](int k) -> double {
      if (!thresholds.empty()) return thresholds[k];
      return policy.lambda;
    };
    for (int k = 0; k < n; ++k) {
      const int l = next.partner[k];
      if (l == kNoPartner || l < k || next.is_married(k)) continue;
      if (next.utilities[k] > threshold_of(k) && next.utilities[l] > threshold_of(l)) {
        next.married[k] = next.married[l] = 1;
      }
    }
  }
  return next;
}

namespace {

struct AdaptiveHistory {
  std::vector<long long> count;
  std::vector<double> sum;
  std::vector<double> sum_sq;

  explicit AdaptiveHistory(int n) : count(n, 0), sum(n, 0.0), sum_sq(n, 0.0) {}

  void absorb(const PopulationState& s) {
    for (int k = 0; k < s.n(); ++k) {
      ++count[k];
      sum[k] += s.utilities[k];
      sum_sq[k] += s.utilities[k] * s.utilities[k];
    }
  }

  void thresholds_into(std::vector<double>& out) const {
    for (std::size_t k = 0; k < count.size(); ++k) {
      if (count[k] < 2) {
        out[k] = std::numeric_limits<double>::infinity();
        continue;
      }
      const double m = sum[k] / static_cast<double>(count[k]);
      const double var = sum_sq[k] / static_cast<double>(count[k]) - m * m;
      out[k] = m + std::sqrt(var > 0.0 ? var : 0.0);
    }
  }
};

}  // namespace

void run_trajectory_observed(const AffinityMatrix& a, int steps, const MarriagePolicy& policy,
                             const std::optional<PartitionSpec>& partitions, RngStream rng,
                             const std::function<void(const PopulationState&)>& on_state) {
  if (steps < 1) throw ConfigError("trajectory needs at least 1 step");
  if (partitions) partitions->validate(a.n());

  RngStream pair_rng = rng.substream("pairing");

  std::vector<double> thresholds;
  bool use_thresholds = false;
  if (policy.kind == MarriageKind::HeterogeneousThreshold) {
    use_thresholds = true;
    if (policy.per_agent_lambda) {
      if (static_cast<int>(policy.per_agent_lambda->size()) != a.n()) {
        throw ConfigError("per-agent lambda array length != N");
      }
      thresholds = *policy.per_agent_lambda;
    } else {
      RngStream lam_rng = rng.substream("lambda-draw");
      thresholds.resize(a.n());
      for (double& t : thresholds) t = policy.lambda + policy.sigma_lambda * lam_rng.gaussian();
    }
  }

  PopulationState state = initial_state(a);
  on_state(state);

  AdaptiveHistory history(policy.kind == MarriageKind::AdaptiveProposal ? a.n() : 0);
  if (policy.kind == MarriageKind::AdaptiveProposal) {
    use_thresholds = true;
    thresholds.assign(a.n(), std::numeric_limits<double>::infinity());
    history.absorb(state);
  }

  for (int t = 0; t < steps; ++t) {
    if (policy.kind == MarriageKind::AdaptiveProposal) {
      history.thresholds_into(thresholds);
    }
    const std::vector<int> eligible = state.eligible_agents();
    const MatchPlan plan = partitions ? draw_partitioned_plan(*partitions, eligible, pair_rng)
                                      : draw_pairing(eligible, pair_rng);
    state = evolve_step(state, a, plan, policy,
                        use_thresholds ? std::span<const double>(thresholds)
                                       : std::span<const double>());
    state.check_invariants(a);
    if (policy.kind == MarriageKind::AdaptiveProposal) history.absorb(state);
    on_state(state);
  }
}

Trajectory run_trajectory(const AffinityMatrix& a, int steps, const MarriagePolicy& policy,
                          const std::optional<PartitionSpec>& partitions, RngStream rng) {
  Trajectory traj;
  traj.config.steps = steps;
  traj.config.policy = policy;
  traj.config.partitions = partitions;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  run_trajectory_observed(a, steps, policy, partitions, rng,
                          [&](const PopulationState& s) { traj.states.push_back(s); });
  return traj;
}

}  // namespace matchmarket
