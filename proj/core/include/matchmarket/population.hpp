#pragma once

#include <cstdint>
#include <vector>

#include "matchmarket/affinity.hpp"

namespace matchmarket {

constexpr int kNoPartner = -1;

/// One snapshot of the society. partner is a mutual assignment (involution on
/// its domain); married agents are a subset of partnered agents, monotone
/// non-decreasing across steps. An agent's utility is A(k, partner[k]) when
/// partnered and A(k, k) when single.
struct PopulationState {
  std::vector<double> utilities;
  std::vector<int> partner;            // kNoPartner when single
  std::vector<std::uint8_t> married;   // membership flags for the married set
  int step = 0;

  int n() const noexcept { return static_cast<int>(utilities.size()); }
  bool is_single(int k) const noexcept { return partner[k] == kNoPartner; }
  bool is_married(int k) const noexcept { return married[k] != 0; }

  int couple_agent_count() const noexcept;
  int married_agent_count() const noexcept;

  /// Unmarried agent indices, ascending.
  std::vector<int> eligible_agents() const;

  /// Enforces the structural invariants (partner involution, married pairs,
  /// utility consistency against A). Throws StateError with the offending
  /// agent named.
  void check_invariants(const AffinityMatrix& a) const;
};

/// All agents single with u0[k] = A(k, k).
PopulationState initial_state(const AffinityMatrix& a);

}  // namespace matchmarket
