#pragma once

#include <span>
#include <vector>

#include "matchmarket/affinity.hpp"
#include "matchmarket/rng.hpp"

namespace matchmarket {

/// Two equal disjoint sides drawing preferences from the affinity matrix
/// restricted to cross pairs.
struct BipartiteInstance {
  std::vector<int> proposers;
  std::vector<int> reviewers;
  const AffinityMatrix* affinity = nullptr;

  int side_size() const { return static_cast<int>(proposers.size()); }
  /// Throws ConfigError on unequal or overlapping sides.
  void validate() const;
};

/// Seeded uniform random equal bipartition of all N agents (N even).
BipartiteInstance random_equal_split(const AffinityMatrix& a, RngStream& rng);

struct StableMatching {
  std::vector<int> assignment;  // proposer slot -> reviewer slot
  double u_gs = 0.0;            // mean utility over all matched agents, both sides
  long long proposals = 0;
};

/// Proposer-optimal deferred acceptance. Real-valued preferences are strict
/// up to ties, which break toward the lower agent index. Terminates within
/// |P|^2 proposals.
StableMatching gale_shapley(const BipartiteInstance& inst);

struct BlockingPair {
  int proposer_slot = 0;
  int reviewer_slot = 0;
};

/// Exhaustive scan for cross pairs that strictly prefer each other to their
/// assigned partners. Empty for any stable matching.
std::vector<BlockingPair> verify_stability(const BipartiteInstance& inst,
                                           std::span<const int> assignment);

/// Mean of A(k, partner[k]) over all matched agents (both directions count).
/// Throws StateError when nobody is matched.
double matching_avg_utility(const AffinityMatrix& a, std::span<const int> partner);

}  // namespace matchmarket
