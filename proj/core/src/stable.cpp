#include "matchmarket/stable.hpp"

#include <algorithm>
#include <numeric>

#include "matchmarket/errors.hpp"
#include "matchmarket/population.hpp"

namespace matchmarket {

void BipartiteInstance::validate() const {
  if (affinity == nullptr) throw ConfigError("invalid instance: no affinity matrix");
  if (proposers.empty() || proposers.size() != reviewers.size()) {
    throw ConfigError("invalid instance: sides must be non-empty and equal in size");
  }
  std::vector<std::uint8_t> seen(affinity->n(), 0);
  for (const auto* side : {&proposers, &reviewers}) {
    for (const int k : *side) {
      if (k < 0 || k >= affinity->n() || seen[k]) {
        throw ConfigError("invalid instance: sides overlap or index out of range");
      }
      seen[k] = 1;
    }
  }
}

BipartiteInstance random_equal_split(const AffinityMatrix& a, RngStream& rng) {
  if (a.n() % 2 != 0) throw ConfigError("invalid instance: equal split needs even N");
  std::vector<int> order(a.n());
  std::iota(order.begin(), order.end(), 0);
  RngStream split_rng = rng.substream("bipartite-split");
  split_rng.shuffle(std::span<int>(order));
  BipartiteInstance inst;
  inst.affinity = &a;
  inst.proposers.assign(order.begin(), order.begin() + a.n() / 2);
  inst.reviewers.assign(order.begin() + a.n() / 2, order.end());
  return inst;
}

StableMatching gale_shapley(const BipartiteInstance& inst) {
  inst.validate();
  const AffinityMatrix& a = *inst.affinity;
  const int m = inst.side_size();

  // Preference lists: proposer p ranks reviewer slots by A(p, r) descending,
  // ties toward the lower reviewer agent index.
  std::vector<std::vector<int>> prefs(m);
  for (int p = 0; p < m; ++p) {
    auto& row = prefs[p];
    row.resize(m);
    std::iota(row.begin(), row.end(), 0);
    const int agent = inst.proposers[p];
    std::sort(row.begin(), row.end(), [&](int x, int y) {
      const double ux = a.at(agent, inst.reviewers[x]);
      const double uy = a.at(agent, inst.reviewers[y]);
      if (ux != uy) return ux > uy;
      return inst.reviewers[x] < inst.reviewers[y];
    });
  }

  std::vector<int> next_choice(m, 0);
  std::vector<int> holds(m, -1);  // reviewer slot -> proposer slot
  std::vector<int> free_stack(m);
  std::iota(free_stack.begin(), free_stack.end(), 0);

  StableMatching result;
  while (!free_stack.empty()) {
    const int p = free_stack.back();
    free_stack.pop_back();
    const int r = prefs[p][next_choice[p]++];
    ++result.proposals;
    const int cur = holds[r];
    if (cur < 0) {
      holds[r] = p;
      continue;
    }
    const int rev_agent = inst.reviewers[r];
    const double u_new = a.at(rev_agent, inst.proposers[p]);
    const double u_cur = a.at(rev_agent, inst.proposers[cur]);
    const bool accept =
        u_new > u_cur || (u_new == u_cur && inst.proposers[p] < inst.proposers[cur]);
    if (accept) {
      holds[r] = p;
      free_stack.push_back(cur);
    } else {
      free_stack.push_back(p);
    }
  }

  result.assignment.assign(m, -1);
  for (int r = 0; r < m; ++r) result.assignment[holds[r]] = r;

  double sum = 0.0;
  for (int p = 0; p < m; ++p) {
    const int r = result.assignment[p];
    sum += a.at(inst.proposers[p], inst.reviewers[r]);
    sum += a.at(inst.reviewers[r], inst.proposers[p]);
  }
  result.u_gs = sum / (2.0 * m);
  return result;
}

std::vector<BlockingPair> verify_stability(const BipartiteInstance& inst,
                                           std::span<const int> assignment) {
  inst.validate();
  const AffinityMatrix& a = *inst.affinity;
  const int m = inst.side_size();
  std::vector<int> reviewer_of(m, -1);
  for (int p = 0; p < m; ++p) {
    if (assignment[p] < 0 || assignment[p] >= m) throw StateError("assignment not total");
    reviewer_of[assignment[p]] = p;
  }
  for (int r = 0; r < m; ++r) {
    if (reviewer_of[r] < 0) throw StateError("assignment not injective");
  }

  std::vector<BlockingPair> blocking;
  for (int p = 0; p < m; ++p) {
    const int pr = assignment[p];
    const double u_p_cur = a.at(inst.proposers[p], inst.reviewers[pr]);
    for (int r = 0; r < m; ++r) {
      if (r == pr) continue;
      if (a.at(inst.proposers[p], inst.reviewers[r]) <= u_p_cur) continue;
      const int rp = reviewer_of[r];
      const double u_r_cur = a.at(inst.reviewers[r], inst.proposers[rp]);
      if (a.at(inst.reviewers[r], inst.proposers[p]) > u_r_cur) {
        blocking.push_back({p, r});
      }
    }
  }
  return blocking;
}

double matching_avg_utility(const AffinityMatrix& a, std::span<const int> partner) {
  double sum = 0.0;
  long long matched = 0;
  for (int k = 0; k < static_cast<int>(partner.size()); ++k) {
    if (partner[k] == kNoPartner) continue;
    sum += a.at(k, partner[k]);
    ++matched;
  }
  if (matched == 0) throw StateError("matching_avg_utility: no matched agents");
  return sum / static_cast<double>(matched);
}

}  // namespace matchmarket
