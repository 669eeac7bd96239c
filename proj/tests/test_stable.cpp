#include <doctest.h>

#include <cmath>

#include "matchmarket/errors.hpp"
#include "matchmarket/evolve.hpp"
#include "matchmarket/stable.hpp"
#include "matchmarket/stats.hpp"

using namespace matchmarket;

TEST_CASE("one-by-one instance pairs the only candidates") {
  const auto a = AffinityMatrix::from_values(2, {0, 1.5, -0.5, 0});
  BipartiteInstance inst;
  inst.affinity = &a;
  inst.proposers = {0};
  inst.reviewers = {1};
  const StableMatching m = gale_shapley(inst);
  CHECK(m.assignment == std::vector<int>({0}));
  CHECK(m.u_gs == doctest::Approx((1.5 - 0.5) / 2.0));
  CHECK(verify_stability(inst, m.assignment).empty());
}

TEST_CASE("two-by-two with aligned top choices is forced") {
  // proposers {0,1}, reviewers {2,3}; everyone's first choice is the
  // lower-indexed counterpart.
  std::vector<double> v(16, 0.0);
  auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * 4 + j]; };
  at(0, 2) = 2.0;
  at(0, 3) = 1.0;
  at(1, 2) = 2.0;
  at(1, 3) = 1.0;
  at(2, 0) = 2.0;
  at(2, 1) = 1.0;
  at(3, 0) = 2.0;
  at(3, 1) = 1.0;
  const auto a = AffinityMatrix::from_values(4, v);
  BipartiteInstance inst;
  inst.affinity = &a;
  inst.proposers = {0, 1};
  inst.reviewers = {2, 3};
  const StableMatching m = gale_shapley(inst);
  CHECK(m.assignment[0] == 0);  // (p0, r0)
  CHECK(m.assignment[1] == 1);  // (p1, r1)
  CHECK(verify_stability(inst, m.assignment).empty());
}

TEST_CASE("invalid instances are rejected") {
  const auto a = AffinityMatrix::from_values(4, std::vector<double>(16, 0.0));
  BipartiteInstance inst;
  inst.affinity = &a;
  inst.proposers = {0, 1};
  inst.reviewers = {2};
  CHECK_THROWS_AS(gale_shapley(inst), ConfigError);
  inst.reviewers = {1, 2};
  inst.proposers = {0, 1};
  CHECK_THROWS_AS(gale_shapley(inst), ConfigError);  // overlap
}

TEST_CASE("gale_shapley output is stable on random instances") {
  for (const int side : {2, 10, 50, 100}) {
    for (int rep = 0; rep < 3; ++rep) {
      RngStream rng(1000 + side * 10 + rep);
      const auto a = build_affinity(2 * side, DistributionSpec::gaussian(0, 1),
                                    DistributionSpec::gaussian(0, 1), rng);
      RngStream split_rng(500 + rep);
      const BipartiteInstance inst = random_equal_split(a, split_rng);
      const StableMatching m = gale_shapley(inst);
      CHECK(verify_stability(inst, m.assignment).empty());
      CHECK(m.proposals <= static_cast<long long>(side) * side);
    }
  }
}

TEST_CASE("a crafted identity assignment has the expected blocking pair") {
  // 3x3: proposer 0 and reviewer 1 rank each other on top while the identity
  // matching gives both their second choice.
  std::vector<double> v(36, 0.0);
  auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * 6 + j]; };
  // proposers 0,1,2; reviewers 3,4,5 (slot r = agent 3 + r)
  at(0, 3) = 1.0; at(0, 4) = 3.0; at(0, 5) = 0.5;   // p0 top: r1
  at(1, 3) = 1.0; at(1, 4) = 0.5; at(1, 5) = 2.0;
  at(2, 3) = 1.0; at(2, 4) = 0.5; at(2, 5) = 2.0;
  at(4, 0) = 3.0; at(4, 1) = 1.0; at(4, 2) = 0.5;   // r1 top: p0
  at(3, 0) = 1.0; at(3, 1) = 2.0; at(3, 2) = 0.5;
  at(5, 0) = 1.0; at(5, 1) = 0.5; at(5, 2) = 2.0;
  const auto a = AffinityMatrix::from_values(6, v);
  BipartiteInstance inst;
  inst.affinity = &a;
  inst.proposers = {0, 1, 2};
  inst.reviewers = {3, 4, 5};
  const std::vector<int> identity = {0, 1, 2};
  const auto blocking = verify_stability(inst, identity);
  bool found = false;
  for (const auto& bp : blocking) {
    if (bp.proposer_slot == 0 && bp.reviewer_slot == 1) found = true;
  }
  CHECK(found);
}

TEST_CASE("the stochastic model's final matching is unstable") {
  // N = 200 split 100/100, t = 100, no marriage: restrict to the matched
  // agents and scan every cross pair.
  RngStream rng(2024);
  const auto a = build_affinity(200, DistributionSpec::gaussian(0, 1),
                                DistributionSpec::gaussian(0, 1), rng);
  const PartitionSpec part = PartitionSpec::two_groups(200, 100);
  const Trajectory traj =
      run_trajectory(a, 100, MarriagePolicy::none(), part, RngStream(2024));
  const PopulationState& last = traj.states.back();

  BipartiteInstance inst;
  inst.affinity = &a;
  std::vector<int> assignment;
  for (int k = 0; k < 100; ++k) {
    if (last.partner[k] != kNoPartner) {
      inst.proposers.push_back(k);
      inst.reviewers.push_back(last.partner[k]);
      assignment.push_back(static_cast<int>(assignment.size()));
    }
  }
  REQUIRE(inst.proposers.size() > 10);
  CHECK_FALSE(verify_stability(inst, assignment).empty());
}

TEST_CASE("matching_avg_utility") {
  const auto a = AffinityMatrix::from_values(2, {0, 1.5, -0.5, 0});
  SUBCASE("single pair averages both directions") {
    const std::vector<int> partner = {1, 0};
    CHECK(matching_avg_utility(a, partner) == doctest::Approx(0.5));
  }
  SUBCASE("empty assignment raises") {
    const std::vector<int> partner = {kNoPartner, kNoPartner};
    CHECK_THROWS_AS(matching_avg_utility(a, partner), StateError);
  }
  SUBCASE("agrees with the coupled-agent mean of a trajectory snapshot") {
    RngStream rng(88);
    const auto big = build_affinity(300, DistributionSpec::gaussian(0, 1),
                                    DistributionSpec::gaussian(0, 1), rng);
    const Trajectory traj =
        run_trajectory(big, 10, MarriagePolicy::none(), std::nullopt, RngStream(88));
    const PopulationState& s = traj.states.back();
    std::vector<int> coupled;
    for (int k = 0; k < 300; ++k) {
      if (s.partner[k] != kNoPartner) coupled.push_back(k);
    }
    REQUIRE_FALSE(coupled.empty());
    CHECK(matching_avg_utility(big, s.partner) ==
          doctest::Approx(mean_utility_over(s, coupled)).epsilon(1e-12));
  }
}

TEST_CASE("u_gs replication: per-agent mean sits near 1.8, not the reference 4") {
  // 500/500 gaussian split. The reference ~4 is reproduced only as the
  // per-couple combined utility at ~1000 agents per side (see the acceptance
  // suite's criterion 6 report).
  double sum = 0.0;
  const int reps = 5;
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rng(3000 + rep);
    const auto a = build_affinity(1000, DistributionSpec::gaussian(0, 1),
                                  DistributionSpec::gaussian(0, 1), rng);
    RngStream split_rng(rep);
    const BipartiteInstance inst = random_equal_split(a, split_rng);
    const StableMatching m = gale_shapley(inst);
    CHECK(verify_stability(inst, m.assignment).empty());
    sum += m.u_gs;
  }
  const double mean = sum / reps;
  CHECK(mean > 1.6);
  CHECK(mean < 2.1);
}

TEST_CASE("proposer side does at least as well as the reviewer side on average") {
  double prop = 0.0, rev = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    RngStream rng(4000 + rep);
    const auto a = build_affinity(200, DistributionSpec::gaussian(0, 1),
                                  DistributionSpec::gaussian(0, 1), rng);
    RngStream split_rng(rep);
    const BipartiteInstance inst = random_equal_split(a, split_rng);
    const StableMatching m = gale_shapley(inst);
    for (int p = 0; p < inst.side_size(); ++p) {
      prop += a.at(inst.proposers[p], inst.reviewers[m.assignment[p]]);
      rev += a.at(inst.reviewers[m.assignment[p]], inst.proposers[p]);
    }
  }
  CHECK(prop > rev);  // directional sanity, averaged over instances
}
