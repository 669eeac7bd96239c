// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion (plus the measured values).
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "matchmarket/analytic.hpp"
#include "matchmarket/evolve.hpp"
#include "matchmarket/stable.hpp"
#include "matchmarket/stats.hpp"

namespace mm = matchmarket;
namespace an = matchmarket::analytic;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

struct RunSummary {
  std::vector<mm::StepStats> steps;
};

RunSummary run_one(int n, int steps, const mm::DistributionSpec& spec,
                   const mm::MarriagePolicy& policy, std::uint64_t seed) {
  mm::RngStream rng(seed);
  const mm::AffinityMatrix a = mm::build_affinity(n, spec, spec, rng, mm::AffinityStorage::Lazy);
  RunSummary out;
  mm::run_trajectory_observed(a, steps, policy, std::nullopt, rng,
                              [&](const mm::PopulationState& s) {
                                out.steps.push_back(mm::summarize_step(s, 4));
                              });
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s2 = 0;
  for (const double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / (static_cast<double>(v.size()) - 1.0));
}

double se_of(const std::vector<double>& v) {
  return sd_of(v) / std::sqrt(static_cast<double>(v.size()));
}

double paired_t(const std::vector<double>& d) { return mean_of(d) / se_of(d); }

// ---------------------------------------------------------------- criteria

bool criterion1(std::string& note) {
  const RunSummary sim =
      run_one(10000, 1, mm::DistributionSpec::uniform(0, 1), mm::MarriagePolicy::none(), 2);
  const double share = sim.steps[1].couple_share;
  const bool sim_ok = std::abs(share - 0.25) <= 0.01;

  const an::ModelSpec model = an::ModelSpec::uniform(0, 1);
  const an::MomentState s1 = an::moment_step(an::initial_moment_state(model, 4), model, 4);
  const bool exact_ok = s1.b == mm::Rational(1, 4) && s1.r == mm::Rational(3, 4);

  std::ostringstream os;
  os << "couple_share(t=1)=" << share << " (target 0.25 +/- 0.01, seed 2); analytic b1="
     << mm::fraction_string(s1.b) << " r1=" << mm::fraction_string(s1.r);
  note = os.str();
  return sim_ok && exact_ok;
}

bool criterion2(std::string& note) {
  const int seeds = 20;
  std::vector<double> uni, gau;
  for (int s = 0; s < seeds; ++s) {
    uni.push_back(run_one(10000, 1, mm::DistributionSpec::uniform(0, 1),
                          mm::MarriagePolicy::none(), static_cast<std::uint64_t>(40 + s))
                      .steps[1]
                      .mean_utility);
    gau.push_back(run_one(10000, 1, mm::DistributionSpec::gaussian(0, 1),
                          mm::MarriagePolicy::none(), static_cast<std::uint64_t>(40 + s))
                      .steps[1]
                      .mean_utility);
  }
  const double uni_target = 1.0 / 3.0;
  const double gau_target = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  const double uni_gap = std::abs(mean_of(uni) - uni_target);
  const double gau_gap = std::abs(mean_of(gau) - gau_target);
  const bool ok = uni_gap <= 3.0 * se_of(uni) && gau_gap <= 3.0 * se_of(gau);
  std::ostringstream os;
  os << "uniform mean=" << mean_of(uni) << " vs sigma/3=" << uni_target << " (gap " << uni_gap
     << ", 3SE " << 3.0 * se_of(uni) << "); gaussian mean=" << mean_of(gau)
     << " vs sigma/(2 sqrt pi)=" << gau_target << " (gap " << gau_gap << ", 3SE "
     << 3.0 * se_of(gau) << "); 20 seeds";
  note = os.str();
  return ok;
}

bool criterion3(std::string& note) {
  const an::ModelSpec model = an::ModelSpec::uniform(0, 1);
  an::MomentState s = an::initial_moment_state(model, 6);
  s = an::moment_step(s, model, 6);
  s = an::moment_step(s, model, 6);
  const bool fractions_ok =
      s.b == mm::Rational(1861, 5184) && s.r == mm::Rational(3323, 5184);

  // Reconstruct both densities from their moment ladders (degree heuristic
  // degree = t = 2) and compare with the reference polynomials coefficient by
  // coefficient after clearing denominators.
  const an::Interval support{mm::Rational(-2), mm::Rational(2)};
  const an::PolyDensity pc2 = an::reconstruct_density(s.couple_moments, support, 2);
  const an::PolyDensity ps2 = an::reconstruct_density(s.single_moments, support, 2);
  const bool pc_ok = pc2.poly().coeff(0) == mm::Rational(13548, 59552) &&
                     pc2.poly().coeff(1) == mm::Rational(8784, 59552) &&
                     pc2.poly().coeff(2) == mm::Rational(1005, 59552);
  const bool ps_ok = ps2.poly().coeff(0) == mm::Rational(12932, 53168) &&
                     ps2.poly().coeff(1) == mm::Rational(3672, 53168) &&
                     ps2.poly().coeff(2) == mm::Rational(270, 53168);

  std::ostringstream os;
  os << "b2=" << mm::fraction_string(s.b) << " r2=" << mm::fraction_string(s.r)
     << "; p_c2 coeffs " << (pc_ok ? "match" : "MISMATCH") << ", p_s2 coeffs "
     << (ps_ok ? "match" : "MISMATCH") << " the reference polynomials";
  note = os.str();
  return fractions_ok && pc_ok && ps_ok;
}

struct MarriageBenefit {
  std::vector<double> no_marriage_u100;
  double t_mean_gauss = 0, t_var_gauss = 0, t_mean_uni = 0, t_var_uni = 0;
};

MarriageBenefit g_benefit;  // shared between criteria 4 and 5

bool criterion4(std::string& note) {
  const int seeds = 12;
  std::ostringstream os;
  bool ok = true;
  for (const bool gaussian : {true, false}) {
    const mm::DistributionSpec spec = gaussian ? mm::DistributionSpec::gaussian(0, 1)
                                               : mm::DistributionSpec::uniform(0, 1);
    std::vector<double> d_mean, d_var;
    for (int s = 0; s < seeds; ++s) {
      const std::uint64_t seed = static_cast<std::uint64_t>(1000 + s);
      const RunSummary married = run_one(10000, 100, spec, mm::MarriagePolicy::fixed(1.0), seed);
      const RunSummary none = run_one(10000, 100, spec, mm::MarriagePolicy::none(), seed);
      const auto& m = married.steps.back();
      const auto& n = none.steps.back();
      d_mean.push_back(m.mean_utility - n.mean_utility);
      d_var.push_back(n.std_utility * n.std_utility - m.std_utility * m.std_utility);
      if (gaussian) g_benefit.no_marriage_u100.push_back(n.mean_utility);
    }
    const double t_mean = paired_t(d_mean);
    const double t_var = paired_t(d_var);
    if (gaussian) {
      g_benefit.t_mean_gauss = t_mean;
      g_benefit.t_var_gauss = t_var;
    } else {
      g_benefit.t_mean_uni = t_mean;
      g_benefit.t_var_uni = t_var;
    }
    ok = ok && t_mean > 3.0 && t_var > 3.0;
    os << (gaussian ? "gaussian" : "uniform") << ": mean gain " << mean_of(d_mean)
       << " (t=" << t_mean << "), variance drop " << mean_of(d_var) << " (t=" << t_var << "); ";
  }
  os << seeds << " paired seeds, threshold t > 3";
  note = os.str();
  return ok;
}

bool criterion5(std::string& note) {
  const double u100 = mean_of(g_benefit.no_marriage_u100);
  std::ostringstream os;
  os << "gaussian u100=" << u100 << " over " << g_benefit.no_marriage_u100.size()
     << " seeds (target 1.27 +/- 0.1)";
  note = os.str();
  return std::abs(u100 - 1.27) <= 0.1;
}

bool criterion6(std::string& note) {
  // Clause A as specified: per-agent mean utility of the proposer-optimal
  // stable matching, Gaussian(0,1), N = 1000 split 500/500, >= 5 matrices,
  // within 4 +/- 0.5. Replication shows the per-agent value sits near 1.8;
  // the reference ~4 is the per-couple combined utility at ~1000 per side
  // (reported below). The clause is exercised as written and its failure is
  // expected and documented in the project notes.
  const int matrices = 5;
  std::vector<double> u_gs, couple_sum_500, couple_sum_1000;
  for (int i = 0; i < matrices; ++i) {
    mm::RngStream rng(static_cast<std::uint64_t>(7000 + i));
    const auto a = mm::build_affinity(1000, mm::DistributionSpec::gaussian(0, 1),
                                      mm::DistributionSpec::gaussian(0, 1), rng);
    mm::RngStream split_rng(static_cast<std::uint64_t>(i));
    const mm::BipartiteInstance inst = mm::random_equal_split(a, split_rng);
    const mm::StableMatching m = mm::gale_shapley(inst);
    u_gs.push_back(m.u_gs);
    couple_sum_500.push_back(2.0 * m.u_gs);
  }
  for (int i = 0; i < 3; ++i) {  // ~1000 agents per side
    mm::RngStream rng(static_cast<std::uint64_t>(7100 + i));
    const auto a = mm::build_affinity(2000, mm::DistributionSpec::gaussian(0, 1),
                                      mm::DistributionSpec::gaussian(0, 1), rng);
    mm::RngStream split_rng(static_cast<std::uint64_t>(i));
    const mm::BipartiteInstance inst = mm::random_equal_split(a, split_rng);
    couple_sum_1000.push_back(2.0 * mm::gale_shapley(inst).u_gs);
  }
  const double u_mean = mean_of(u_gs);
  const bool clause_a = std::abs(u_mean - 4.0) <= 0.5;

  // Clause B: u_GS beats the stochastic model at the same scale.
  std::vector<double> u100;
  for (int s = 0; s < 10; ++s) {
    u100.push_back(run_one(1000, 100, mm::DistributionSpec::gaussian(0, 1),
                           mm::MarriagePolicy::none(), static_cast<std::uint64_t>(7200 + s))
                       .steps.back()
                       .mean_utility);
  }
  const bool clause_b = u_mean > mean_of(u100);

  std::ostringstream os;
  os << "u_GS(per-agent, 500/500)=" << u_mean << " vs reference 4 +/- 0.5 -> "
     << (clause_a ? "ok" : "FAIL (expected: replication gives ~1.8; per-couple sum "
                           "reproduces the reference value: ")
     << mean_of(couple_sum_500) << " at side 500, " << mean_of(couple_sum_1000)
     << " at side 1000)";
  os << "; u_GS > u100(N=1000)=" << mean_of(u100) << " -> " << (clause_b ? "ok" : "FAIL");
  note = os.str();
  return clause_a && clause_b;
}

bool criterion7(std::string& note) {
  using mm::Rational;
  const bool exact_ok =
      an::stationary_moment_exact(1, Rational(-2), Rational(1)) == 1 &&
      an::stationary_moment_exact(1, Rational(1), Rational(1)) == Rational(43, 16);

  const an::ModelSpec model = an::ModelSpec::uniform(0, 1);
  bool sup_ok = true;
  double prev = an::stationary_moment(1, -2.0, model);
  for (const double lam : {-1.0, 0.0, 1.0, 1.5, 1.9, 1.99, 1.999}) {
    const double v = an::stationary_moment(1, lam, model);
    sup_ok = sup_ok && v > prev;
    prev = v;
  }
  sup_ok = sup_ok && std::abs(an::stationary_moment(1, 2.0 - 1e-7, model) - 4.0) < 1e-4;

  // Married-agents' histogram vs p_inf: uniform, lambda = 1, N = 10^4,
  // t = 100, 10 seeds pooled, 0.1 bins, sup-error <= 0.02.
  const an::StationaryDensity pinf(model, 1.0);
  std::vector<double> married;
  for (int s = 0; s < 10; ++s) {
    mm::RngStream rng(static_cast<std::uint64_t>(7500 + s));
    const auto a = mm::build_affinity(10000, mm::DistributionSpec::uniform(0, 1),
                                      mm::DistributionSpec::uniform(0, 1), rng,
                                      mm::AffinityStorage::Lazy);
    mm::PopulationState last;
    mm::run_trajectory_observed(a, 100, mm::MarriagePolicy::fixed(1.0), std::nullopt, rng,
                                [&](const mm::PopulationState& st) { last = st; });
    for (int k = 0; k < last.n(); ++k) {
      if (last.is_married(k)) married.push_back(last.utilities[k]);
    }
  }
  const mm::Histogram h = mm::histogram(married, 0.1, 1.0);
  double sup_density = 0.0, sup_mass = 0.0;
  for (std::size_t bin = 0; bin < h.counts.size(); ++bin) {
    const double lo = h.bin_lo(bin);
    double model_avg = 0.0;
    const int fine = 128;
    for (int j = 0; j < fine; ++j) model_avg += pinf(lo + (j + 0.5) * 0.1 / fine);
    model_avg /= fine;
    const double diff = std::abs(h.density(bin) - model_avg);
    sup_density = std::max(sup_density, diff);
    sup_mass = std::max(sup_mass, diff * 0.1);
  }
  const bool hist_ok = sup_density <= 0.02;

  std::ostringstream os;
  os << "E[U_inf](-2 sigma)=sigma exact: " << (exact_ok ? "ok" : "FAIL") << "; 43/16 at "
     << "lambda=sigma=1: " << (exact_ok ? "ok" : "FAIL") << "; sup->4 sigma: "
     << (sup_ok ? "ok" : "FAIL") << "; histogram sup-error=" << sup_density
     << " in density units (<= 0.02, " << married.size() << " married agents pooled)";
  if (!hist_ok) {
    os << " -> FAIL (expected: p_inf is an ansatz; the simulation runs ~+0.05 above "
          "it mid-range and ~-0.2 below its log spike in the top bin, far beyond the ~0.004 "
          "statistical error; as bin probability mass the sup-error is "
       << sup_mass << ")";
  }
  note = os.str();
  return exact_ok && sup_ok && hist_ok;
}

bool criterion8(std::string& note) {
  mm::RngStream rng(31415);
  const auto a = mm::build_affinity(10000, mm::DistributionSpec::gaussian(0, 1),
                                    mm::DistributionSpec::gaussian(0, 1), rng,
                                    mm::AffinityStorage::Lazy);
  const auto a2 = mm::affine_map(a, 2.0, 3.0);

  std::vector<mm::PopulationState> base, mapped;
  mm::run_trajectory_observed(a, 100, mm::MarriagePolicy::fixed(1.0), std::nullopt,
                              mm::RngStream(31415),
                              [&](const mm::PopulationState& s) { base.push_back(s); });
  mm::run_trajectory_observed(a2, 100, mm::MarriagePolicy::fixed(2.0 * 1.0 + 3.0), std::nullopt,
                              mm::RngStream(31415),
                              [&](const mm::PopulationState& s) { mapped.push_back(s); });

  bool partners_ok = true, married_ok = true;
  double max_rel = 0.0;
  for (std::size_t t = 0; t < base.size(); ++t) {
    partners_ok = partners_ok && base[t].partner == mapped[t].partner;
    married_ok = married_ok && base[t].married == mapped[t].married;
    for (int k = 0; k < base[t].n(); ++k) {
      const double expect = 2.0 * base[t].utilities[k] + 3.0;
      const double rel = std::abs(mapped[t].utilities[k] - expect) /
                         std::max(1.0, std::abs(expect));
      max_rel = std::max(max_rel, rel);
    }
  }
  std::ostringstream os;
  os << "partner sets " << (partners_ok ? "identical" : "DIFFER") << ", married sets "
     << (married_ok ? "identical" : "DIFFER") << ", max relative utility error " << max_rel
     << " (<= 1e-9), T=100, N=10^4";
  note = os.str();
  return partners_ok && married_ok && max_rel <= 1e-9;
}

// Brute-force transcription of the update rules (self-contained copy for the
// acceptance binary).
struct OracleState {
  std::vector<double> u;
  std::vector<int> partner;
  std::vector<std::uint8_t> married;
};

OracleState oracle_step(const OracleState& s, const mm::AffinityMatrix& a,
                        const mm::MatchPlan& plan, bool marry, double lambda) {
  const int n = static_cast<int>(s.u.size());
  std::map<int, int> match;
  for (const auto& [k, l] : plan.pairs) {
    match[k] = l;
    match[l] = k;
  }
  const auto forms = [&](int k, int l) { return a.at(k, l) > s.u[k] && a.at(l, k) > s.u[l]; };
  OracleState out = s;
  for (int k = 0; k < n; ++k) {
    if (match.count(k) && forms(k, match.at(k))) {
      out.u[k] = a.at(k, match.at(k));
      out.partner[k] = match.at(k);
      continue;
    }
    const int m = s.partner[k];
    if (m != mm::kNoPartner && match.count(m) && forms(m, match.at(m))) {
      out.u[k] = a.at(k, k);
      out.partner[k] = mm::kNoPartner;
    }
  }
  if (marry) {
    for (int k = 0; k < n; ++k) {
      const int l = out.partner[k];
      if (l != mm::kNoPartner && out.u[k] > lambda && out.u[l] > lambda) out.married[k] = 1;
    }
  }
  return out;
}

bool criterion9(std::string& note) {
  const an::ModelSpec model = an::ModelSpec::uniform(0, 1);
  an::MomentState s = an::initial_moment_state(model, 4);
  bool conservation_ok = true;
  for (int t = 1; t <= 6; ++t) {
    s = an::moment_step(s, model, 4);
    conservation_ok = conservation_ok && (s.b + s.r == 1);
    for (int n = 0; n <= 4; ++n) {
      const auto i = static_cast<std::size_t>(n);
      conservation_ok = conservation_ok &&
                        s.population_moments[i] ==
                            s.b * s.couple_moments[i] + s.r * s.single_moments[i];
    }
  }

  mm::RngStream meta(271828);
  int checked = 0;
  bool sim_ok = true;
  for (int trial = 0; trial < 1000 && sim_ok; ++trial) {
    const int n = 2 + static_cast<int>(meta.next_below(5));
    const int steps = 1 + static_cast<int>(meta.next_below(3));
    const bool marry = meta.next_below(2) == 0;
    const double lambda = -1.0 + static_cast<double>(meta.next_below(3));
    const auto a = mm::build_affinity(n, mm::DistributionSpec::gaussian(0, 1),
                                      mm::DistributionSpec::gaussian(0, 1),
                                      mm::RngStream(meta.next()));
    mm::RngStream pair_rng = mm::RngStream(meta.next()).substream("pairing");
    mm::PopulationState st = mm::initial_state(a);
    OracleState o{st.utilities, st.partner, st.married};
    const mm::MarriagePolicy policy =
        marry ? mm::MarriagePolicy::fixed(lambda) : mm::MarriagePolicy::none();
    for (int t = 0; t < steps; ++t) {
      const auto eligible = st.eligible_agents();
      if (eligible.empty()) break;
      const mm::MatchPlan plan = mm::draw_pairing(eligible, pair_rng);
      const mm::PopulationState prev = st;
      st = mm::evolve_step(st, a, plan, policy);
      o = oracle_step(o, a, plan, marry, lambda);
      st.check_invariants(a);
      sim_ok = sim_ok && st.utilities == o.u && st.partner == o.partner && st.married == o.married;
      for (int k = 0; k < n && sim_ok; ++k) {
        if (prev.is_married(k)) sim_ok = sim_ok && st.is_married(k);
        if (st.partner[k] != mm::kNoPartner && st.partner[k] != prev.partner[k]) {
          sim_ok = sim_ok && st.utilities[k] > prev.utilities[k];
        }
      }
    }
    ++checked;
  }
  std::ostringstream os;
  os << "b_t + r_t = 1 and mixture identity exact through t=6: "
     << (conservation_ok ? "ok" : "FAIL") << "; " << checked
     << " randomized small instances vs brute-force oracle: " << (sim_ok ? "ok" : "FAIL");
  note = os.str();
  return conservation_ok && sim_ok;
}

bool criterion10(std::string& note) {
  const std::vector<double> lambdas = {1.5, 1.0, 0.5, 0.0, -2.0};
  const int seeds = 12;
  const int steps = 100;
  std::map<double, std::vector<double>> avg;  // lambda -> married share by t
  std::vector<double> cross_gap_t100;         // per-seed share(-2) - share(0) at t=100
  std::map<double, std::vector<double>> last_share_by_seed;
  for (const double lam : lambdas) {
    avg[lam].assign(static_cast<std::size_t>(steps) + 1, 0.0);
    for (int s = 0; s < seeds; ++s) {
      const RunSummary run = run_one(10000, steps, mm::DistributionSpec::gaussian(0, 1),
                                     mm::MarriagePolicy::fixed(lam),
                                     static_cast<std::uint64_t>(8000 + s));
      for (int t = 0; t <= steps; ++t) {
        avg[lam][static_cast<std::size_t>(t)] +=
            run.steps[static_cast<std::size_t>(t)].married_share / seeds;
      }
      last_share_by_seed[lam].push_back(run.steps.back().married_share);
    }
  }
  for (int s = 0; s < seeds; ++s) {
    cross_gap_t100.push_back(last_share_by_seed[-2.0][static_cast<std::size_t>(s)] -
                             last_share_by_seed[0.0][static_cast<std::size_t>(s)]);
  }
  bool ordered = true;
  int first_violation = -1;
  for (int t = 10; t <= steps; ++t) {
    for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
      if (!(avg[lambdas[i]][static_cast<std::size_t>(t)] <
            avg[lambdas[i + 1]][static_cast<std::size_t>(t)])) {
        ordered = false;
        if (first_violation < 0) first_violation = t;
      }
    }
  }
  std::ostringstream os;
  os << "seed-averaged married-share curves strictly ordered by lambda for all t >= 10";
  if (!ordered) {
    os << " -> FAIL (expected: genuine crossing, not noise: the lambda=-2 curve leads early "
          "but the lambda=0 society overtakes it near t~55; paired gap share(-2)-share(0) at "
          "t=100 = "
       << mean_of(cross_gap_t100) << " +/- " << se_of(cross_gap_t100)
       << ", first violation at t=" << first_violation
       << "; marrying the first acceptable partner strands more agents long-run)";
  }
  os << " (shares at t=100:";
  for (const double lam : lambdas) os << " " << avg[lam][steps];
  os << ")";
  note = os.str();
  return ordered;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "First-step fractions", 1.0, criterion1},
      {2, "First-step means", 30.0, criterion2},
      {3, "Second-step exactness", 10.0, criterion3},
      {4, "Marriage benefit", 600.0, criterion4},
      {5, "No-marriage level", 600.0, criterion5},
      {6, "Stable-matching gap", 60.0, criterion6},
      {7, "Asymptotic formulas", 120.0, criterion7},
      {8, "Dictionary invariance", 60.0, criterion8},
      {9, "Conservation and consistency", 60.0, criterion9},
      {10, "Married-share ordering", 300.0, criterion10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= c.budget_seconds;
    if (!in_budget) detail += " [OVER BUDGET " + std::to_string(c.budget_seconds) + "s]";
    const bool pass = ok && in_budget;
    if (!pass) ++failures;
    std::printf("%s criterion %2d (%s, %.1fs): %s\n", pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), seconds, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
