#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "matchmarket/affinity.hpp"
#include "matchmarket/population.hpp"

namespace matchmarket {

/// Per-step aggregates over the whole population (married agents included).
/// moments[i] holds E[U_t^(i+1)]; couple_share + single_share = 1 exactly
/// over counts.
struct StepStats {
  int step = 0;
  double mean_utility = 0.0;
  double std_utility = 0.0;
  std::vector<double> moments;
  double couple_share = 0.0;
  double single_share = 0.0;
  double married_share = 0.0;
  std::vector<std::pair<std::string, double>> cohort_means;
};

/// Exact sample statistics over all N agents. n_max >= 2.
StepStats summarize_step(const PopulationState& state, int n_max);

/// Fixed-width binning anchored at `origin`; bins are [lo, lo + width).
/// Bin indices may be negative relative to the origin; `first_bin` is the
/// lowest occupied index.
struct Histogram {
  double bin_width = 0.0;
  double origin = 0.0;
  long first_bin = 0;
  std::vector<long long> counts;
  bool normalized = false;

  std::size_t total() const;
  double bin_lo(std::size_t i) const { return origin + (first_bin + static_cast<long>(i)) * bin_width; }
  /// Height as a probability density (count / (total * width)).
  double density(std::size_t i) const;
};

Histogram histogram(std::span<const double> values, double bin_width, double origin);

/// MostLiked/LeastLiked rank agents by the column mean of A (how much the
/// rest of society likes them); MostLiking/LeastLiking by the row mean (how
/// much they like the rest). Column means are the default analysis.
enum class CohortDirection { MostLiked, LeastLiked, MostLiking, LeastLiking };

/// The ceil(fraction*N) agents at the top (resp. bottom) of the direction's
/// ranking. Ties break toward the lower agent index.
std::vector<int> cohort_select(const AffinityMatrix& a, double fraction, CohortDirection dir);

/// mean(history) + population-std(history). The caller proposes marriage iff
/// the candidate utility strictly exceeds the returned value. Throws
/// StateError on an empty history.
double adaptive_threshold(std::span<const double> history);

double mean_utility_over(const PopulationState& state, std::span<const int> agents);

}  // namespace matchmarket
