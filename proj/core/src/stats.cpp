#include "matchmarket/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "matchmarket/errors.hpp"

namespace matchmarket {

StepStats summarize_step(const PopulationState& state, int n_max) {
  if (n_max < 2) throw ConfigError("summarize_step: n_max must be >= 2");
  const int n = state.n();
  StepStats st;
  st.step = state.step;
  st.moments.assign(n_max, 0.0);

  for (int k = 0; k < n; ++k) {
    double p = 1.0;
    for (int m = 0; m < n_max; ++m) {
      p *= state.utilities[k];
      st.moments[m] += p;
    }
  }
  for (double& m : st.moments) m /= n;

  st.mean_utility = st.moments[0];
  const double var = st.moments[1] - st.mean_utility * st.mean_utility;
  st.std_utility = std::sqrt(var > 0.0 ? var : 0.0);
  st.couple_share = static_cast<double>(state.couple_agent_count()) / n;
  st.single_share = static_cast<double>(n - state.couple_agent_count()) / n;
  st.married_share = static_cast<double>(state.married_agent_count()) / n;
  return st;
}

std::size_t Histogram::total() const {
  long long t = 0;
  for (const long long c : counts) t += c;
  return static_cast<std::size_t>(t);
}

double Histogram::density(std::size_t i) const {
  const std::size_t t = total();
  if (t == 0 || bin_width <= 0.0) return 0.0;
  return static_cast<double>(counts[i]) / (static_cast<double>(t) * bin_width);
}

Histogram histogram(std::span<const double> values, double bin_width, double origin) {
  if (!(bin_width > 0.0)) throw ConfigError("histogram: bin_width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  h.origin = origin;
  if (values.empty()) return h;

  long lo = 0, hi = 0;
  bool first = true;
  std::vector<long> idx(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const long b = static_cast<long>(std::floor((values[i] - origin) / bin_width));
    idx[i] = b;
    if (first) {
      lo = hi = b;
      first = false;
    } else {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  h.first_bin = lo;
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const long b : idx) ++h.counts[static_cast<std::size_t>(b - lo)];
  return h;
}

std::vector<int> cohort_select(const AffinityMatrix& a, double fraction, CohortDirection dir) {
  const int n = a.n();
  if (!(fraction > 0.0) || fraction > 1.0 || fraction * n < 1.0) {
    throw ConfigError("cohort_select: fraction*N must be at least 1");
  }
  const int take = static_cast<int>(std::ceil(fraction * n));
  const bool by_column = dir == CohortDirection::MostLiked || dir == CohortDirection::LeastLiked;
  const bool descending = dir == CohortDirection::MostLiked || dir == CohortDirection::MostLiking;

  // One pass per agent, parallel (the lazy backend regenerates N entries per
  // column or row).
  std::vector<double> score(n, 0.0);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int k = static_cast<int>(w); k < n; k += static_cast<int>(workers)) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j != k) s += by_column ? a.at(j, k) : a.at(k, j);
        }
        score[k] = s / (n - 1);
      }
    });
  }
  for (auto& t : pool) t.join();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (descending) {
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return score[x] != score[y] ? score[x] > score[y] : x < y;
    });
  } else {
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return score[x] != score[y] ? score[x] < score[y] : x < y;
    });
  }
  order.resize(take);
  std::sort(order.begin(), order.end());
  return order;
}

double adaptive_threshold(std::span<const double> history) {
  if (history.empty()) throw StateError("undefined threshold: empty utility history");
  double sum = 0.0, sum_sq = 0.0;
  for (const double u : history) {
    sum += u;
    sum_sq += u * u;
  }
  const double n = static_cast<double>(history.size());
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  return mean + std::sqrt(var > 0.0 ? var : 0.0);
}

double mean_utility_over(const PopulationState& state, std::span<const int> agents) {
  if (agents.empty()) throw StateError("mean_utility_over: empty agent set");
  double s = 0.0;
  for (const int k : agents) s += state.utilities[k];
  return s / static_cast<double>(agents.size());
}

}  // namespace matchmarket
