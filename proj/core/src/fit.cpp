#include "matchmarket/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "matchmarket/errors.hpp"

namespace matchmarket {

std::vector<RealSeries> ingest_marriage_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path.string());

  std::vector<RealSeries> series;
  auto series_of = [&](const std::string& cohort) -> RealSeries& {
    for (auto& s : series) {
      if (s.cohort == cohort) return s;
    }
    series.push_back({cohort, {}});
    return series.back();
  };

  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != "cohort,age_years,share_married") {
        throw DataError("line 1: expected header 'cohort,age_years,share_married', got '" + line +
                        "'");
      }
      saw_header = true;
      continue;
    }
    std::istringstream row(line);
    std::string cohort, age_s, share_s;
    if (!std::getline(row, cohort, ',') || !std::getline(row, age_s, ',') ||
        !std::getline(row, share_s)) {
      throw DataError("line " + std::to_string(line_no) + ": expected 3 comma-separated fields");
    }
    double age = 0.0, share = 0.0;
    try {
      age = std::stod(age_s);
      share = std::stod(share_s);
    } catch (...) {
      throw DataError("line " + std::to_string(line_no) + ": non-numeric age or share");
    }
    if (share < 0.0 || share > 1.0) {
      throw DataError("line " + std::to_string(line_no) + ": share_married outside [0, 1]");
    }
    RealSeries& s = series_of(cohort);
    if (!s.points.empty() && age <= s.points.back().first) {
      throw DataError("line " + std::to_string(line_no) +
                      ": ages must be strictly increasing within cohort " + cohort);
    }
    s.points.emplace_back(age, share);
  }
  if (!saw_header) throw DataError("empty data file: " + path.string());
  return series;
}

namespace {

double curve_at(const LambdaCurve& c, double t) {
  if (c.married_share.empty()) return 0.0;
  const double t_max = static_cast<double>(c.married_share.size() - 1);
  const double tc = std::clamp(t, 0.0, t_max);
  const std::size_t i = static_cast<std::size_t>(std::floor(tc));
  if (i + 1 >= c.married_share.size()) return c.married_share.back();
  const double frac = tc - static_cast<double>(i);
  return c.married_share[i] * (1.0 - frac) + c.married_share[i + 1] * frac;
}

}  // namespace

FitReport fit_model_to_series(std::span<const LambdaCurve> curves,
                              std::span<const RealSeries> series) {
  if (curves.size() < 2) throw ConfigError("fit needs at least two lambda curves");
  for (const auto& s : series) {
    if (s.points.size() < 3) {
      throw DataError("degenerate series: cohort " + s.cohort + " has fewer than 3 points");
    }
  }

  FitReport report;
  for (const auto& s : series) {
    CohortFit best;
    best.cohort = s.cohort;
    best.rmse = std::numeric_limits<double>::infinity();
    for (const auto& curve : curves) {
      if (std::isinf(curve.lambda)) continue;  // no-marriage curve cannot fit shares
      for (int si = 0; si <= 38; ++si) {
        const double slope = 0.1 + 0.05 * si;
        for (int ii = 0; ii <= 30; ++ii) {
          const double intercept = 10.0 + 0.5 * ii;
          double sq = 0.0;
          for (const auto& [age, share] : s.points) {
            const double t = (age - intercept) / slope;
            const double model = curve_at(curve, t);
            sq += (model - share) * (model - share);
          }
          const double rmse = std::sqrt(sq / static_cast<double>(s.points.size()));
          if (rmse < best.rmse) {
            best.rmse = rmse;
            best.lambda = curve.lambda;
            best.slope = slope;
            best.intercept = intercept;
          }
        }
      }
    }
    report.rows.push_back(best);
  }
  return report;
}

}  // namespace matchmarket
