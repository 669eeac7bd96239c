#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "matchmarket/sweep.hpp"

namespace matchmarket {

/// One real-world cohort: share married by age, ages strictly increasing.
struct RealSeries {
  std::string cohort;
  std::vector<std::pair<double, double>> points;  // (age_years, share_married)
};

/// CSV schema `cohort,age_years,share_married`. Malformed rows and
/// out-of-range shares raise DataError naming the line.
std::vector<RealSeries> ingest_marriage_series(const std::filesystem::path& path);

struct CohortFit {
  std::string cohort;
  double lambda = 0.0;
  double slope = 0.0;      // years per step
  double intercept = 0.0;  // age at step 0
  double rmse = 0.0;
};

struct FitReport {
  std::vector<CohortFit> rows;
};

/// Grid search per cohort over the supplied lambda curves and affine
/// step <-> age maps (slope 0.1..2.0 step 0.05, intercept 10..25 step 0.5)
/// minimizing the RMSE between model and real shares. Curves are linearly
/// interpolated in t and clamped at the ends.
FitReport fit_model_to_series(std::span<const LambdaCurve> curves,
                              std::span<const RealSeries> series);

}  // namespace matchmarket
