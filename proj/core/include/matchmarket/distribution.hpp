#pragma once

#include <cstdint>
#include <string>

#include "matchmarket/rng.hpp"

namespace matchmarket {

enum class DistFamily { Gaussian, Uniform, PointMass };

/// Law generating affinity entries. `sigma` is the model's scale parameter:
/// Gaussian(mu, sigma) has standard deviation sigma, while Uniform(mu, sigma)
/// denotes support [mu - 2*sigma, mu + 2*sigma] (standard deviation
/// 2*sigma/sqrt(3)); U(-2, 2) is Uniform(0, 1). PointMass(v) is the formal
/// sigma -> 0 limit used for the zero-diagonal variant.
struct DistributionSpec {
  DistFamily family = DistFamily::Gaussian;
  double mu = 0.0;
  double sigma = 1.0;

  static DistributionSpec gaussian(double mu, double sigma) {
    return {DistFamily::Gaussian, mu, sigma};
  }
  static DistributionSpec uniform(double mu, double sigma) {
    return {DistFamily::Uniform, mu, sigma};
  }
  static DistributionSpec point_mass(double v) { return {DistFamily::PointMass, v, 0.0}; }

  /// Throws ConfigError on negative sigma or non-finite parameters.
  void validate() const;

  double support_lo() const;
  double support_hi() const;

  /// Deterministic draw from two raw words.
  double sample(std::uint64_t w0, std::uint64_t w1) const;

  /// Spec after the affine map x -> scale*x + shift.
  DistributionSpec affine(double scale, double shift) const {
    DistributionSpec s = *this;
    s.sigma = scale * sigma;
    s.mu = scale * mu + shift;
    return s;
  }

  double mean() const { return mu; }
  double stddev() const;

  std::string describe() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

}  // namespace matchmarket
