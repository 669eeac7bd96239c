#include "matchmarket/distribution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "matchmarket/errors.hpp"

namespace matchmarket {

void DistributionSpec::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma)) {
    throw ConfigError("invalid spec: distribution parameters must be finite");
  }
  if (sigma < 0.0) {
    throw ConfigError("invalid spec: sigma must be non-negative, got " + std::to_string(sigma));
  }
}

double DistributionSpec::support_lo() const {
  switch (family) {
    case DistFamily::Gaussian:
      return -std::numeric_limits<double>::infinity();
    case DistFamily::Uniform:
      return mu - 2.0 * sigma;
    case DistFamily::PointMass:
      return mu;
  }
  return 0.0;
}

double DistributionSpec::support_hi() const {
  switch (family) {
    case DistFamily::Gaussian:
      return std::numeric_limits<double>::infinity();
    case DistFamily::Uniform:
      return mu + 2.0 * sigma;
    case DistFamily::PointMass:
      return mu;
  }
  return 0.0;
}

double DistributionSpec::sample(std::uint64_t w0, std::uint64_t w1) const {
  switch (family) {
    case DistFamily::Gaussian:
      return mu + sigma * gaussian_from_words(w0, w1);
    case DistFamily::Uniform:
      return (mu - 2.0 * sigma) + to_unit01(w0) * (4.0 * sigma);
    case DistFamily::PointMass:
      return mu;
  }
  return mu;
}

double DistributionSpec::stddev() const {
  switch (family) {
    case DistFamily::Gaussian:
      return sigma;
    case DistFamily::Uniform:
      return 2.0 * sigma / std::sqrt(3.0);
    case DistFamily::PointMass:
      return 0.0;
  }
  return 0.0;
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  switch (family) {
    case DistFamily::Gaussian:
      os << "gaussian(" << mu << "," << sigma << ")";
      break;
    case DistFamily::Uniform:
      os << "uniform(" << mu << "," << sigma << ")";
      break;
    case DistFamily::PointMass:
      os << "pointmass(" << mu << ")";
      break;
  }
  return os.str();
}

}  // namespace matchmarket
