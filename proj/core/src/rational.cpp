#include "matchmarket/rational.hpp"

#include <cmath>

#include "matchmarket/errors.hpp"

namespace matchmarket {

std::string fraction_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_of(double x) {
  if (!std::isfinite(x)) throw ConfigError("rational_of: value must be finite");
  return Rational(x);
}

}  // namespace matchmarket
