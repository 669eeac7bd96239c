#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace matchmarket {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q" (or just "p" for integers), canonical lowest terms.
std::string fraction_string(const Rational& r);

/// Exact rational value of a double (every finite double is rational).
Rational rational_of(double x);

}  // namespace matchmarket
