#pragma once

#include <span>
#include <vector>

#include "matchmarket/rational.hpp"

namespace matchmarket {

/// Dense polynomial with exact rational coefficients, monomial basis,
/// constant term first. Value type; arithmetic is exact.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const Rational& v) { return Poly({v}); }
  static Poly monomial(int k, const Rational& coeff);

  bool zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(int i) const;
  std::span<const Rational> coeffs() const { return c_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& s) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  /// Antiderivative with zero constant term.
  Poly antiderivative() const;
  Rational integral(const Rational& a, const Rational& b) const;
  /// Exact moment: integral of x^n * p(x) over [a, b].
  Rational moment(int n, const Rational& a, const Rational& b) const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void trim();
  std::vector<Rational> c_;
};

}  // namespace matchmarket
