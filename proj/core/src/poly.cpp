#include "matchmarket/poly.hpp"

#include <algorithm>

#include "matchmarket/errors.hpp"

namespace matchmarket {

namespace {
const Rational kZero{0};
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monomial(int k, const Rational& coeff) {
  if (k < 0) throw ConfigError("poly: negative monomial degree");
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1, Rational(0));
  c.back() = coeff;
  return Poly(std::move(c));
}

const Rational& Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return kZero;
  return c_[static_cast<std::size_t>(i)];
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> c(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const {
  std::vector<Rational> c(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] -= o.c_[i];
  return Poly(std::move(c));
}

Poly Poly::operator*(const Poly& o) const {
  if (zero() || o.zero()) return {};
  std::vector<Rational> c(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  }
  return Poly(std::move(c));
}

Poly Poly::operator*(const Rational& s) const {
  std::vector<Rational> c = c_;
  for (auto& v : c) v *= s;
  return Poly(std::move(c));
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc{0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Poly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

Poly Poly::antiderivative() const {
  if (zero()) return {};
  std::vector<Rational> c(c_.size() + 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) c[i + 1] = c_[i] / Rational(i + 1);
  return Poly(std::move(c));
}

Rational Poly::integral(const Rational& a, const Rational& b) const {
  const Poly f = antiderivative();
  return f(b) - f(a);
}

Rational Poly::moment(int n, const Rational& a, const Rational& b) const {
  if (n < 0) throw ConfigError("poly: negative moment order");
  return (Poly::monomial(n, Rational(1)) * *this).integral(a, b);
}

}  // namespace matchmarket
