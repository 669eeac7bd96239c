#include <cmath>
#include <numbers>

#include "matchmarket/analytic.hpp"
#include "matchmarket/errors.hpp"
#include "matchmarket/quadrature.hpp"

namespace matchmarket::analytic {

namespace {

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

/// P(X > x) under the entry law, with Theta(0) = 0 at point masses.
double tail_above(const DistributionSpec& s, double x) {
  switch (s.family) {
    case DistFamily::Gaussian:
      return std_normal_tail((x - s.mu) / s.sigma);
    case DistFamily::Uniform: {
      const double lo = s.support_lo(), hi = s.support_hi();
      if (x <= lo) return 1.0;
      if (x >= hi) return 0.0;
      return (hi - x) / (hi - lo);
    }
    case DistFamily::PointMass:
      return s.mu > x ? 1.0 : 0.0;
  }
  return 0.0;
}

/// I_k(z) = integral of z'^k phi(z') over (z, inf); stable upward recursion.
double std_normal_upper_moment(int k, double z) {
  if (k == 0) return std_normal_tail(z);
  if (k == 1) return std_normal_pdf(z);
  return std::pow(z, k - 1) * std_normal_pdf(z) + (k - 1) * std_normal_upper_moment(k - 2, z);
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

/// Q_n(x) = integral of u^n p_A(u) over (x, inf).
double upper_moment(const DistributionSpec& s, int n, double x) {
  switch (s.family) {
    case DistFamily::Gaussian: {
      const double z = (x - s.mu) / s.sigma;
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) {
        acc += binom(n, k) * std::pow(s.mu, n - k) * std::pow(s.sigma, k) *
               std_normal_upper_moment(k, z);
      }
      return acc;
    }
    case DistFamily::Uniform: {
      const double lo = s.support_lo(), hi = s.support_hi();
      const double from = std::min(std::max(x, lo), hi);
      return (std::pow(hi, n + 1) - std::pow(from, n + 1)) / ((n + 1) * (hi - lo));
    }
    case DistFamily::PointMass:
      return std::pow(s.mu, n) * tail_above(s, x);
  }
  return 0.0;
}

/// E[g(X)] for X ~ s, by closed form or adaptive quadrature.
double expect_over(const DistributionSpec& s, const std::function<double(double)>& g) {
  switch (s.family) {
    case DistFamily::PointMass:
      return g(s.mu);
    case DistFamily::Uniform: {
      const double lo = s.support_lo(), hi = s.support_hi();
      const double w = hi - lo;
      return integrate([&](double u) { return g(u) / w; }, lo, hi, 1e-12);
    }
    case DistFamily::Gaussian: {
      const double lo = s.mu - 12.0 * s.sigma, hi = s.mu + 12.0 * s.sigma;
      return integrate(
          [&](double u) {
            const double z = (u - s.mu) / s.sigma;
            return g(u) * std_normal_pdf(z) / s.sigma;
          },
          lo, hi, 1e-12);
    }
  }
  return 0.0;
}

}  // namespace

FirstStepMoments first_step_moments(const ModelSpec& model, int n_max) {
  if (n_max < 1) throw ConfigError("first_step_moments: n_max must be >= 1");
  model.p_a.validate();
  model.p0.validate();
  const DistributionSpec& pa = model.p_a;
  const DistributionSpec& p0 = model.p0;

  // Both partners of a first-step match are singles drawn from U_0.
  const double like = expect_over(p0, [&](double k) { return tail_above(pa, k); });

  FirstStepMoments out;
  out.b1 = like * like;
  out.r1 = 1.0 - out.b1;
  out.couple.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  out.single.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  out.population.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  out.couple[0] = out.single[0] = out.population[0] = 1.0;

  for (int n = 1; n <= n_max; ++n) {
    const double c_mass =
        expect_over(p0, [&](double k) { return upper_moment(pa, n, k); }) * like;
    const double stay_term = expect_over(
        p0, [&](double k) { return std::pow(k, n) * (1.0 - tail_above(pa, k)); });
    const double keep_term = expect_over(p0, [&](double k) { return std::pow(k, n); });
    const double s_mass = stay_term * like + keep_term * (1.0 - like);
    out.couple[static_cast<std::size_t>(n)] = out.b1 > 0.0 ? c_mass / out.b1 : 0.0;
    out.single[static_cast<std::size_t>(n)] = out.r1 > 0.0 ? s_mass / out.r1 : 0.0;
    out.population[static_cast<std::size_t>(n)] = c_mass + s_mass;
  }
  return out;
}

StationaryDensity::StationaryDensity(ModelSpec model, double lambda)
    : model_(std::move(model)), lambda_(lambda) {
  model_.p0.validate();
  if (model_.p0.family == DistFamily::PointMass) {
    throw ConfigError("stationary density needs a continuous single-utility law");
  }
  if (!(lambda_ < model_.p0.support_hi())) {
    throw ConfigError("no marriage possible: lambda at or above the upper support bound");
  }
}

double StationaryDensity::support_lo() const {
  return std::max(lambda_, model_.p0.support_lo());
}

double StationaryDensity::support_hi() const { return model_.p0.support_hi(); }

double StationaryDensity::operator()(double u) const {
  if (!(u > lambda_)) return 0.0;  // Theta(0) = 0
  const DistributionSpec& p0 = model_.p0;
  if (p0.family == DistFamily::Uniform) {
    const double lo = p0.support_lo(), hi = p0.support_hi();
    const double leff = std::max(lambda_, lo);
    if (u <= leff || u >= hi) return 0.0;
    const double p0v = 1.0 / (hi - lo);
    return p0v * (std::log((hi - leff) / (hi - u)) + (leff - lo) / (hi - leff));
  }
  // Generic law: direct quadrature of the ansatz.
  const double lo = std::max(lambda_, p0.mu - 12.0 * p0.sigma);
  if (u <= lo) return 0.0;
  auto pdf = [&](double x) {
    const double z = (x - p0.mu) / p0.sigma;
    return std_normal_pdf(z) / p0.sigma;
  };
  const double inner = integrate(
      [&](double x) { return pdf(x) / std::max(tail_above(p0, x), 1e-300); }, lo, u, 1e-11);
  const double head = 1.0 - tail_above(p0, lambda_);
  const double tail_l = tail_above(p0, lambda_);
  return pdf(u) * (inner + head / tail_l);
}

StationaryDensity stationary_married_density(const ModelSpec& model, double lambda) {
  return StationaryDensity(model, lambda);
}

Rational stationary_moment_exact(int n, const Rational& lambda, const Rational& sigma) {
  if (n < 0) throw ConfigError("stationary moment: negative order");
  if (sigma <= 0) throw ConfigError("stationary moment: sigma must be positive");
  const Rational ts = Rational(2) * sigma;
  if (lambda >= ts) throw ConfigError("no marriage possible: lambda at or above 2*sigma");
  if (n == 0) return 1;  // normalization

  // Reference closed form: bracket = H_{n+1} + ln(1 - x) + B_x(n+2, 0) with the
  // logarithms cancelled exactly, x = lambda / (2*sigma).
  const Rational x = lambda / ts;
  Rational bracket{0};
  Rational x_pow{1};
  for (int m = 1; m <= n + 1; ++m) {
    x_pow *= x;
    bracket += (Rational(1) - x_pow) / Rational(m);
  }
  Rational ts_n{1};
  for (int i = 0; i < n; ++i) ts_n *= ts;
  Rational lam_n1{1};
  for (int i = 0; i < n + 1; ++i) lam_n1 *= lambda;

  const Rational term1 = ts_n / (Rational(2) * Rational(n + 1)) * bracket;
  const Rational term2 =
      (lambda + ts) / (ts - lambda) * (ts_n * ts - lam_n1) / (ts * Rational(n + 1));
  return term1 + term2;
}

double stationary_density_moment(int n, double lambda, const ModelSpec& model) {
  if (n < 0) throw ConfigError("stationary moment: negative order");
  const StationaryDensity d(model, lambda);
  const DistributionSpec& p0 = model.p0;

  if (p0.family == DistFamily::Uniform) {
    // The log end is regulated: integrate to hi - eps*(hi - lo)/2 and
    // extrapolate eps -> 0 against the basis {1, eps, eps*ln(eps)}.
    const double lo = d.support_lo(), hi = d.support_hi();
    const double span = p0.support_hi() - p0.support_lo();
    const double eps[3] = {1e-4, 5e-5, 2.5e-5};
    double m[3];
    for (int i = 0; i < 3; ++i) {
      const double upper = hi - eps[i] * span / 2.0;
      m[i] = integrate([&](double u) { return std::pow(u, n) * d(u); }, lo, upper, 1e-11);
    }
    // Solve M(eps) = M0 + A*eps + B*eps*ln(eps) for M0.
    double a[3][4];
    for (int i = 0; i < 3; ++i) {
      a[i][0] = 1.0;
      a[i][1] = eps[i];
      a[i][2] = eps[i] * std::log(eps[i]);
      a[i][3] = m[i];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int row = col + 1; row < 3; ++row) {
        if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
      }
      for (int j = 0; j < 4; ++j) std::swap(a[col][j], a[piv][j]);
      for (int row = 0; row < 3; ++row) {
        if (row == col) continue;
        const double f = a[row][col] / a[col][col];
        for (int j = col; j < 4; ++j) a[row][j] -= f * a[col][j];
      }
    }
    return a[0][3] / a[0][0];
  }

  // Unbounded support: the integrand decays fast; no regulator needed.
  const double lo = d.support_lo();
  const double hi = p0.mu + 8.5 * p0.sigma;
  return integrate([&](double u) { return std::pow(u, n) * d(u); }, lo, hi, 1e-10);
}

double stationary_moment(int n, double lambda, const ModelSpec& model) {
  if (model.p_a.family == DistFamily::Uniform && model.p0 == model.p_a) {
    const double mu = model.p_a.mu;
    const Rational sigma = rational_of(model.p_a.sigma);
    if (mu == 0.0) {
      return to_double(stationary_moment_exact(n, rational_of(lambda), sigma));
    }
    // Dictionary shift: U = mu + V with V the centered law and the threshold
    // moved to lambda - mu.
    const Rational rmu = rational_of(mu);
    const Rational rl = rational_of(lambda - mu);
    Rational acc{0};
    for (int k = 0; k <= n; ++k) {
      Rational c{1};
      for (int i = 1; i <= k; ++i) c = c * Rational(n - k + i) / Rational(i);
      Rational mu_pow{1};
      for (int i = 0; i < n - k; ++i) mu_pow *= rmu;
      acc += c * mu_pow * stationary_moment_exact(k, rl, sigma);
    }
    return to_double(acc);
  }
  return stationary_density_moment(n, lambda, model);
}

}  // namespace matchmarket::analytic
