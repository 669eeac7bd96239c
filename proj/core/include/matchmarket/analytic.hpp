#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "matchmarket/distribution.hpp"
#include "matchmarket/poly.hpp"
#include "matchmarket/rational.hpp"

namespace matchmarket::analytic {

struct Interval {
  Rational lo;
  Rational hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Exact polynomial probability density on a bounded support. Construction
/// enforces unit mass (exact) and non-negativity sampled at 10^3 points.
class PolyDensity {
 public:
  PolyDensity(Interval support, Poly poly);

  const Interval& support() const { return support_; }
  const Poly& poly() const { return poly_; }

  /// Exact n-th moment over the support.
  Rational moment(int n) const { return poly_.moment(n, support_.lo, support_.hi); }

  /// Pointwise value; zero outside the support.
  double operator()(double u) const;

 private:
  Interval support_;
  Poly poly_;
};

/// Large-N model data: the off-diagonal law p_A, the single-utility law U_0
/// (the diagonal law), and an optional marriage threshold.
struct ModelSpec {
  DistributionSpec p_a;
  DistributionSpec p0;
  std::optional<double> lambda;

  static ModelSpec uniform(double mu, double sigma) {
    return {DistributionSpec::uniform(mu, sigma), DistributionSpec::uniform(mu, sigma),
            std::nullopt};
  }
  static ModelSpec gaussian(double mu, double sigma) {
    return {DistributionSpec::gaussian(mu, sigma), DistributionSpec::gaussian(mu, sigma),
            std::nullopt};
  }

  /// Exact rational evolution needs the Uniform model with the diagonal law
  /// equal to the off-diagonal one (shared bounded support).
  bool exact_capable() const {
    return p_a.family == DistFamily::Uniform && p0 == p_a && p_a.sigma > 0.0;
  }
  Interval exact_support() const;
};

/// Mean-field state at step t: couple/single fractions, normalized moment
/// ladders (index n holds E[X^n], entry 0 is exactly 1), and the polynomial
/// densities when available. b + r = 1 and the mixture identity
/// E[U^n] = b E[C^n] + r E[S^n] hold exactly.
struct MomentState {
  int t = 0;
  Rational b{0};
  Rational r{1};
  std::vector<Rational> couple_moments;
  std::vector<Rational> single_moments;
  std::vector<Rational> population_moments;
  std::optional<PolyDensity> couple_density;
  std::optional<PolyDensity> single_density;

  int n_max() const { return static_cast<int>(population_moments.size()) - 1; }
  /// Throws StateError when the invariants fail.
  void check_consistent() const;
};

/// t = 0: everyone single, S_0 = U_0 = p0. Exact (Uniform) models only.
MomentState initial_moment_state(const ModelSpec& model, int n_max);

/// One step of the mean-field evolution, exact in rational arithmetic.
/// Couple members, their matches and the reset draws are independent
/// (the mean-field assumption). Requires an exact-capable model and the
/// input densities; see first_step_moments for generic models.
MomentState moment_step(const MomentState& state, const ModelSpec& model, int n_max);

/// Unique degree-`degree` polynomial matching the first degree+1 supplied
/// moments on the support (moments[0] must be 1). Remaining supplied moments
/// act as held-out validation: any relative residual above 1e-9 rejects the
/// reconstruction. Exact linear solve.
PolyDensity reconstruct_density(std::span<const Rational> moments, const Interval& support,
                                int degree);

/// Like reconstruct_density but raises the degree (starting from
/// `start_degree`) until the held-out residual test passes.
PolyDensity reconstruct_density_auto(std::span<const Rational> moments, const Interval& support,
                                     int start_degree);

/// First evolution step from the all-singles state for arbitrary model laws
/// (closed-form tails plus adaptive quadrature). Values indexed by moment
/// order n; [0] entries are the fractions' normalization 1.
struct FirstStepMoments {
  double b1 = 0.0;
  double r1 = 0.0;
  std::vector<double> couple;
  std::vector<double> single;
  std::vector<double> population;
};
FirstStepMoments first_step_moments(const ModelSpec& model, int n_max);

/// Utility distribution of married couples; identical at every step and the
/// t -> infinity limit of the whole population. Closed form for the Uniform
/// model, quadrature-backed otherwise. lambda must lie below the upper
/// support bound.
class StationaryDensity {
 public:
  StationaryDensity(ModelSpec model, double lambda);
  double operator()(double u) const;
  double lambda() const { return lambda_; }
  double support_lo() const;
  double support_hi() const;

 private:
  ModelSpec model_;
  double lambda_;
};

StationaryDensity stationary_married_density(const ModelSpec& model, double lambda);

/// Reference closed form for E[U_inf^n] in the Uniform model with mu = 0
/// (harmonic number plus incomplete-beta bracket, rational for rational
/// inputs). n = 0 returns 1 exactly. Note: for n >= 1 this disagrees with
/// the moments of the stationary density itself (see the documented
/// discrepancy tests); stationary_density_moment gives the density route.
Rational stationary_moment_exact(int n, const Rational& lambda, const Rational& sigma);

/// Dispatch: Uniform model -> closed form (general mu via binomial shift);
/// other models -> epsilon-regulated quadrature of the stationary density.
double stationary_moment(int n, double lambda, const ModelSpec& model);

/// Integral of u^n against the stationary density (epsilon-regulated at the
/// singular upper end), for any model.
double stationary_density_moment(int n, double lambda, const ModelSpec& model);

}  // namespace matchmarket::analytic
