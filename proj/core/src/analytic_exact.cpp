#include <string>

#include "matchmarket/analytic.hpp"
#include "matchmarket/errors.hpp"

namespace matchmarket::analytic {

PolyDensity::PolyDensity(Interval support, Poly poly)
    : support_(std::move(support)), poly_(std::move(poly)) {
  if (!(support_.lo < support_.hi)) {
    throw StateError("poly density: empty support");
  }
  if (poly_.integral(support_.lo, support_.hi) != 1) {
    throw StateError("poly density: mass is not exactly 1");
  }
  const double lo = to_double(support_.lo);
  const double hi = to_double(support_.hi);
  const int samples = 1000;
  for (int i = 0; i <= samples; ++i) {
    const double u = lo + (hi - lo) * i / samples;
    if (poly_(u) < -1e-9) {
      throw StateError("poly density: negative at u = " + std::to_string(u));
    }
  }
}

double PolyDensity::operator()(double u) const {
  if (u < to_double(support_.lo) || u > to_double(support_.hi)) return 0.0;
  return poly_(u);
}

Interval ModelSpec::exact_support() const {
  if (!exact_capable()) {
    throw ConfigError("exact support: model is not exact-capable (uniform, diag = offdiag)");
  }
  const Rational mu = rational_of(p_a.mu);
  const Rational two_sigma = Rational(2) * rational_of(p_a.sigma);
  return {mu - two_sigma, mu + two_sigma};
}

void MomentState::check_consistent() const {
  if (b + r != 1) throw StateError("inconsistent state: b + r != 1");
  if (b < 0 || r < 0) throw StateError("inconsistent state: negative fraction");
  const std::size_t len = population_moments.size();
  if (couple_moments.size() != len || single_moments.size() != len || len == 0) {
    throw StateError("inconsistent state: moment ladders disagree in length");
  }
  if (couple_moments[0] != 1 || single_moments[0] != 1 || population_moments[0] != 1) {
    throw StateError("inconsistent state: zeroth moments must be 1");
  }
  for (std::size_t n = 0; n < len; ++n) {
    if (population_moments[n] != b * couple_moments[n] + r * single_moments[n]) {
      throw StateError("inconsistent state: mixture identity fails at n = " + std::to_string(n));
    }
  }
}

namespace {

std::vector<Rational> density_moments(const PolyDensity& d, int n_max) {
  std::vector<Rational> m(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) m[static_cast<std::size_t>(n)] = d.moment(n);
  return m;
}

}  // namespace

MomentState initial_moment_state(const ModelSpec& model, int n_max) {
  if (n_max < 1) throw ConfigError("initial_moment_state: n_max must be >= 1");
  const Interval support = model.exact_support();
  const Rational width = support.hi - support.lo;
  PolyDensity p0(support, Poly::constant(1 / width));

  MomentState s;
  s.t = 0;
  s.b = 0;
  s.r = 1;
  s.single_density = p0;
  s.couple_density = std::nullopt;
  s.single_moments = density_moments(p0, n_max);
  s.population_moments = s.single_moments;
  // No couples exist yet; the ladder keeps the vacuous normalized form.
  s.couple_moments.assign(static_cast<std::size_t>(n_max) + 1, Rational(0));
  s.couple_moments[0] = 1;
  s.check_consistent();
  return s;
}

MomentState moment_step(const MomentState& state, const ModelSpec& model, int n_max) {
  if (n_max < 1) throw ConfigError("moment_step: n_max must be >= 1");
  if (!model.exact_capable()) {
    throw ConfigError(
        "moment_step: exact evolution requires the uniform model with diag = offdiag; "
        "use first_step_moments for one generic step");
  }
  state.check_consistent();
  const Interval support = model.exact_support();
  const Rational a = support.lo;
  const Rational hi = support.hi;
  const Rational width = hi - a;

  if (state.r > 0 && !state.single_density) {
    throw StateError("moment_step: single density required (reconstruct_density first)");
  }
  if (state.b > 0 && !state.couple_density) {
    throw StateError("moment_step: couple density required (reconstruct_density first)");
  }
  if (state.single_density && state.single_density->support() != support) {
    throw StateError("moment_step: single density support != model support");
  }
  if (state.couple_density && state.couple_density->support() != support) {
    throw StateError("moment_step: couple density support != model support");
  }

  const Poly pa = Poly::constant(1 / width);
  // Tail and head of the entry law as polynomials in the conditioning value:
  // P+(u) = P(A > u) = (hi - u)/width, P-(u) = 1 - P+(u).
  const Poly p_plus({hi / width, Rational(-1) / width});
  const Poly p_minus({-a / width, Rational(1) / width});

  const bool has_c = state.b > 0;
  const bool has_s = state.r > 0;
  const Poly zero;
  const Poly& pc = has_c ? state.couple_density->poly() : zero;
  const Poly& ps = has_s ? state.single_density->poly() : zero;

  // Step constants. E_U[.] mixes the two channels with weights b, r.
  const Rational ECp = has_c ? (p_plus * pc).integral(a, hi) : Rational(0);
  const Rational ESp = has_s ? (p_plus * ps).integral(a, hi) : Rational(0);
  const Rational EUp = state.b * ECp + state.r * ESp;
  const Rational EUm = 1 - EUp;

  auto cdf_of = [&](const Poly& p) {
    const Poly f = p.antiderivative();
    return f - Poly::constant(f(a));
  };

  // Mass-weighted next densities. New couples draw a fresh entry above the
  // old value; survivors keep their value; dumped agents reset to U_0.
  Poly cdf_mix;
  if (has_c) cdf_mix += cdf_of(pc) * state.b;
  if (has_s) cdf_mix += cdf_of(ps) * state.r;

  const Poly stay = p_minus * EUp + Poly::constant(EUm);

  Poly pi_c = (pa * cdf_mix) * EUp;
  Poly pi_s;
  if (has_s) pi_s += (stay * ps) * state.r;
  if (has_c) {
    const Rational ECm = 1 - ECp;
    const Rational no_form = EUp * ECm + EUm;  // partner's match does not take
    pi_c += (stay * pc) * (state.b * no_form);
    pi_s += pa * (state.b * ECp * EUp * no_form);
  }

  MomentState next;
  next.t = state.t + 1;
  next.b = pi_c.integral(a, hi);
  next.r = pi_s.integral(a, hi);
  if (next.b + next.r != 1) {
    throw StateError("moment_step: probability not conserved (internal error)");
  }

  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  next.couple_moments.assign(len, Rational(0));
  next.single_moments.assign(len, Rational(0));
  next.population_moments.assign(len, Rational(0));
  next.couple_moments[0] = next.single_moments[0] = 1;

  if (next.b > 0) {
    const Poly pc_next = pi_c * (1 / next.b);
    next.couple_density = PolyDensity(support, pc_next);
    for (int n = 1; n <= n_max; ++n) {
      next.couple_moments[static_cast<std::size_t>(n)] = next.couple_density->moment(n);
    }
  } else {
    next.couple_density = std::nullopt;
  }
  if (next.r > 0) {
    const Poly ps_next = pi_s * (1 / next.r);
    next.single_density = PolyDensity(support, ps_next);
    for (int n = 1; n <= n_max; ++n) {
      next.single_moments[static_cast<std::size_t>(n)] = next.single_density->moment(n);
    }
  } else {
    next.single_density = std::nullopt;
  }
  for (std::size_t n = 0; n < len; ++n) {
    next.population_moments[n] =
        next.b * next.couple_moments[n] + next.r * next.single_moments[n];
  }
  next.check_consistent();
  return next;
}

PolyDensity reconstruct_density(std::span<const Rational> moments, const Interval& support,
                                int degree) {
  if (degree < 0) throw ConfigError("reconstruct_density: negative degree");
  if (static_cast<std::size_t>(degree) + 1 > moments.size()) {
    throw ConfigError("reconstruct_density: degree + 1 exceeds supplied moments");
  }
  if (!(support.lo < support.hi)) throw StateError("degenerate moments: empty support");

  const int d = degree;
  const Rational& a = support.lo;
  const Rational& b = support.hi;

  // power_int[k] = integral of u^k over [a, b]
  std::vector<Rational> power_int(static_cast<std::size_t>(2 * d + moments.size()) + 2);
  for (std::size_t k = 0; k < power_int.size(); ++k) {
    const int kk = static_cast<int>(k);
    Rational bp = b, ap = a;
    for (int i = 0; i < kk; ++i) {
      bp *= b;
      ap *= a;
    }
    power_int[k] = (bp - ap) / Rational(kk + 1);
  }

  // Solve sum_j c_j * power_int[i + j] = moments[i], i = 0..d.
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(d) + 1,
                                       std::vector<Rational>(static_cast<std::size_t>(d) + 2));
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      m[i][j] = power_int[static_cast<std::size_t>(i + j)];
    }
    m[i][static_cast<std::size_t>(d) + 1] = moments[static_cast<std::size_t>(i)];
  }
  for (int col = 0; col <= d; ++col) {
    int pivot = -1;
    for (int row = col; row <= d; ++row) {
      if (m[row][col] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw StateError("degenerate moments: singular moment system");
    std::swap(m[col], m[pivot]);
    const Rational inv = 1 / m[col][col];
    for (int j = col; j <= d + 1; ++j) m[col][j] *= inv;
    for (int row = 0; row <= d; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const Rational f = m[row][col];
      for (int j = col; j <= d + 1; ++j) m[row][j] -= f * m[col][j];
    }
  }
  std::vector<Rational> coeffs(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j <= d; ++j) coeffs[static_cast<std::size_t>(j)] = m[j][static_cast<std::size_t>(d) + 1];
  const Poly poly{std::vector<Rational>(coeffs)};

  // Held-out moments validate the reconstruction.
  const Rational tol = Rational(1) / Rational(1000000000);
  for (std::size_t i = static_cast<std::size_t>(d) + 1; i < moments.size(); ++i) {
    Rational predicted{0};
    for (int j = 0; j <= d; ++j) {
      predicted += coeffs[static_cast<std::size_t>(j)] * power_int[i + static_cast<std::size_t>(j)];
    }
    const Rational res = abs(predicted - moments[i]);
    const Rational rel = moments[i] != 0 ? res / abs(moments[i]) : res;
    if (rel > tol) {
      throw StateError("insufficient degree: held-out moment " + std::to_string(i) +
                       " residual exceeds 1e-9");
    }
  }
  return PolyDensity(support, poly);
}

PolyDensity reconstruct_density_auto(std::span<const Rational> moments, const Interval& support,
                                     int start_degree) {
  const int max_degree = static_cast<int>(moments.size()) - 1;
  for (int d = start_degree; d <= max_degree; ++d) {
    try {
      return reconstruct_density(moments, support, d);
    } catch (const StateError&) {
      if (d == max_degree) throw;
    }
  }
  throw ConfigError("reconstruct_density_auto: no moments supplied");
}

}  // namespace matchmarket::analytic
