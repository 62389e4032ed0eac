#include "absdyn/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace absdyn {

double transition_prob(const Measure1D& mu, double x, double lo, double hi) {
  require(lo >= 0.0 && lo < hi, Errc::config, "transition_prob: need 0 <= lo < hi");
  require(x >= 0.0, Errc::config, "transition_prob: x must be >= 0");
  return interval_mass(mu, x - hi, x - lo) + interval_mass(mu, x + lo, x + hi);
}

double drift_u(const Measure1D& mu, double y) {
  require(y >= 0.0, Errc::config, "drift_u: y must be >= 0");
  const double e = mean(mu);
  return y * (2.0 * cdf(mu, y) - 1.0) + e - 2.0 * partial_mean(mu, y);
}

namespace {

// U with the mean hoisted out of bisection loops
double u_of(const Measure1D& mu, double e, double y) {
  return y * (2.0 * cdf(mu, y) - 1.0) + e - 2.0 * partial_mean(mu, y);
}

// y_alpha solves U(y) = y - alpha*E; unique for alpha in [-1,1) by convexity.
double level_crossing(const Measure1D& mu, double e, double alpha, double hint_hi) {
  if (alpha <= -1.0) return 0.0;  // U(0) = E = 0 - (-1)E
  double hi = std::max(hint_hi, 4.0 * e);
  auto f = [&](double y) { return u_of(mu, e, y) - y + alpha * e; };
  int guard = 0;
  while (f(hi) >= 0.0) {
    hi *= 2.0;
    require(++guard < 64, Errc::tolerance, "level crossing not bracketed (alpha too close to 1?)");
  }
  return bisect(f, 0.0, hi, kBisectTol);
}

}  // namespace

DriftProfile drift_profile(const Measure1D& mu, double y_max, int n) {
  require(!is_singleton(mu), Errc::config,
          "drift_profile: single-point reference measures are the excluded trivial case");
  require(n >= 64, Errc::config, "drift_profile: need n >= 64");
  const double e = mean(mu);
  require(e > 0.0, Errc::config, "drift_profile: reference measure must have positive mean");
  require(y_max >= 3.0 * e, Errc::config, "drift_profile: y_max must be several multiples of the mean");

  DriftProfile p;
  p.mean = e;
  p.median = median(mu);
  p.grid.reserve(static_cast<std::size_t>(n));
  p.u_values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double y = y_max * static_cast<double>(i) / static_cast<double>(n - 1);
    p.grid.push_back(y);
    p.u_values.push_back(u_of(mu, e, y));
  }

  require(u_of(mu, e, y_max) - y_max < 0.0, Errc::config,
          "drift_profile: y_max too small, U(y)-y has no sign change");
  p.y0 = bisect([&](double y) { return u_of(mu, e, y) - y; }, 0.0, y_max, kBisectTol);

  // U(median) <= E = U(0) and U(y) - E > 0 eventually; root right of the median
  const double at_median = u_of(mu, e, p.median) - e;
  if (at_median >= 0.0) {
    p.y_star = p.median;
  } else {
    require(u_of(mu, e, y_max) - e > 0.0, Errc::config,
            "drift_profile: y_max too small, U(y)-E has no sign change");
    p.y_star = bisect([&](double y) { return u_of(mu, e, y) - e; }, p.median, y_max, kBisectTol);
  }
  p.alpha_star = p.y_star / e - 1.0;
  return p;
}

ChordBound chord_bound(const Measure1D& mu, double alpha, double beta, double y) {
  require(alpha >= -1.0 && alpha < beta && beta <= 1.0, Errc::config,
          "chord_bound: need -1 <= alpha < beta <= 1");
  require(!is_singleton(mu), Errc::config, "chord_bound: singleton reference measure");
  const double e = mean(mu);

  ChordBound out;
  out.y_alpha = level_crossing(mu, e, alpha, 4.0 * e);
  if (beta >= 1.0) {
    out.y_beta = std::numeric_limits<double>::infinity();
    require(y >= out.y_alpha, Errc::config, "chord_bound: y below y_alpha");
    out.ell = y - alpha * e;
  } else {
    out.y_beta = level_crossing(mu, e, beta, 4.0 * e);
    require(y >= out.y_alpha - kBisectTol && y <= out.y_beta + kBisectTol, Errc::config,
            "chord_bound: y outside [y_alpha, y_beta]");
    out.ell = y - (alpha * (out.y_beta - y) + beta * (y - out.y_alpha)) / (out.y_beta - out.y_alpha) * e;
  }
  out.holds = u_of(mu, e, y) <= out.ell + 1e-9;
  return out;
}

DriftReport verify_drift_condition(const Measure1D& mu, double eps, double c_hi) {
  require(eps > 0.0, Errc::config, "verify_drift_condition: eps must be positive");
  require(c_hi > 0.0, Errc::config, "verify_drift_condition: c_hi must be positive");
  const double e = mean(mu);

  DriftReport rep;
  rep.eps = eps;
  rep.c_hi = c_hi;

  // Compensation over the compact set [0, c_hi].
  const int kInside = 2048;
  double b = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kInside; ++i) {
    const double y = c_hi * static_cast<double>(i) / kInside;
    b = std::max(b, u_of(mu, e, y) - y + eps);
  }
  rep.b = b;

  // Drift outside: U(y) <= y - eps on a dense grid, plus the asymptotic level
  // U(y) - y -> -E which any finite grid can only approach from below.
  const int kOutside = 2048;
  const double span = std::max(20.0 * e, c_hi);
  for (int i = 1; i <= kOutside; ++i) {
    const double y = c_hi + span * static_cast<double>(i) / kOutside;
    if (u_of(mu, e, y) > y - eps) {
      rep.pass = false;
      rep.violating_y = y;
      return rep;
    }
  }
  if (e < eps) {  // limit of y - U(y) is E, so eps > E can never verify
    rep.pass = false;
    rep.violating_y = c_hi + span;
    return rep;
  }
  rep.pass = std::isfinite(b);
  return rep;
}

EmpiricalMeasure invariant_estimate(const Measure1D& mu, double x0, int burn_in, int n,
                                    std::uint64_t seed) {
  require(!is_singleton(mu), Errc::config,
          "invariant_estimate: single-point reference measures are the excluded trivial case");
  require(n >= 1000, Errc::config, "invariant_estimate: need n >= 1000");
  require(burn_in >= 0, Errc::config, "invariant_estimate: burn_in must be >= 0");
  require(x0 >= 0.0, Errc::config, "invariant_estimate: x0 must be >= 0");

  UniformStream stream(seed);
  double x = x0;
  for (int k = 0; k < burn_in; ++k) x = std::abs(x - quantile(mu, stream.next()));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    x = std::abs(x - quantile(mu, stream.next()));
    out.push_back(x);
  }
  return EmpiricalMeasure(std::move(out));
}

}  // namespace absdyn
