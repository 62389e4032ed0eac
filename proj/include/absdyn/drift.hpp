#pragma once

// Markov-kernel quantities for the chain x -> |x - theta|: one-step
// transition probabilities, the expected-position function
// U(y) = y*(2m(y)-1) + E - 2Y(y), its landmarks (fixed point, median
// minimum, chord bounds) and a numeric Foster-Lyapunov drift check.

#include <cstdint>
#include <vector>

#include "absdyn/measures.hpp"

namespace absdyn {

inline constexpr double kBisectTol = 1e-10;

/// P(x, (lo,hi)) = mu((x-hi, x-lo) u (x+lo, x+hi)), clipped to the half-line.
double transition_prob(const Measure1D& mu, double x, double lo, double hi);

/// U(y) = E|y - theta| via the half-open CDF and partial mean.
double drift_u(const Measure1D& mu, double y);

struct DriftProfile {
  std::vector<double> grid;
  std::vector<double> u_values;
  double mean = 0.0;
  double median = 0.0;
  double y0 = 0.0;          // fixed point U(y0) = y0
  double y_star = 0.0;      // U(y_star) = mean, right of the median
  double alpha_star = 0.0;  // y_star / mean - 1
};

/// Samples U on n points of [0, y_max] and locates the landmarks by
/// bisection. Rejects single-point reference measures (the map is then
/// deterministic and the landmarks degenerate).
DriftProfile drift_profile(const Measure1D& mu, double y_max, int n);

struct ChordBound {
  double ell = 0.0;
  bool holds = false;
  double y_alpha = 0.0;
  double y_beta = 0.0;  // +inf for beta == 1
};

/// Chord of U between the level crossings y_alpha, y_beta (where
/// U(y_a) = y_a - a*E); convexity puts U below the chord on [y_alpha,y_beta].
ChordBound chord_bound(const Measure1D& mu, double alpha, double beta, double y);

struct DriftReport {
  bool pass = false;
  double b = 0.0;           // max over [0,c_hi] of U(y) - y + eps
  double violating_y = 0.0; // meaningful when !pass
  double eps = 0.0;
  double c_hi = 0.0;
};

/// Checks U(y) <= y - eps on a dense grid beyond c_hi (with V = identity and
/// C = [0, c_hi]) and reports the compensation constant b.
DriftReport verify_drift_condition(const Measure1D& mu, double eps, double c_hi);

/// Simulates the chain, discards burn_in steps and returns the empirical law
/// of the next n positions.
EmpiricalMeasure invariant_estimate(const Measure1D& mu, double x0, int burn_in, int n,
                                    std::uint64_t seed);

}  // namespace absdyn
