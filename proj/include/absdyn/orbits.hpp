#pragma once

// Pointwise dynamics of x -> |x - theta|: random orbits, exhaustive reach
// sets, circle-rotation orbits, epsilon-covering and the lattice/dense
// dichotomy test over finite theta sets.

#include <cstdint>
#include <span>
#include <vector>

#include "absdyn/measures.hpp"

namespace absdyn {

inline constexpr std::size_t kReachSetCap = 1'000'000;
inline constexpr long long kDenominatorCap = 1'000'000;

inline double apply_map(double x, double theta) { return std::abs(x - theta); }

struct OrbitRecord {
  double start = 0.0;
  std::vector<double> points;       // length n+1, points[0] == start
  std::uint64_t seed = 0;
  std::vector<double> theta_draws;  // length n; points[k+1] == |points[k]-theta_draws[k]|
};

OrbitRecord random_orbit(double x0, const Measure1D& mu, int n, std::uint64_t seed);

/// Breadth-first closure of {x0} under all maps x -> |x-t|, t in thetas, up to
/// `depth` applications. Points closer than tol are identified. Throws
/// Errc::cap past `cap` distinct points.
std::vector<double> reach_set(double x0, std::span<const double> thetas, int depth, double tol,
                              std::size_t cap = kReachSetCap);

/// Forward orbit x, R(x), ..., R^{n-1}(x) of the circle rotation by r.
std::vector<double> rotation_orbit(double x0, double r, int n);

/// True when the points leave no gap wider than eps inside [lo,hi]: the
/// smallest point is within eps of lo, the largest within eps of hi, and
/// consecutive points (restricted to the eps-neighborhood of the interval)
/// are at most eps apart.
bool epsilon_cover(std::span<const double> points, double lo, double hi, double eps);

struct LatticeResult {
  bool is_lattice = false;
  double step = 0.0;  // lattice is step * Z when is_lattice
};

/// Approximate real gcd by continued-fraction rational reconstruction of the
/// ratios theta/g, denominators capped at min(ceil(1/tol), 1e6). Inputs that
/// do not look co-rational at double precision yield is_lattice = false.
LatticeResult lattice_test(std::span<const double> thetas, double tol);

/// Monte Carlo estimate of P(orbit started at x0 visits (lo,hi) within n_max
/// steps), counting the start as step 0. Per-trial substreams make the result
/// independent of the worker count.
double reach_probability(double x0, const Measure1D& mu, double lo, double hi, int n_max,
                         int trials, std::uint64_t seed, int threads = 1);

}  // namespace absdyn
