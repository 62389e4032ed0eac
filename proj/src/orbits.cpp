#include "absdyn/orbits.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

namespace absdyn {

OrbitRecord random_orbit(double x0, const Measure1D& mu, int n, std::uint64_t seed) {
  require(n >= 1, Errc::config, "random_orbit: n must be >= 1");
  require(x0 >= 0.0, Errc::config, "random_orbit: x0 must be >= 0");
  OrbitRecord rec;
  rec.start = x0;
  rec.seed = seed;
  rec.points.reserve(static_cast<std::size_t>(n) + 1);
  rec.theta_draws.reserve(static_cast<std::size_t>(n));
  rec.points.push_back(x0);
  UniformStream stream(seed);
  double x = x0;
  for (int k = 0; k < n; ++k) {
    const double theta = quantile(mu, stream.next());
    x = apply_map(x, theta);
    rec.theta_draws.push_back(theta);
    rec.points.push_back(x);
  }
  return rec;
}

namespace {

// sorted container with tolerance-based membership
bool insert_with_tol(std::set<double>& s, double x, double tol) {
  auto it = s.lower_bound(x - tol);
  if (it != s.end() && *it <= x + tol) return false;
  s.insert(it, x);
  return true;
}

}  // namespace

std::vector<double> reach_set(double x0, std::span<const double> thetas, int depth, double tol,
                              std::size_t cap) {
  require(!thetas.empty(), Errc::config, "reach_set: thetas must be nonempty");
  require(depth >= 0, Errc::config, "reach_set: depth must be >= 0");
  require(tol > 0.0, Errc::config, "reach_set: tol must be positive");
  std::set<double> seen;
  seen.insert(x0);
  std::vector<double> frontier{x0};
  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<double> next;
    for (double y : frontier) {
      for (double t : thetas) {
        const double z = apply_map(y, t);
        if (insert_with_tol(seen, z, tol)) {
          require(seen.size() <= cap, Errc::cap, "reach_set: point cap exceeded");
          next.push_back(z);
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<double> rotation_orbit(double x0, double r, int n) {
  require(x0 >= 0.0 && x0 < 1.0, Errc::config, "rotation_orbit: x0 must lie in [0,1)");
  require(r > 0.0 && r < 1.0, Errc::config, "rotation_orbit: r must lie in (0,1)");
  require(n >= 1, Errc::config, "rotation_orbit: n must be >= 1");
  std::vector<double> orbit;
  orbit.reserve(static_cast<std::size_t>(n));
  double x = x0;
  for (int k = 0; k < n; ++k) {
    orbit.push_back(x);
    x += r;
    if (x >= 1.0) x -= 1.0;
  }
  return orbit;
}

bool epsilon_cover(std::span<const double> points, double lo, double hi, double eps) {
  require(eps > 0.0, Errc::config, "epsilon_cover: eps must be positive");
  require(lo < hi, Errc::config, "epsilon_cover: need lo < hi");
  std::vector<double> pts;
  pts.reserve(points.size());
  for (double p : points)
    if (p >= lo - eps && p <= hi + eps) pts.push_back(p);
  if (pts.empty()) return false;
  std::sort(pts.begin(), pts.end());
  if (pts.front() - lo > eps) return false;
  if (hi - pts.back() > eps) return false;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // only the part of a gap that intersects [lo,hi] counts
    const double gap = std::min(pts[i], hi) - std::max(pts[i - 1], lo);
    if (gap > eps) return false;
  }
  return true;
}

namespace {

struct Rational {
  long long num = 0;
  long long den = 0;
  bool ok = false;
};

// Continued-fraction expansion; succeeds when a convergent matches x at
// double precision before its denominator passes `qcap`. Irrational-looking
// inputs exhaust the cap and fail.
Rational rationalize(double x, long long qcap) {
  const double rel = 1e-12 * std::max(1.0, std::abs(x));
  double h_prev = 1.0, h = std::floor(x);
  double k_prev = 0.0, k = 1.0;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(x - h / k) <= rel) {
      if (k > static_cast<double>(qcap)) return {};
      return {static_cast<long long>(std::llround(h)), static_cast<long long>(std::llround(k)), true};
    }
    if (frac < 1e-15) return {};
    const double inv = 1.0 / frac;
    const double a = std::floor(inv);
    frac = inv - a;
    const double h_next = a * h + h_prev;
    const double k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    if (k > static_cast<double>(qcap)) return {};
  }
  return {};
}

}  // namespace

LatticeResult lattice_test(std::span<const double> thetas, double tol) {
  require(!thetas.empty(), Errc::config, "lattice_test: thetas must be nonempty");
  require(tol > 0.0, Errc::config, "lattice_test: tol must be positive");
  for (double t : thetas) require(t > 0.0, Errc::config, "lattice_test: thetas must be positive");

  long long qcap = kDenominatorCap;
  if (tol > 1.0 / static_cast<double>(kDenominatorCap))
    qcap = static_cast<long long>(std::ceil(1.0 / tol));

  double g = thetas[0];
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    const Rational r = rationalize(thetas[i] / g, qcap);
    if (!r.ok || r.num <= 0) return {};
    // thetas[i] ~ num*(g/den) and g = den*(g/den); convergents are coprime
    g /= static_cast<double>(r.den);
  }
  for (double t : thetas) {
    const double mult = std::round(t / g);
    if (std::abs(t - mult * g) > tol * std::max(1.0, t)) return {};
  }
  return {true, g};
}

double reach_probability(double x0, const Measure1D& mu, double lo, double hi, int n_max,
                         int trials, std::uint64_t seed, int threads) {
  require(lo < hi, Errc::config, "reach_probability: need lo < hi");
  require(trials >= 1, Errc::config, "reach_probability: trials must be >= 1");
  require(n_max >= 0, Errc::config, "reach_probability: n_max must be >= 0");
  if (x0 > lo && x0 < hi) return 1.0;  // visited at step 0

  std::atomic<long long> hits{0};
  parallel_for_indexed(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    UniformStream stream = UniformStream::substream(seed, t);
    double x = x0;
    for (int k = 0; k < n_max; ++k) {
      x = apply_map(x, quantile(mu, stream.next()));
      if (x > lo && x < hi) {
        hits.fetch_add(1, std::memory_order_relaxed);
        return;
      }
    }
  });
  return static_cast<double>(hits.load()) / static_cast<double>(trials);
}

}  // namespace absdyn
