#include "absdyn/metric.hpp"

#include <algorithm>
#include <cmath>

namespace absdyn {

namespace {

bool is_discrete(const Measure1D& m) { return !std::holds_alternative<GridMeasure>(m); }

struct WeightedPoint {
  double x;
  double w;
};

std::vector<WeightedPoint> discrete_points(const Measure1D& m) {
  std::vector<WeightedPoint> pts;
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) {
    pts.reserve(a->size());
    for (const Atom& atom : a->atoms()) pts.push_back({atom.x, atom.w});
  } else {
    const auto& s = std::get<EmpiricalMeasure>(m).samples();
    const double w = 1.0 / static_cast<double>(s.size());
    pts.reserve(s.size());
    for (double x : s) pts.push_back({x, w});
  }
  return pts;
}

// Exact integral of |Q_rho - Q_pi|^p: both quantile functions are piecewise
// constant, so sweep the merged cumulative-weight breakpoints.
double quantile_integral_discrete(const Measure1D& rho, const Measure1D& pi, double p) {
  const auto a = discrete_points(rho);
  const auto b = discrete_points(pi);
  NeumaierSum acc;
  std::size_t i = 0, j = 0;
  double ca = a[0].w, cb = b[0].w;  // cumulative weight through atoms i, j
  double u = 0.0;
  while (true) {
    const double next = std::min(ca, cb);
    if (next > u) acc.add((next - u) * std::pow(std::abs(a[i].x - b[j].x), p));
    u = next;
    bool advanced = false;
    if (ca <= u && i + 1 < a.size()) {
      ca += a[++i].w;
      advanced = true;
    }
    if (cb <= u && j + 1 < b.size()) {
      cb += b[++j].w;
      advanced = true;
    }
    if (!advanced) break;
  }
  return acc.value();
}

double quantile_integral_quadrature(const Measure1D& rho, const Measure1D& pi, double p) {
  NeumaierSum acc;
  const double inv = 1.0 / static_cast<double>(kQuantileQuadSamples);
  for (int k = 0; k < kQuantileQuadSamples; ++k) {
    const double u = (static_cast<double>(k) + 0.5) * inv;
    acc.add(std::pow(std::abs(quantile(rho, u) - quantile(pi, u)), p));
  }
  return acc.value() * inv;
}

}  // namespace

double wasserstein_p(const Measure1D& rho, const Measure1D& pi, double p) {
  require(p >= 1.0, Errc::config, "wasserstein_p: p must be >= 1");
  if (const auto* g = std::get_if<GridMeasure>(&rho)) g->require_small_tail("wasserstein_p");
  if (const auto* g = std::get_if<GridMeasure>(&pi)) g->require_small_tail("wasserstein_p");
  const double integral = (is_discrete(rho) && is_discrete(pi))
                              ? quantile_integral_discrete(rho, pi, p)
                              : quantile_integral_quadrature(rho, pi, p);
  return std::pow(integral, 1.0 / p);
}

double wp_of_coupling(const Coupling2D& gamma, double p) {
  require(p >= 1.0, Errc::config, "wp_of_coupling: p must be >= 1");
  NeumaierSum acc;
  for (const CouplingAtom& a : gamma.atoms()) acc.add(a.w * std::pow(std::abs(a.x - a.y), p));
  return std::pow(acc.value(), 1.0 / p);
}

std::vector<double> decrease_experiment(const Measure1D& rho, const Measure1D& pi,
                                        const Measure1D& mu, double p, int n,
                                        const PushOptions& opts) {
  require(n >= 1, Errc::config, "decrease_experiment: n must be >= 1");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n) + 1);
  Measure1D r = rho, q = pi;
  w.push_back(wasserstein_p(r, q, p));
  for (int k = 0; k < n; ++k) {
    r = push_avg(r, mu, opts);
    q = push_avg(q, mu, opts);
    w.push_back(wasserstein_p(r, q, p));
  }
  return w;
}

// ---------------------------------------------------------------------------
// (A,B,C)-condition checker
// ---------------------------------------------------------------------------

namespace {

AbcProbe evaluate_candidate(const Measure1D& mu, double A, double B, double C, double x, double y,
                            double L, double U) {
  AbcProbe pr;
  pr.x = x;
  pr.y = y;
  pr.L = L;
  pr.U = U;
  const double d = y - x;
  // |2z - x - y| is V-shaped in z, so its max over [L,U] is at an endpoint
  const double geo = std::max(std::abs(2.0 * L - x - y), std::abs(2.0 * U - x - y));
  pr.margin_geom = A * d - geo;
  pr.margin_mass = interval_mass(mu, L, U) - C * std::pow(interval_mass(mu, x, y), B);
  return pr;
}

}  // namespace

AbcProbe abc_probe(const Measure1D& mu, double A, double B, double C, double x, double y,
                   double shift_c) {
  require(x < y, Errc::config, "abc_probe: need x < y");
  const double kappa = 0.5 * (1.0 - A);
  const double d = y - x;

  AbcProbe best = evaluate_candidate(mu, A, B, C, x, y, x + kappa * d, y - kappa * d);
  if (shift_c > 0.0 && shift_c < (1.0 - kappa) * d) {
    const AbcProbe alt = evaluate_candidate(mu, A, B, C, x, y, x + shift_c, y - kappa * d);
    if (std::min(alt.margin_geom, alt.margin_mass) > std::min(best.margin_geom, best.margin_mass))
      best = alt;
  }
  return best;
}

ABCWitness abc_check(const Measure1D& mu, double A, double B, double C, int probes,
                     std::uint64_t seed, double shift_c, int threads) {
  require(A < 1.0, Errc::config, "abc_check: need A < 1");
  require(B > 0.0 && C > 0.0, Errc::config, "abc_check: need B, C > 0");
  require(probes >= 1, Errc::config, "abc_check: need probes >= 1");

  const double lo = quantile(mu, 1e-3);
  const double hi = quantile(mu, 1.0 - 1e-3);
  require(hi > lo, Errc::config, "abc_check: degenerate effective support");

  ABCWitness wit;
  wit.A = A;
  wit.B = B;
  wit.C = C;
  wit.probes.resize(static_cast<std::size_t>(probes));

  // margins of exact witnesses sit at 0; tolerate only rounding noise
  const double guard = -1e-12 * std::max(1.0, hi - lo);

  parallel_for_indexed(static_cast<std::size_t>(probes), threads, [&](std::size_t k) {
    UniformStream stream = UniformStream::substream(seed, k);
    double x, y;
    do {
      x = lo + (hi - lo) * stream.next();
      y = lo + (hi - lo) * stream.next();
      if (x > y) std::swap(x, y);
    } while (!(y - x > 1e-9) || !(interval_mass(mu, x, y) > 0.0));
    wit.probes[k] = abc_probe(mu, A, B, C, x, y, shift_c);
  });

  wit.pass = true;
  for (const AbcProbe& pr : wit.probes) {
    if (pr.margin_geom < guard || pr.margin_mass < guard) {
      wit.pass = false;
      wit.violation = pr;
      break;
    }
  }
  return wit;
}

RateBound rate_bound(double w0, double A, double B, double C, double p, int n) {
  require(w0 > 0.0, Errc::config, "rate_bound: w0 must be positive");
  require(p >= 1.0 && B > 0.0, Errc::config, "rate_bound: need p >= 1 and B > 0");
  require(n >= 0, Errc::config, "rate_bound: n must be >= 0");
  RateBound out;
  out.c = C * (1.0 - std::pow(A, p));
  const double q = B / p;
  out.iterates.reserve(static_cast<std::size_t>(n) + 1);
  out.closed_bound.reserve(static_cast<std::size_t>(n) + 1);
  double v = w0;
  for (int k = 0; k <= n; ++k) {
    out.iterates.push_back(v);
    out.closed_bound.push_back(std::pow(std::pow(w0, -q) + out.c * q * k, -1.0 / q));
    v = std::max(0.0, v - out.c * std::pow(v, 1.0 + q));
  }
  return out;
}

double fit_poly_rate(std::span<const double> w) {
  require(w.size() >= 16, Errc::config, "fit_poly_rate: need at least 16 entries");
  for (double v : w)
    require(v > 0.0, Errc::config, "fit_poly_rate: entries must be strictly positive");
  const std::size_t from = w.size() / 2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double count = 0.0;
  for (std::size_t k = from; k < w.size(); ++k) {
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(w[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    count += 1.0;
  }
  const double denom = count * sxx - sx * sx;
  require(denom > 0.0, Errc::config, "fit_poly_rate: degenerate abscissae");
  return (count * sxy - sx * sy) / denom;
}

}  // namespace absdyn
