#include "absdyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace absdyn {

// ---------------------------------------------------------------------------
// AtomicMeasure
// ---------------------------------------------------------------------------

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  require(!atoms.empty(), Errc::config, "atomic measure needs at least one atom");
  for (const Atom& a : atoms) {
    require(std::isfinite(a.x) && a.x >= 0.0, Errc::config, "atom location must be finite and >= 0");
    require(std::isfinite(a.w) && a.w >= 0.0, Errc::config, "atom weight must be finite and >= 0");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });

  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (a.w == 0.0) continue;
    if (!atoms_.empty() && a.x - atoms_.back().x <= kAtomMergeTol) {
      // weight-preserving merge at the weighted mean location
      Atom& b = atoms_.back();
      double w = b.w + a.w;
      b.x = (b.x * b.w + a.x * a.w) / w;
      b.w = w;
    } else {
      atoms_.push_back(a);
    }
  }
  require(!atoms_.empty(), Errc::config, "atomic measure has no positive-weight atoms");

  NeumaierSum mass, mom;
  cum_.reserve(atoms_.size());
  cum_mom_.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    mass.add(a.w);
    mom.add(a.w * a.x);
    cum_.push_back(mass.value());
    cum_mom_.push_back(mom.value());
  }
  require(std::abs(cum_.back() - 1.0) <= kAtomMassTol, Errc::tolerance,
          "atomic weights must sum to 1 within 1e-12 (got " + std::to_string(cum_.back()) + ")");
}

double AtomicMeasure::cdf_below(double y) const {
  // strictly below y: an atom at y is excluded
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), y,
                             [](const Atom& a, double v) { return a.x < v; });
  if (it == atoms_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double AtomicMeasure::cdf(double y) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), y,
                             [](double v, const Atom& a) { return v < a.x; });
  if (it == atoms_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double AtomicMeasure::partial_mean(double y) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), y,
                             [](const Atom& a, double v) { return a.x < v; });
  if (it == atoms_.begin()) return 0.0;
  return cum_mom_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double AtomicMeasure::quantile(double u) const {
  require(u > 0.0 && u < 1.0, Errc::config, "quantile requires u in (0,1)");
  auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) return atoms_.back().x;
  return atoms_[static_cast<std::size_t>(it - cum_.begin())].x;
}

// ---------------------------------------------------------------------------
// GridMeasure
// ---------------------------------------------------------------------------

GridMeasure::GridMeasure(double x_max, std::vector<double> values, double tail_mass)
    : x_max_(x_max), values_(std::move(values)), tail_mass_(tail_mass) {
  require(std::isfinite(x_max_) && x_max_ > 0.0, Errc::config, "grid x_max must be positive");
  require(!values_.empty(), Errc::config, "grid needs at least one cell");
  require(std::isfinite(tail_mass_) && tail_mass_ >= 0.0, Errc::config, "tail_mass must be >= 0");
  const double hh = h();
  NeumaierSum mass, mom;
  edge_mass_.resize(values_.size() + 1);
  edge_moment_.resize(values_.size() + 1);
  edge_mass_[0] = 0.0;
  edge_moment_[0] = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(std::isfinite(values_[i]) && values_[i] >= 0.0, Errc::config, "grid density values must be >= 0");
    const double a = static_cast<double>(i) * hh;
    const double b = a + hh;
    mass.add(hh * values_[i]);
    mom.add(values_[i] * 0.5 * (b * b - a * a));
    edge_mass_[i + 1] = mass.value();
    edge_moment_[i + 1] = mom.value();
  }
  require(std::abs(edge_mass_.back() + tail_mass_ - 1.0) <= kGridMassTol, Errc::tolerance,
          "grid mass + tail must equal 1 within 1e-9 (got " +
              std::to_string(edge_mass_.back() + tail_mass_) + ")");
}

GridMeasure GridMeasure::from_cdf(const std::function<double(double)>& cdf, double x_max, int n) {
  require(n >= 1, Errc::config, "grid needs n >= 1");
  const double h = x_max / static_cast<double>(n);
  std::vector<double> values(static_cast<std::size_t>(n));
  double prev = cdf(0.0);
  for (int i = 0; i < n; ++i) {
    double next = cdf(static_cast<double>(i + 1) * h);
    values[static_cast<std::size_t>(i)] = std::max(0.0, (next - prev) / h);
    prev = next;
  }
  return GridMeasure(x_max, std::move(values), std::max(0.0, 1.0 - cdf(x_max)));
}

double GridMeasure::cdf(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= x_max_) return edge_mass_.back();
  const double hh = h();
  auto i = static_cast<std::size_t>(y / hh);
  if (i >= values_.size()) i = values_.size() - 1;
  const double a = static_cast<double>(i) * hh;
  return edge_mass_[i] + (y - a) * values_[i];
}

double GridMeasure::partial_mean(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= x_max_) return edge_moment_.back();
  const double hh = h();
  auto i = static_cast<std::size_t>(y / hh);
  if (i >= values_.size()) i = values_.size() - 1;
  const double a = static_cast<double>(i) * hh;
  return edge_moment_[i] + values_[i] * 0.5 * (y * y - a * a);
}

double GridMeasure::quantile(double u) const {
  require(u > 0.0 && u < 1.0, Errc::config, "quantile requires u in (0,1)");
  // mass beyond x_max is not localized; cap at x_max (tail is budgeted small)
  if (u >= edge_mass_.back()) return x_max_;
  auto it = std::lower_bound(edge_mass_.begin(), edge_mass_.end(), u);
  auto e = static_cast<std::size_t>(it - edge_mass_.begin());
  if (e == 0) return 0.0;
  const std::size_t i = e - 1;
  const double hh = h();
  return static_cast<double>(i) * hh + (u - edge_mass_[i]) / values_[i];
}

GridMeasure GridMeasure::renormalized() const {
  const double kept = edge_mass_.back();
  require(kept > 0.0, Errc::config, "cannot renormalize an all-tail grid measure");
  std::vector<double> v(values_);
  for (double& x : v) x /= kept;
  return GridMeasure(x_max_, std::move(v), 0.0);
}

void GridMeasure::require_small_tail(const char* op) const {
  require(tail_mass_ <= kTailBudget, Errc::tolerance,
          std::string(op) + ": grid tail_mass " + std::to_string(tail_mass_) +
              " exceeds budget 1e-6 (renormalize explicitly to proceed)");
}

// ---------------------------------------------------------------------------
// EmpiricalMeasure
// ---------------------------------------------------------------------------

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples) : samples_(std::move(samples)) {
  require(!samples_.empty(), Errc::config, "empirical measure needs at least one sample");
  for (double s : samples_)
    require(std::isfinite(s) && s >= 0.0, Errc::config, "samples must be finite and >= 0");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalMeasure::cdf_below(double y) const {
  auto it = std::lower_bound(samples_.begin(), samples_.end(), y);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalMeasure::cdf(double y) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), y);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalMeasure::partial_mean(double y) const {
  NeumaierSum acc;
  for (double s : samples_) {
    if (s >= y) break;
    acc.add(s);
  }
  return acc.value() / static_cast<double>(samples_.size());
}

double EmpiricalMeasure::quantile(double u) const {
  require(u > 0.0 && u < 1.0, Errc::config, "quantile requires u in (0,1)");
  const auto n = static_cast<double>(samples_.size());
  auto k = static_cast<std::size_t>(std::ceil(u * n)) - 1;
  if (k >= samples_.size()) k = samples_.size() - 1;
  return samples_[k];
}

// ---------------------------------------------------------------------------
// Free functions over Measure1D
// ---------------------------------------------------------------------------

double cdf(const Measure1D& m, double y) {
  if (y <= 0.0) return 0.0;
  return std::visit(
      [y](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GridMeasure>)
          return v.cdf(y);
        else
          return v.cdf_below(y);
      },
      m);
}

double cdf_closed(const Measure1D& m, double y) {
  if (y < 0.0) return 0.0;
  return std::visit([y](const auto& v) -> double { return v.cdf(y); }, m);
}

double partial_mean(const Measure1D& m, double y) {
  if (y <= 0.0) return 0.0;
  return std::visit([y](const auto& v) -> double { return v.partial_mean(y); }, m);
}

double quantile(const Measure1D& m, double u) {
  return std::visit([u](const auto& v) -> double { return v.quantile(u); }, m);
}

namespace {

template <class Fn>
double upper_median_scan(const Fn& cdf_at, double lo, double hi) {
  // inf{ y : F(y) > 1/2 } by bisection on the right-closed CDF
  double a = lo, b = hi;
  for (int i = 0; i < 200 && b - a > 1e-14 * std::max(1.0, hi); ++i) {
    double mid = 0.5 * (a + b);
    if (cdf_at(mid) > 0.5)
      b = mid;
    else
      a = mid;
  }
  return b;
}

}  // namespace

double median(const Measure1D& m) {
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) {
    double cum = 0.0;
    for (const Atom& atom : a->atoms()) {
      cum += atom.w;
      if (cum > 0.5) return atom.x;
    }
    return a->atoms().back().x;
  }
  if (const auto* e = std::get_if<EmpiricalMeasure>(&m)) {
    const auto& s = e->samples();
    return s[s.size() / 2];
  }
  const auto& g = std::get<GridMeasure>(m);
  require(g.cdf(g.x_max()) > 0.5, Errc::tolerance, "median: more than half the mass is in the tail");
  return upper_median_scan([&g](double y) { return g.cdf(y); }, 0.0, g.x_max());
}

double mean(const Measure1D& m) {
  if (const auto* g = std::get_if<GridMeasure>(&m)) {
    g->require_small_tail("mean");
    return g->partial_mean(g->x_max());
  }
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) return a->partial_mean(a->atoms().back().x + 1.0);
  const auto& e = std::get<EmpiricalMeasure>(m);
  return e.partial_mean(e.samples().back() + 1.0);
}

MomentProfile moments(const Measure1D& m) {
  MomentProfile p;
  NeumaierSum e, k;
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) {
    for (const Atom& atom : a->atoms()) {
      e.add(atom.w * atom.x);
      k.add(atom.w * atom.x * atom.x);
    }
  } else if (const auto* g = std::get_if<GridMeasure>(&m)) {
    g->require_small_tail("moments");
    const double h = g->h();
    for (int i = 0; i < g->n(); ++i) {
      const double a0 = i * h, b0 = a0 + h;
      const double v = g->values()[static_cast<std::size_t>(i)];
      e.add(v * 0.5 * (b0 * b0 - a0 * a0));
      k.add(v * (b0 * b0 * b0 - a0 * a0 * a0) / 3.0);
    }
  } else {
    const auto& s = std::get<EmpiricalMeasure>(m).samples();
    const double inv = 1.0 / static_cast<double>(s.size());
    for (double x : s) {
      e.add(inv * x);
      k.add(inv * x * x);
    }
  }
  p.mean = e.value();
  p.second_moment = k.value();
  require(std::isfinite(p.mean) && std::isfinite(p.second_moment), Errc::tolerance,
          "moments: non-finite moment");
  p.variance = p.second_moment - p.mean * p.mean;
  require(p.variance >= -1e-9, Errc::tolerance, "moments: negative variance beyond tolerance");
  if (p.variance < 0.0) p.variance = 0.0;
  p.median = median(m);
  return p;
}

double interval_mass(const Measure1D& m, double a, double b) {
  if (!(b > a) || b <= 0.0) return 0.0;
  // open interval: mass below b minus mass up to and including a
  double hi = cdf(m, b);
  double lo = a < 0.0 ? 0.0 : cdf_closed(m, a);
  return std::max(0.0, hi - lo);
}

EmpiricalMeasure sample(const Measure1D& m, std::uint64_t seed, int count) {
  require(count >= 1, Errc::config, "sample: count must be >= 1");
  UniformStream stream(seed);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(quantile(m, stream.next()));
  return EmpiricalMeasure(std::move(out));
}

bool is_singleton(const Measure1D& m) {
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) return a->size() == 1;
  if (const auto* e = std::get_if<EmpiricalMeasure>(&m))
    return e->samples().front() == e->samples().back();
  return false;
}

double max_support(const Measure1D& m) {
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) return a->atoms().back().x;
  if (const auto* e = std::get_if<EmpiricalMeasure>(&m)) return e->samples().back();
  const auto& g = std::get<GridMeasure>(m);
  const auto& v = g.values();
  for (std::size_t i = v.size(); i-- > 0;)
    if (v[i] > 0.0) return (static_cast<double>(i) + 1.0) * g.h();
  return 0.0;
}

GridMeasure exp_grid(double rate, double x_max, int n) {
  require(rate > 0.0, Errc::config, "exp_grid: rate must be positive");
  return GridMeasure::from_cdf([rate](double y) { return y <= 0.0 ? 0.0 : -std::expm1(-rate * y); },
                               x_max, n);
}

GridMeasure uniform_grid(double a, double b, double x_max, int n) {
  require(b > a && a >= 0.0, Errc::config, "uniform_grid: need 0 <= a < b");
  require(x_max >= b, Errc::config, "uniform_grid: x_max must cover the support");
  return GridMeasure::from_cdf(
      [a, b](double y) { return y <= a ? 0.0 : (y >= b ? 1.0 : (y - a) / (b - a)); }, x_max, n);
}

AtomicMeasure as_atomic(const EmpiricalMeasure& e) {
  const double w = 1.0 / static_cast<double>(e.size());
  std::vector<Atom> atoms;
  atoms.reserve(e.size());
  for (double s : e.samples()) atoms.push_back({s, w});
  return AtomicMeasure(std::move(atoms));
}

}  // namespace absdyn
