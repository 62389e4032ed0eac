#include "absdyn/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

namespace absdyn {

// ---------------------------------------------------------------------------
// Coupling2D
// ---------------------------------------------------------------------------

Coupling2D::Coupling2D(std::vector<CouplingAtom> atoms) {
  require(!atoms.empty(), Errc::config, "coupling needs at least one atom");
  std::sort(atoms.begin(), atoms.end(), [](const CouplingAtom& l, const CouplingAtom& r) {
    return l.x != r.x ? l.x < r.x : l.y < r.y;
  });
  NeumaierSum mass;
  for (const CouplingAtom& a : atoms) {
    require(a.x >= 0.0 && a.y >= 0.0, Errc::config, "coupling atoms must lie in the quarter-plane");
    require(std::isfinite(a.w) && a.w >= 0.0, Errc::config, "coupling weights must be >= 0");
    if (a.w == 0.0) continue;
    if (!atoms_.empty() && a.x - atoms_.back().x <= kAtomMergeTol &&
        std::abs(a.y - atoms_.back().y) <= kAtomMergeTol) {
      CouplingAtom& b = atoms_.back();
      const double w = b.w + a.w;
      b.x = (b.x * b.w + a.x * a.w) / w;
      b.y = (b.y * b.w + a.y * a.w) / w;
      b.w = w;
    } else {
      atoms_.push_back(a);
    }
    mass.add(a.w);
  }
  require(!atoms_.empty(), Errc::config, "coupling has no positive-weight atoms");
  require(std::abs(mass.value() - 1.0) <= kAtomMassTol, Errc::tolerance,
          "coupling weights must sum to 1 within 1e-12");
}

AtomicMeasure Coupling2D::marginal_x() const {
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const CouplingAtom& a : atoms_) atoms.push_back({a.x, a.w});
  return AtomicMeasure(std::move(atoms));
}

AtomicMeasure Coupling2D::marginal_y() const {
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const CouplingAtom& a : atoms_) atoms.push_back({a.y, a.w});
  return AtomicMeasure(std::move(atoms));
}

Coupling2D Coupling2D::product(const AtomicMeasure& rho, const AtomicMeasure& pi) {
  std::vector<CouplingAtom> atoms;
  atoms.reserve(rho.size() * pi.size());
  for (const Atom& a : rho.atoms())
    for (const Atom& b : pi.atoms()) atoms.push_back({a.x, b.x, a.w * b.w});
  return Coupling2D(std::move(atoms));
}

// ---------------------------------------------------------------------------
// push_theta
// ---------------------------------------------------------------------------

namespace {

AtomicMeasure push_theta_atomic(const AtomicMeasure& pi, double theta) {
  std::vector<Atom> atoms;
  atoms.reserve(pi.size());
  for (const Atom& a : pi.atoms()) atoms.push_back({std::abs(a.x - theta), a.w});
  return AtomicMeasure(std::move(atoms));
}

// Exact image of the piecewise-constant density: the output cell [ih,(i+1)h)
// collects the input mass of (theta+ih, theta+(i+1)h) and the reflected
// interval (theta-(i+1)h, theta-ih).
GridMeasure push_theta_grid(const GridMeasure& pi, double theta) {
  pi.require_small_tail("push_theta");
  require(theta <= pi.x_max(), Errc::config,
          "push_theta: image would need x_max >= theta; enlarge the grid");
  const int n = pi.n();
  const double h = pi.h();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double a = theta + i * h;
    const double b = a + h;
    const double ra = theta - (i + 1) * h;
    const double rb = theta - i * h;
    double m = pi.cdf(b) - pi.cdf(a);
    if (rb > 0.0) m += pi.cdf(rb) - pi.cdf(std::max(ra, 0.0));
    out[static_cast<std::size_t>(i)] = std::max(0.0, m) / h;
  }
  // mass beyond x_max is not localized, so it stays recorded as tail
  return GridMeasure(pi.x_max(), std::move(out), pi.tail_mass());
}

}  // namespace

Measure1D push_theta(const Measure1D& pi, double theta) {
  require(theta >= 0.0, Errc::config, "push_theta: theta must be >= 0");
  if (const auto* a = std::get_if<AtomicMeasure>(&pi)) return push_theta_atomic(*a, theta);
  if (const auto* g = std::get_if<GridMeasure>(&pi)) return push_theta_grid(*g, theta);
  const auto& e = std::get<EmpiricalMeasure>(pi);
  std::vector<double> s;
  s.reserve(e.size());
  for (double x : e.samples()) s.push_back(std::abs(x - theta));
  return EmpiricalMeasure(std::move(s));
}

// ---------------------------------------------------------------------------
// push_avg
// ---------------------------------------------------------------------------

namespace {

AtomicMeasure push_avg_atomic(const AtomicMeasure& pi, const AtomicMeasure& mu,
                              const PushOptions& opts) {
  require(pi.size() * mu.size() <= opts.atom_cap * 4, Errc::cap,
          "push_avg: atomic support would exceed the cap");
  std::vector<Atom> atoms;
  atoms.reserve(pi.size() * mu.size());
  for (const Atom& t : mu.atoms())
    for (const Atom& a : pi.atoms()) atoms.push_back({std::abs(a.x - t.x), a.w * t.w});
  return AtomicMeasure(std::move(atoms));
}

// Same-lattice quadrature: mu replaced by cell masses at cell midpoints, each
// midpoint push evaluated exactly. Midpoints sit on half-cell offsets, so the
// shifted intervals split every input cell exactly in half.
GridMeasure push_avg_grid(const GridMeasure& pi, const GridMeasure& mu) {
  require(pi.n() == mu.n() && pi.x_max() == mu.x_max(), Errc::config,
          "push_avg: grid measures must share x_max and n");
  pi.require_small_tail("push_avg");
  mu.require_small_tail("push_avg");
  const int n = pi.n();
  const double h = pi.h();
  const std::vector<double>& pv = pi.values();
  const std::vector<double>& mv = mu.values();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  const double* mp = mv.data();
  const double* pp = pv.data();
  for (int i = 0; i < n; ++i) {
    // four clipped correlation sums; written as plain dot products
    double s = 0.0;
    for (int j = 0; j < n - i; ++j) s += mp[j] * pp[i + j];
    for (int j = 0; j < n - i - 1; ++j) s += mp[j] * pp[i + j + 1];
    for (int j = i + 1; j < n; ++j) s += mp[j] * pp[j - i - 1];
    for (int j = i; j < n; ++j) s += mp[j] * pp[j - i];
    out[static_cast<std::size_t>(i)] = 0.5 * h * s;
  }
  NeumaierSum kept;
  for (double v : out) kept.add(h * v);
  return GridMeasure(pi.x_max(), std::move(out), std::max(0.0, 1.0 - kept.value()));
}

// atomic mu, grid pi: exact mixture of single-theta pushforwards
GridMeasure push_avg_grid_atomic_mu(const GridMeasure& pi, const AtomicMeasure& mu) {
  std::vector<double> out(static_cast<std::size_t>(pi.n()), 0.0);
  for (const Atom& t : mu.atoms()) {
    const GridMeasure pushed = push_theta_grid(pi, t.x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.w * pushed.values()[i];
  }
  const double h = pi.h();
  NeumaierSum kept;
  for (double v : out) kept.add(h * v);
  return GridMeasure(pi.x_max(), std::move(out), std::max(0.0, 1.0 - kept.value()));
}

// grid mu, atomic pi: the image is absolutely continuous; cell k receives
// sum_i w_i * mu({theta : |x_i - theta| in cell k}).
GridMeasure push_avg_atomic_pi(const AtomicMeasure& pi, const GridMeasure& mu) {
  mu.require_small_tail("push_avg");
  const int n = mu.n();
  const double h = mu.h();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const Atom& a : pi.atoms()) {
    for (int k = 0; k < n; ++k) {
      const double lo = k * h;
      const double hi = lo + h;
      double m = mu.cdf(a.x + hi) - mu.cdf(a.x + lo);
      const double rb = a.x - lo;
      if (rb > 0.0) m += mu.cdf(rb) - mu.cdf(std::max(a.x - hi, 0.0));
      out[static_cast<std::size_t>(k)] += a.w * std::max(0.0, m);
    }
  }
  for (double& v : out) v /= h;
  NeumaierSum kept;
  for (double v : out) kept.add(h * v);
  return GridMeasure(mu.x_max(), std::move(out), std::max(0.0, 1.0 - kept.value()));
}

AtomicMeasure to_atomic(const Measure1D& m) {
  if (const auto* a = std::get_if<AtomicMeasure>(&m)) return *a;
  return as_atomic(std::get<EmpiricalMeasure>(m));
}

}  // namespace

Measure1D push_avg(const Measure1D& pi, const Measure1D& mu, const PushOptions& opts) {
  const bool pi_grid = std::holds_alternative<GridMeasure>(pi);
  const bool mu_grid = std::holds_alternative<GridMeasure>(mu);
  if (pi_grid && mu_grid) return push_avg_grid(std::get<GridMeasure>(pi), std::get<GridMeasure>(mu));
  if (!pi_grid && !mu_grid) return push_avg_atomic(to_atomic(pi), to_atomic(mu), opts);
  require(!opts.strict, Errc::config, "push_avg: mixed atomic/grid representations rejected in strict mode");
  if (pi_grid) return push_avg_grid_atomic_mu(std::get<GridMeasure>(pi), to_atomic(mu));
  return push_avg_atomic_pi(to_atomic(pi), std::get<GridMeasure>(mu));
}

namespace {

// Weight-preserving binning used when iterated atomic supports blow up.
AtomicMeasure coarsen(const AtomicMeasure& m, double resolution) {
  std::map<long long, Atom> bins;
  for (const Atom& a : m.atoms()) {
    const auto key = static_cast<long long>(std::floor(a.x / resolution));
    auto [it, fresh] = bins.emplace(key, Atom{a.x * a.w, a.w});
    if (!fresh) {
      it->second.x += a.x * a.w;
      it->second.w += a.w;
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(bins.size());
  for (auto& [key, a] : bins) atoms.push_back({a.x / a.w, a.w});
  return AtomicMeasure(std::move(atoms));
}

}  // namespace

std::vector<Measure1D> iterate_push(const Measure1D& pi, const Measure1D& mu, int n,
                                    const PushOptions& opts) {
  require(n >= 1, Errc::config, "iterate_push: n must be >= 1");
  std::vector<Measure1D> seq;
  seq.reserve(static_cast<std::size_t>(n) + 1);
  seq.push_back(pi);
  for (int k = 0; k < n; ++k) {
    Measure1D next = push_avg(seq.back(), mu, opts);
    if (auto* a = std::get_if<AtomicMeasure>(&next)) {
      if (a->size() > opts.atom_cap) {
        const double span = a->atoms().back().x - a->atoms().front().x;
        const double res = std::max(1e-6 * span, 1e-300);
        std::cerr << "# iterate_push: coarsening " << a->size() << " atoms at resolution " << res
                  << " (step " << k + 1 << ")\n";
        next = coarsen(*a, res);
      }
    } else if (auto* g = std::get_if<GridMeasure>(&next)) {
      if (g->tail_mass() > kTailBudget) {
        require(opts.renormalize_tail, Errc::tolerance,
                "iterate_push: grid tail exceeded budget (pass renormalize_tail to opt in)");
        next = g->renormalized();
      }
    }
    seq.push_back(std::move(next));
  }
  return seq;
}

Coupling2D coupling_push(const Coupling2D& gamma, const AtomicMeasure& mu) {
  std::vector<CouplingAtom> atoms;
  atoms.reserve(gamma.atoms().size() * mu.size());
  for (const Atom& t : mu.atoms())
    for (const CouplingAtom& a : gamma.atoms())
      atoms.push_back({std::abs(a.x - t.x), std::abs(a.y - t.x), a.w * t.w});
  return Coupling2D(std::move(atoms));
}

double subtraction_term(const Coupling2D& gamma, const AtomicMeasure& mu, double p) {
  require(p >= 1.0, Errc::config, "subtraction_term: p must be >= 1");
  NeumaierSum acc;
  for (const Atom& t : mu.atoms()) {
    for (const CouplingAtom& a : gamma.atoms()) {
      const double lo = std::min(a.x, a.y);
      const double hi = std::max(a.x, a.y);
      if (t.x > lo && t.x < hi) {
        const double before = std::pow(hi - lo, p);
        const double after = std::pow(std::abs(a.x + a.y - 2.0 * t.x), p);
        acc.add(t.w * a.w * (before - after));
      }
    }
  }
  return acc.value();
}

}  // namespace absdyn
