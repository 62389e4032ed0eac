#pragma once

// Probability measures on the nonnegative half-line in three interchangeable
// representations (atomic, grid-density, empirical-sample) with the CDF,
// partial-mean, quantile and moment queries the dynamics formulas consume.

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "absdyn/common.hpp"

namespace absdyn {

inline constexpr double kAtomMergeTol = 1e-9;   // absolute, on locations
inline constexpr double kAtomMassTol = 1e-12;   // |sum(weights) - 1|
inline constexpr double kGridMassTol = 1e-9;    // |h*sum(values) + tail - 1|
inline constexpr double kTailBudget = 1e-6;     // max tolerated grid tail mass

struct Atom {
  double x;
  double w;
};

/// Finitely supported probability measure. Locations strictly increasing,
/// weights positive and summing to one; construction sorts and merges
/// duplicates closer than kAtomMergeTol.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// mass of [0,y)
  double cdf_below(double y) const;
  /// mass of [0,y]
  double cdf(double y) const;
  /// integral of t over [0,y)
  double partial_mean(double y) const;
  double quantile(double u) const;
  double total_mass() const { return cum_.empty() ? 0.0 : cum_.back(); }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cum_;       // cumulative weights, cum_[k] = sum w_0..w_k
  std::vector<double> cum_mom_;   // cumulative first moments
};

/// Piecewise-constant density on [0,x_max): n uniform cells of width
/// h = x_max/n; values are cell masses divided by h. Mass beyond x_max is kept
/// explicitly as tail_mass and never silently renormalized.
class GridMeasure {
 public:
  GridMeasure(double x_max, std::vector<double> values, double tail_mass);

  /// Builds from a CDF; cell values are exact cell masses / h so the mass
  /// invariant holds to rounding.
  static GridMeasure from_cdf(const std::function<double(double)>& cdf, double x_max, int n);

  double x_max() const { return x_max_; }
  int n() const { return static_cast<int>(values_.size()); }
  double h() const { return x_max_ / static_cast<double>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double tail_mass() const { return tail_mass_; }
  double midpoint(int i) const { return (static_cast<double>(i) + 0.5) * h(); }

  double cdf(double y) const;  // continuous, so [0,y) and [0,y] agree
  double partial_mean(double y) const;
  double quantile(double u) const;

  /// Scales values by 1/(1 - tail_mass) and drops the tail. Opt-in; most
  /// operations instead fail loudly when the tail exceeds kTailBudget.
  GridMeasure renormalized() const;
  void require_small_tail(const char* op) const;

 private:
  double x_max_;
  std::vector<double> values_;
  double tail_mass_;
  std::vector<double> edge_mass_;    // CDF at cell edges, size n+1
  std::vector<double> edge_moment_;  // partial first moment at cell edges
};

/// Sorted i.i.d. sample set, used for Monte Carlo estimates of invariant laws.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<double> samples);

  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

  double cdf_below(double y) const;
  double cdf(double y) const;
  double partial_mean(double y) const;
  double quantile(double u) const;

 private:
  std::vector<double> samples_;
};

using Measure1D = std::variant<AtomicMeasure, GridMeasure, EmpiricalMeasure>;

struct MomentProfile {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double median = 0.0;
};

// Measure queries. `cdf` is the half-open mass m(y) = mu[0,y) used by the
// drift formulas; `cdf_closed` is the right-closed F(y) = mu[0,y] that
// quantiles invert. The two differ only at atoms.
double cdf(const Measure1D& m, double y);
double cdf_closed(const Measure1D& m, double y);

/// Y(y) = integral of t over [0,y).
double partial_mean(const Measure1D& m, double y);

/// Generalized inverse CDF: inf{ y : F(y) >= u }, u in (0,1).
double quantile(const Measure1D& m, double u);

/// Upper median inf{ y : F(y) > 1/2 }; for continuous measures this is the
/// ordinary median. (For atoms sitting exactly at cumulative 1/2 the upper
/// convention is used, so {(0,1/2),(1,1/2)} has median 1.)
double median(const Measure1D& m);

double mean(const Measure1D& m);
MomentProfile moments(const Measure1D& m);

/// mu((a,b)) for an open interval, clipped to the half-line.
double interval_mass(const Measure1D& m, double a, double b);

/// i.i.d. draws by inverse-CDF over a seeded stream; same seed+count always
/// yields the same sample.
EmpiricalMeasure sample(const Measure1D& m, std::uint64_t seed, int count);

/// True when the measure is a single point mass (the excluded trivial case of
/// the random map).
bool is_singleton(const Measure1D& m);

double max_support(const Measure1D& m);

// Reference families used throughout experiments and tests.
GridMeasure exp_grid(double rate, double x_max, int n);
GridMeasure uniform_grid(double a, double b, double x_max, int n);

AtomicMeasure as_atomic(const EmpiricalMeasure& e);

}  // namespace absdyn
