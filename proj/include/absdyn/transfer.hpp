#pragma once

// Measure-level operators: the pushforward under x -> |x - theta|, its
// mu-average, iteration, and the simultaneous pushforward of finite couplings
// on the quarter-plane together with the exact contraction bookkeeping term.

#include <vector>

#include "absdyn/measures.hpp"

namespace absdyn {

inline constexpr std::size_t kAtomCap = 100'000;

struct CouplingAtom {
  double x;
  double y;
  double w;
};

/// Finitely supported joint measure on the quarter-plane with probability
/// mass one; marginals are valid atomic measures.
class Coupling2D {
 public:
  explicit Coupling2D(std::vector<CouplingAtom> atoms);

  const std::vector<CouplingAtom>& atoms() const { return atoms_; }
  AtomicMeasure marginal_x() const;
  AtomicMeasure marginal_y() const;

  /// Independent product of two atomic measures.
  static Coupling2D product(const AtomicMeasure& rho, const AtomicMeasure& pi);

 private:
  std::vector<CouplingAtom> atoms_;
};

struct PushOptions {
  bool strict = false;            // reject lossy representation conversions
  bool renormalize_tail = false;  // opt-in: fold grid tail back each step
  std::size_t atom_cap = kAtomCap;
};

/// Pushforward under a single map. Atomic: atoms move to |x-theta| and merge.
/// Grid: exact image of the piecewise-constant density on the same grid
/// (requires theta <= x_max so the image fits).
Measure1D push_theta(const Measure1D& pi, double theta);

/// mu-average of push_theta. atomic x atomic and same-grid x grid are exact
/// in their discretization; mixed combinations are computed exactly from the
/// transition kernel unless opts.strict rejects them.
Measure1D push_avg(const Measure1D& pi, const Measure1D& mu, const PushOptions& opts = {});

/// The sequence pi, T*pi, ..., T*^n pi.
std::vector<Measure1D> iterate_push(const Measure1D& pi, const Measure1D& mu, int n,
                                    const PushOptions& opts = {});

/// Simultaneous pushforward (x,y) -> (|x-theta|, |y-theta|) averaged over an
/// atomic reference measure.
Coupling2D coupling_push(const Coupling2D& gamma, const AtomicMeasure& mu);

/// Exact double sum of (|y-x|^p - |x+y-2theta|^p) over coupling atoms with
/// theta strictly between x and y. Satisfies
///   sum |x-y|^p over coupling_push(gamma,mu) = sum over gamma - this term.
double subtraction_term(const Coupling2D& gamma, const AtomicMeasure& mu, double p);

}  // namespace absdyn
