#pragma once

// p-Wasserstein distance on the half-line via the monotone (quantile)
// coupling, the iterated-decrease experiment, the interval (A,B,C) condition
// checker and the polynomial-rate recursion it implies.

#include <cstdint>
#include <span>
#include <vector>

#include "absdyn/measures.hpp"
#include "absdyn/transfer.hpp"

namespace absdyn {

inline constexpr int kQuantileQuadSamples = 1 << 14;

/// ( integral_0^1 |Q_rho(u) - Q_pi(u)|^p du )^(1/p). Exact on the merged
/// cumulative-weight breakpoints when both measures are discrete; composite
/// midpoint quadrature with 2^14 points otherwise.
double wasserstein_p(const Measure1D& rho, const Measure1D& pi, double p);

/// ( sum w |x-y|^p )^(1/p) of a finite coupling; upper-bounds the distance
/// between its marginals.
double wp_of_coupling(const Coupling2D& gamma, double p);

/// W_p(T*^k rho, T*^k pi) for k = 0..n.
std::vector<double> decrease_experiment(const Measure1D& rho, const Measure1D& pi,
                                        const Measure1D& mu, double p, int n,
                                        const PushOptions& opts = {});

struct AbcProbe {
  double x = 0.0, y = 0.0;
  double L = 0.0, U = 0.0;
  double margin_geom = 0.0;  // A|y-x| - max_{z in [L,U]} |2z-x-y|
  double margin_mass = 0.0;  // mu(L,U) - C*mu(x,y)^B
};

struct ABCWitness {
  bool pass = false;
  double A = 0.0, B = 0.0, C = 0.0;
  std::vector<AbcProbe> probes;  // best candidate per probe
  AbcProbe violation;            // first failing probe when !pass
};

/// Margins of the best candidate interval for one probe (x,y): the centered
/// band L = x+kappa*d, U = y-kappa*d with kappa = (1-A)/2, and the shifted
/// candidate L = x+c of the exponential construction.
AbcProbe abc_probe(const Measure1D& mu, double A, double B, double C, double x, double y,
                   double shift_c = 1.0);

/// Draws probe intervals with endpoints uniform on the quantile-trimmed
/// support [Q(1e-3), Q(1-1e-3)] and verifies both margins on each.
ABCWitness abc_check(const Measure1D& mu, double A, double B, double C, int probes,
                     std::uint64_t seed, double shift_c = 1.0, int threads = 1);

struct RateBound {
  std::vector<double> iterates;      // v_{k+1} = v_k - c v_k^{1+B/p}, clamped at 0
  std::vector<double> closed_bound;  // (v_0^{-B/p} + c (B/p) k)^{-p/B}
  double c = 0.0;                    // C (1 - A^p)
};

/// One-step contraction recursion on v = W_p^p starting from v_0 = w0,
/// together with the closed-form bound obtained from the 1/v-type induction
/// u_{k+1} >= u_k + (B/p) c for u = v^{-B/p}.
RateBound rate_bound(double w0, double A, double B, double C, double p, int n);

/// Least-squares slope of log w_k against log k over the second half of the
/// sequence (indices are the k's). Entries must be strictly positive.
double fit_poly_rate(std::span<const double> w);

}  // namespace absdyn
