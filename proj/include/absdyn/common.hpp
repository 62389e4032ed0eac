#pragma once

// Shared infrastructure: error reporting, deterministic RNG streams and a few
// numeric helpers used across the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace absdyn {

/// Error categories; the CLI maps them onto distinct process exit codes.
enum class Errc {
  config = 2,     // bad arguments / preconditions / incompatible representations
  io = 3,         // missing or malformed input files
  tolerance = 4,  // an invariant or tolerance was violated
  cap = 5,        // an iteration or size cap was exceeded
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

// ---------------------------------------------------------------------------
// Deterministic uniform stream.
//
// mt19937_64 has a fully specified sequence, and the mapping below uses only
// exact dyadic arithmetic, so identical seeds give identical doubles on every
// conforming platform. Values lie strictly inside (0,1) so they can be fed to
// quantile functions directly.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  /// Independent substream; used to make per-trial results order-independent.
  static UniformStream substream(std::uint64_t seed, std::uint64_t stream) {
    return UniformStream(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
  }

  /// Uniform double in the open interval (0,1).
  double next() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Numerics
// ---------------------------------------------------------------------------

/// Neumaier compensated summation; keeps long reductions reproducible at the
/// 1e-12 level regardless of accumulation order issues.
class NeumaierSum {
 public:
  void add(double x) {
    double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double sum_compensated(const std::vector<double>& xs) {
  NeumaierSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

/// Bisection for a continuous function with f(lo), f(hi) of opposite sign.
/// Returns a root within `tol` of the true crossing.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require((flo < 0.0) != (fhi < 0.0), Errc::config, "bisect: no sign change on interval");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Runs fn(i) for i in [0,count) on up to `threads` workers. Results must be
/// written to per-index slots by the callee; the partition is deterministic
/// and the outcome is independent of the worker count.
inline void parallel_for_indexed(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += nw) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace absdyn
