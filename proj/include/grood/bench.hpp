#pragma once

// Micro-benchmarks and operation counting for the rank-one update.
//
// Counting runs the scalar-generic update kernel on CountedScalar, a double
// wrapper that tallies arithmetic into a process-wide counter while a
// CountingScope is alive. Following the usual BLAS-2 accounting, a fused
// multiply-add (acc + x*y inside dot/axpy/ger) counts as a single
// multiplication. Counting is single-threaded: the counter is unsynchronized.

#include <cmath>
#include <cstdint>
#include <vector>

#include "grood/core.hpp"
#include "grood/streaming.hpp"

namespace grood::bench {

struct OpCount {
  std::uint64_t mults = 0;
  std::uint64_t adds = 0;
  std::uint64_t divs_sqrts = 0;

  std::uint64_t mults_adds() const noexcept { return mults + adds; }
  std::uint64_t total() const noexcept { return mults + adds + divs_sqrts; }
  bool operator==(const OpCount&) const = default;
};

/// Componentwise a - b; requires a >= b.
OpCount operator-(const OpCount& a, const OpCount& b);

class OpCounter {
public:
  static OpCount& counts() noexcept { return counts_; }
  static bool enabled() noexcept { return enabled_; }

private:
  friend class CountingScope;
  static inline OpCount counts_{};
  static inline bool enabled_ = false;
};

/// Resets and enables counting for its lifetime. Not reentrant.
class CountingScope {
public:
  CountingScope() noexcept {
    OpCounter::counts_ = {};
    OpCounter::enabled_ = true;
  }
  ~CountingScope() { OpCounter::enabled_ = false; }
  CountingScope(const CountingScope&) = delete;
  CountingScope& operator=(const CountingScope&) = delete;

  OpCount counts() const noexcept { return OpCounter::counts_; }
};

class CountedScalar {
public:
  CountedScalar() = default;
  CountedScalar(double v) : v_(v) {}  // NOLINT: implicit by design of a scalar

  double value() const noexcept { return v_; }

  friend CountedScalar operator+(CountedScalar a, CountedScalar b) {
    tick(&OpCount::adds);
    return a.v_ + b.v_;
  }
  friend CountedScalar operator-(CountedScalar a, CountedScalar b) {
    tick(&OpCount::adds);
    return a.v_ - b.v_;
  }
  friend CountedScalar operator*(CountedScalar a, CountedScalar b) {
    tick(&OpCount::mults);
    return a.v_ * b.v_;
  }
  friend CountedScalar operator/(CountedScalar a, CountedScalar b) {
    tick(&OpCount::divs_sqrts);
    return a.v_ / b.v_;
  }
  friend CountedScalar operator-(CountedScalar a) { return -a.v_; }

  friend bool operator==(CountedScalar a, CountedScalar b) { return a.v_ == b.v_; }
  friend auto operator<=>(CountedScalar a, CountedScalar b) { return a.v_ <=> b.v_; }

  friend CountedScalar sqrt(CountedScalar a) {
    tick(&OpCount::divs_sqrts);
    return std::sqrt(a.v_);
  }
  friend CountedScalar abs(CountedScalar a) { return std::abs(a.v_); }
  friend double to_double(CountedScalar a) { return a.v_; }
  friend CountedScalar muladd(CountedScalar acc, CountedScalar x, CountedScalar y) {
    tick(&OpCount::mults);
    return acc.v_ + x.v_ * y.v_;
  }

private:
  static void tick(std::uint64_t OpCount::*field) noexcept {
    if (OpCounter::enabled()) ++(OpCounter::counts().*field);
  }
  double v_ = 0.0;
};

struct CountedRun {
  OpCount counts;
  Matrix u_new;
  Matrix w_new;
};

/// Runs the geodesic update (quantities, U update, W update) on CountedScalar.
/// With `counting` false no CountingScope is opened and the counts stay zero.
CountedRun run_counted_update(const Factorization& f, const RankOneUpdate& up,
                              bool counting = true, const UpdateOptions& opts = {});

/// Counts for one geodesic update on a random instance of size n x p (n > p).
OpCount count_update_flops(std::size_t n, std::size_t p, std::uint64_t seed = 1);

/// Operations that scale with n at size (n, p): count(2n, p) - count(n, p),
/// exact because the count is affine in n for fixed p.
OpCount n_proportional_flops(std::size_t n, std::size_t p, std::uint64_t seed = 1);

struct BenchRow {
  std::size_t n;
  std::size_t p;
  TrackMethod method;
  double median_ns;
  double mean_ns;
};

/// Times `reps` independent random updates of one random n x p factorization.
/// Only the update call is inside the timed region.
BenchRow time_updates(std::size_t n, std::size_t p, std::size_t reps,
                      TrackMethod method, std::uint64_t seed);

}  // namespace grood::bench
