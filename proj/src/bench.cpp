#include "grood/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "grood/baselines.hpp"
#include "grood/random.hpp"

namespace grood::bench {

OpCount operator-(const OpCount& a, const OpCount& b) {
  return OpCount{a.mults - b.mults, a.adds - b.adds, a.divs_sqrts - b.divs_sqrts};
}

namespace {

using CMatrix = linalg::BasicMatrix<CountedScalar>;
using CVector = linalg::BasicVector<CountedScalar>;

CMatrix to_counted(const Matrix& m) {
  CMatrix out(m.rows(), m.cols());
  std::copy(m.span().begin(), m.span().end(), out.span().begin());
  return out;
}

CVector to_counted(const Vector& v) {
  CVector out(v.size());
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

Matrix to_plain(const CMatrix& m) {
  Matrix out(m.rows(), m.cols());
  std::transform(m.span().begin(), m.span().end(), out.span().begin(),
                 [](CountedScalar x) { return x.value(); });
  return out;
}

void counted_update(CMatrix& u, CMatrix& w, MatrixStructure kind, const CVector& a,
                    const CVector& b, const UpdateOptions& opts) {
  const auto qty =
      detail::compute_quantities(u, w, kind, a, b, opts.deflation_tol, opts.reorth);
  detail::apply_u_update(u, qty);
  detail::apply_w_update(w, qty, b);
}

}  // namespace

CountedRun run_counted_update(const Factorization& f, const RankOneUpdate& up,
                              bool counting, const UpdateOptions& opts) {
  CMatrix u = to_counted(f.u().mat());
  CMatrix w = to_counted(f.w());
  const CVector a = to_counted(up.a);
  const CVector b = to_counted(up.b);

  CountedRun run;
  if (counting) {
    CountingScope scope;
    counted_update(u, w, f.w_kind(), a, b, opts);
    run.counts = scope.counts();
  } else {
    counted_update(u, w, f.w_kind(), a, b, opts);
  }
  run.u_new = to_plain(u);
  run.w_new = to_plain(w);
  return run;
}

OpCount count_update_flops(std::size_t n, std::size_t p, std::uint64_t seed) {
  require_dims(n > p && p >= 1, "count_update_flops: need n > p >= 1");
  random::Rng rng(seed);
  const Factorization f =
      random::random_factorization(n, p, rng, MatrixStructure::UpperTriangular);
  const RankOneUpdate up = random::random_update(n, p, rng);
  return run_counted_update(f, up).counts;
}

OpCount n_proportional_flops(std::size_t n, std::size_t p, std::uint64_t seed) {
  return count_update_flops(2 * n, p, seed) - count_update_flops(n, p, seed);
}

BenchRow time_updates(std::size_t n, std::size_t p, std::size_t reps,
                      TrackMethod method, std::uint64_t seed) {
  require_dims(n > p && p >= 1, "time_updates: need n > p >= 1");
  if (reps == 0) throw_error(ErrorKind::InvalidArgument, "time_updates: reps must be positive");

  random::Rng rng(seed);
  const Factorization f =
      random::random_factorization(n, p, rng, MatrixStructure::UpperTriangular);
  std::vector<RankOneUpdate> updates;
  updates.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) updates.push_back(random::random_update(n, p, rng));

  using Clock = std::chrono::steady_clock;
  std::vector<double> ns;
  ns.reserve(reps);
  double sink = 0.0;
  // The first call pays one-time allocator and page-fault costs; it is run
  // untimed on an extra update.
  const RankOneUpdate warmup = random::random_update(n, p, rng);
  for (std::size_t r = 0; r <= reps; ++r) {
    const RankOneUpdate& up = r == 0 ? warmup : updates[r - 1];
    Factorization work = f;
    const auto t0 = Clock::now();
    switch (method) {
      case TrackMethod::Geodesic: {
        UpdateOutcome o = grood_update(std::move(work), up);
        sink += o.factorization.w()(0, 0);
        break;
      }
      case TrackMethod::Brand: {
        BrandResult r = brand_update_factorization(work, up);
        sink += r.w(0, 0);
        break;
      }
      case TrackMethod::Kaufman: {
        KaufmanResult r = kaufman_update(work, up);
        sink += r.r(0, 0);
        break;
      }
      case TrackMethod::Refactor: {
        Matrix x = work.product();
        linalg::ger(x, 1.0, up.a, up.b);
        sink += full_refactor(x).w()(0, 0);
        break;
      }
    }
    const auto t1 = Clock::now();
    if (r == 0) continue;
    ns.push_back(static_cast<double>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
  }
  // Keeps the results observable.
  volatile double keep = sink;
  (void)keep;

  const double mean = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(reps);
  std::vector<double> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = reps / 2;
  const double median =
      reps % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return BenchRow{n, p, method, median, mean};
}

}  // namespace grood::bench
