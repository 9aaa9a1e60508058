#include <doctest.h>

#include "grood/bench.hpp"
#include "support.hpp"

using namespace grood;
using grood::bench::OpCount;

TEST_CASE("counted scalar arithmetic") {
  using S = bench::CountedScalar;
  bench::CountingScope scope;
  S x = 2.0, y = 3.0;
  S z = x * y + x / y - sqrt(y);
  z = muladd(z, x, y);
  (void)abs(-z);
  (void)(x < y);
  const OpCount c = scope.counts();
  CHECK(c.mults == 2);
  CHECK(c.adds == 2);
  CHECK(c.divs_sqrts == 2);
}

TEST_CASE("counting disabled gives zero counts and identical results") {
  auto rng = test::rng_for(70);
  const auto f = random::random_factorization(80, 6, rng, MatrixStructure::General);
  const auto up = random::random_update(80, 6, rng);
  const auto off = bench::run_counted_update(f, up, false);
  CHECK(off.counts == OpCount{});
  const auto on = bench::run_counted_update(f, up, true);
  CHECK(on.counts.total() > 0);
  CHECK(on.u_new == off.u_new);
  CHECK(on.w_new == off.w_new);

  const auto plain = grood_update(f, up);
  CHECK(on.u_new == plain.factorization.u().mat());
  CHECK(on.w_new == plain.factorization.w());
}

TEST_CASE("n-proportional count is 4np + 4n") {
  for (auto [n, p] : {std::pair<std::size_t, std::size_t>{1000, 1}, {1000, 20}, {500, 10}}) {
    const OpCount d = bench::n_proportional_flops(n, p);
    const double expected = 4.0 * n * p + 4.0 * n;
    CHECK(std::abs(static_cast<double>(d.mults_adds()) - expected) <= 2.0 * n);
    CHECK(d.divs_sqrts == 0);
  }
}

TEST_CASE("n-terms scale by two") {
  const OpCount a = bench::n_proportional_flops(500, 10);
  const OpCount b = bench::n_proportional_flops(1000, 10);
  CHECK(b.mults_adds() == 2 * a.mults_adds());
}

TEST_CASE("count is affine in n") {
  const OpCount c1 = bench::count_update_flops(300, 7);
  const OpCount c2 = bench::count_update_flops(600, 7);
  const OpCount c3 = bench::count_update_flops(900, 7);
  CHECK((c3 - c2) == (c2 - c1));
}

TEST_CASE("time_updates") {
  const auto row = bench::time_updates(200, 5, 5, TrackMethod::Geodesic, 1);
  CHECK(row.n == 200);
  CHECK(row.p == 5);
  CHECK(row.median_ns > 0);
  CHECK(row.mean_ns > 0);
  for (auto m : {TrackMethod::Brand, TrackMethod::Kaufman, TrackMethod::Refactor})
    CHECK(bench::time_updates(100, 4, 3, m, 2).median_ns > 0);
  CHECK_THROWS_AS(bench::time_updates(200, 5, 0, TrackMethod::Geodesic, 1), Error);
  CHECK_THROWS_AS(bench::count_update_flops(5, 5), Error);
}
