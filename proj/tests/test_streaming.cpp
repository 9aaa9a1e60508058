#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grood/grassmann.hpp"
#include "grood/streaming.hpp"
#include "support.hpp"

using namespace grood;
using grood::test::vec;

namespace {

std::vector<RankOneUpdate> random_stream(std::size_t count, std::size_t n, std::size_t p,
                                         random::Rng& rng) {
  std::vector<RankOneUpdate> ups;
  for (std::size_t i = 0; i < count; ++i) {
    auto up = random::random_update(n, p, rng);
    // Keep X at a steady scale over long streams.
    linalg::scal(0.1, up.a.span());
    ups.push_back(std::move(up));
  }
  return ups;
}

}  // namespace

TEST_CASE("empty stream") {
  const auto f = test::hand_factorization();
  const auto res = track(f, {}, {});
  CHECK(res.reports.empty());
  CHECK(res.factorization.u().mat() == f.u().mat());
  CHECK(res.factorization.w() == f.w());
}

TEST_CASE("single hand-case update") {
  const std::vector<RankOneUpdate> ups{test::hand_update()};
  const auto res = track(test::hand_factorization(), ups, {});
  REQUIRE(res.reports.size() == 1);
  CHECK(res.reports[0].step_index == 0);
  CHECK(res.reports[0].kind == UpdateKind::Generic);
  CHECK(res.reports[0].distance == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  REQUIRE(res.reports[0].recon_residual.has_value());
  CHECK(*res.reports[0].recon_residual <= 1e-15);
  CHECK(res.reports[0].wall_time_ns >= 0);
}

TEST_CASE("all methods agree after a stream") {
  auto rng = test::rng_for(50);
  const std::size_t n = 100, p = 8;
  const auto f0 = random::random_factorization(n, p, rng);
  const auto ups = random_stream(100, n, p, rng);
  TrackerConfig cfg;
  const auto geo = track(f0, ups, cfg);
  for (auto m : {TrackMethod::Refactor, TrackMethod::Brand, TrackMethod::Kaufman}) {
    cfg.method = m;
    const auto other = track(f0, ups, cfg);
    CHECK(subspace_distance(geo.factorization.u(), other.factorization.u()) <= 1e-7);
    CHECK(*other.reports.back().recon_residual <= 1e-10);
    CHECK(other.reports[3].distance ==
          doctest::Approx(geo.reports[3].distance).epsilon(1e-6));
  }
  CHECK(*geo.reports.back().recon_residual <= 1e-10);

  cfg.record_distances = false;
  cfg.method = TrackMethod::Brand;
  for (const auto& r : track(f0, ups, cfg).reports) CHECK(r.distance == 0.0);
}

TEST_CASE("re-orthogonalization resets drift") {
  auto rng = test::rng_for(51);
  const std::size_t n = 60, p = 5;
  const auto f0 = random::random_factorization(n, p, rng);
  const auto ups = random_stream(60, n, p, rng);
  TrackerConfig cfg;
  cfg.reorth_every = 10;
  const auto res = track(f0, ups, cfg);
  for (const auto& r : res.reports) {
    if ((r.step_index + 1) % 10 == 0) CHECK(r.ortho_drift <= 1e-13);
    CHECK(r.ortho_drift >= 0.0);
    CHECK(*r.recon_residual <= 1e-11);
  }
}

TEST_CASE("deterministic except timing") {
  auto rng = test::rng_for(52);
  const auto f0 = random::random_factorization(30, 3, rng);
  const auto ups = random_stream(20, 30, 3, rng);
  TrackerConfig cfg;
  cfg.reorth_every = 7;
  const auto a = track(f0, ups, cfg);
  const auto b = track(f0, ups, cfg);
  CHECK(a.factorization.u().mat() == b.factorization.u().mat());
  CHECK(a.factorization.w() == b.factorization.w());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].distance == b.reports[i].distance);
    CHECK(a.reports[i].ortho_drift == b.reports[i].ortho_drift);
    CHECK(a.reports[i].recon_residual == b.reports[i].recon_residual);
    CHECK(a.reports[i].kind == b.reports[i].kind);
  }
}

TEST_CASE("errors carry the step index") {
  auto rng = test::rng_for(53);
  const auto f0 = random::random_factorization(10, 2, rng);
  std::vector<RankOneUpdate> ups = random_stream(2, 10, 2, rng);
  ups.push_back({vec({0, 0, 0, 0, 0, 0, 0, 0, 0, 0}), vec({0, 0})});  // NoOp
  // a = -X e1 with b = e1 removes the first column: deflating at step 3.
  ups.push_back({Vector(10), vec({1, 0})});
  for (auto method : {TrackMethod::Geodesic, TrackMethod::Kaufman}) {
    TrackerConfig cfg;
    cfg.method = method;
    const auto prefix = track(f0, std::span(ups).first(3), cfg);
    CHECK(prefix.reports[2].kind == UpdateKind::NoOp);
    const Matrix x = prefix.factorization.product();
    for (std::size_t i = 0; i < 10; ++i) ups[3].a[i] = -x(i, 0);
    try {
      track(f0, ups, cfg);
      FAIL("expected TrackError");
    } catch (const TrackError& e) {
      CHECK(e.step() == 3);
      CHECK(e.kind() == ErrorKind::Deflating);
    }
  }
}

TEST_CASE("absorb_reorthogonalization") {
  auto rng = test::rng_for(54);
  const auto f = random::random_factorization(40, 6, rng, MatrixStructure::General);

  const auto same = absorb_reorthogonalization(f);
  for (std::size_t j = 0; j < 6; ++j) {
    const double s = linalg::dot(same.u().mat().col(j), f.u().mat().col(j));
    CHECK(std::abs(std::abs(s) - 1.0) <= 1e-14);
  }
  CHECK(linalg::frobenius_distance(same.product(), f.product()) <=
        1e-14 * linalg::frobenius_norm(f.product()));

  Matrix drifted = f.u().mat();
  const Matrix noise = random::gaussian_matrix(40, 6, rng);
  for (std::size_t k = 0; k < drifted.size(); ++k) drifted.span()[k] += 1e-7 * noise.span()[k];
  const auto df = Factorization::adopt(OrthonormalFactor::adopt(drifted), f.w(),
                                       MatrixStructure::General);
  CHECK(df.u().orthonormality_error() >= 1e-7);
  const auto fixed = absorb_reorthogonalization(df);
  CHECK(fixed.u().orthonormality_error() <= 1e-14);
  CHECK(linalg::frobenius_distance(fixed.product(), df.product()) <=
        1e-14 * linalg::frobenius_norm(df.product()));

  Matrix far = f.u().mat();
  far(0, 0) += 0.5;
  CHECK_THROWS_AS(absorb_reorthogonalization(Factorization::adopt(
                      OrthonormalFactor::adopt(far), f.w(), MatrixStructure::General)),
                  Error);
}

TEST_CASE("track method names") {
  CHECK(parse_track_method("geodesic") == TrackMethod::Geodesic);
  CHECK(parse_track_method("refactor") == TrackMethod::Refactor);
  CHECK_FALSE(parse_track_method("Geodesic").has_value());
  CHECK_FALSE(parse_track_method("").has_value());
}
