#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grood/grassmann.hpp"
#include "support.hpp"

using namespace grood;
using grood::test::column;
using grood::test::vec;

namespace {

constexpr double kPi = std::numbers::pi;

OrthonormalFactor rotate(const OrthonormalFactor& u, random::Rng& rng) {
  const auto r = random::random_orthonormal(u.cols(), u.cols(), rng);
  return OrthonormalFactor(linalg::matmul(u.mat(), r.mat()));
}

}  // namespace

TEST_CASE("principal angles examples") {
  const OrthonormalFactor e1(column({1, 0}));
  const OrthonormalFactor e2(column({0, 1}));
  const OrthonormalFactor d(column({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}));
  CHECK(principal_angles(e1, e2).thetas[0] == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(principal_angles(e1, d).thetas[0] == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(subspace_distance(e1, d) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(subspace_distance(e1, e1) <= 1e-7);

  auto rng = test::rng_for(1);
  const auto u = random::random_orthonormal(30, 6, rng);
  const auto angles = principal_angles(u, rotate(u, rng)).thetas;
  for (double th : angles) CHECK(std::abs(th) <= 1e-7);
}

TEST_CASE("principal angles: ascending, in range, agree with projector oracle") {
  auto rng = test::rng_for(2);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 8 + 5 * t;
    const std::size_t p = 1 + t % 5;
    const auto u = random::random_orthonormal(n, p, rng);
    const auto v = random::random_orthonormal(n, p, rng);
    const auto th = principal_angles(u, v).thetas;
    double sin2 = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      CHECK(th[k] >= 0.0);
      CHECK(th[k] <= kPi / 2);
      if (k) CHECK(th[k - 1] <= th[k]);
      sin2 += std::sin(th[k]) * std::sin(th[k]);
    }
    CHECK(std::sqrt(sin2) == doctest::Approx(test::projector_sine_distance(u.mat(), v.mat()))
                                 .epsilon(1e-12));
  }
}

TEST_CASE("subspace distance: symmetry, representative invariance, triangle") {
  auto rng = test::rng_for(3);
  for (int t = 0; t < 15; ++t) {
    const std::size_t n = 20 + t;
    const std::size_t p = 1 + t % 6;
    const auto u = random::random_orthonormal(n, p, rng);
    const auto v = random::random_orthonormal(n, p, rng);
    const auto w = random::random_orthonormal(n, p, rng);
    CHECK(std::abs(subspace_distance(u, v) - subspace_distance(v, u)) <= 1e-10);
    CHECK(std::abs(subspace_distance(rotate(u, rng), v) - subspace_distance(u, v)) <= 1e-8);
    CHECK(subspace_distance(u, w) <= subspace_distance(u, v) + subspace_distance(v, w) + 1e-8);
  }
}

TEST_CASE("geodesic_rank1 stays on the manifold and starts at U") {
  auto rng = test::rng_for(4);
  const auto f = random::random_factorization(25, 4, rng);
  const auto qty = compute_quantities(f, random::random_update(25, 4, rng));
  const auto tv = tangent_from_update(qty, f.u());
  CHECK(geodesic_rank1(tv, 0.0).mat() == f.u().mat());
  for (double t = -kPi; t <= kPi; t += kPi / 7) {
    CHECK(linalg::orthonormality_error(geodesic_rank1(tv, t).mat()) <= 1e-12);
  }
}

TEST_CASE("tangent_from_update hand case and geodesic endpoint") {
  const auto f = test::hand_factorization();
  const auto qty = compute_quantities(f, test::hand_update());
  const auto tv = tangent_from_update(qty, f.u());
  CHECK(tv.q() == vec({0, 1}));
  CHECK(tv.w() == vec({-1}));
  CHECK(tv.s() == 1.0);
  const auto end = geodesic_rank1(tv, qty.t_star);
  CHECK(std::abs(end.mat()(0, 0) - 1 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(end.mat()(1, 0) - 1 / std::sqrt(2.0)) <= 1e-15);
}

TEST_CASE("geodesic at t* reproduces update_u") {
  auto rng = test::rng_for(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 12 + 9 * t;
    const std::size_t p = 1 + t % 7;
    const auto f = random::random_factorization(n, p, rng, MatrixStructure::General);
    const auto up = random::random_update(n, p, rng);
    const auto qty = compute_quantities(f, up);
    const auto tv = tangent_from_update(qty, f.u());
    const auto end = geodesic_rank1(tv, qty.t_star);
    const auto u_new = update_u(f.u(), qty);
    CHECK(linalg::frobenius_distance(end.mat(), u_new.mat()) <= 1e-12);
    CHECK(subspace_distance(end, u_new) <= 1e-8);
    const Matrix x_new = test::plus_outer(f.product(), up.a, up.b);
    CHECK(test::projector_sine_distance(end.mat(), test::mgs_basis(x_new)) <= 1e-10);
  }
}

TEST_CASE("geodesic_general") {
  auto rng = test::rng_for(6);
  const auto u = random::random_orthonormal(30, 5, rng);
  const auto delta = TangentVector::project(u, random::gaussian_matrix(30, 5, rng));
  CHECK(linalg::frobenius_distance(geodesic_general(u, delta, 0.0).mat(), u.mat()) <= 1e-12);
  for (double t : {-2.0, -0.3, 0.5, 1.0, 3.0}) {
    CHECK(linalg::orthonormality_error(geodesic_general(u, delta, t).mat()) <= 1e-11);
  }
  const TangentVector zero(u, Matrix(30, 5));
  CHECK(linalg::frobenius_distance(geodesic_general(u, zero, 1.7).mat(), u.mat()) <= 1e-12);
}

TEST_CASE("geodesic_general specializes to geodesic_rank1") {
  auto rng = test::rng_for(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random::random_factorization(40, 6, rng);
    const auto qty = compute_quantities(f, random::random_update(40, 6, rng));
    const auto tv = tangent_from_update(qty, f.u());
    const TangentVector general(f.u(), tv.as_matrix());
    for (double t : {-1.3, 0.4, qty.t_star, 2.2}) {
      const auto g = geodesic_general(f.u(), general, t);
      const auto r = geodesic_rank1(tv, t);
      // Same subspace; the representatives may differ in the null directions
      // only through rounding.
      CHECK(linalg::frobenius_distance(g.mat(), r.mat()) <= 1e-11);
    }
  }
}

TEST_CASE("tangent validation") {
  const OrthonormalFactor e1(column({1, 0, 0}));
  CHECK_THROWS_AS(TangentVector(e1, column({1, 0, 0})), Error);
  CHECK_THROWS_AS(RankOneTangent(e1, vec({1, 0, 0}), vec({1}), 1.0), Error);
  CHECK_THROWS_AS(RankOneTangent(e1, vec({0, 2, 0}), vec({1}), 1.0), Error);
  CHECK_THROWS_AS(RankOneTangent(e1, vec({0, 1, 0}), vec({1}), -1.0), Error);
  CHECK_NOTHROW(RankOneTangent(e1, vec({0, 0, 1}), vec({-1}), 0.5));
}
