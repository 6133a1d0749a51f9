#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "pwl/lp.hpp"
#include "pwl/regions.hpp"
#include "pwl/rng.hpp"

using namespace pwl;

TEST_CASE("Chebyshev ball of the unit square") {
  const auto ball = chebyshev_ball(Box::uniform(2, 0, 1).halfspaces(), 2);
  CHECK(ball.bounded);
  CHECK(ball.radius == doctest::Approx(0.5).epsilon(1e-12));
  CHECK((ball.center - Eigen::Vector2d(0.5, 0.5)).norm() < 1e-12);
}

TEST_CASE("triangle inradius") {
  // x > 0, y > 0, x + y < 1: inradius 1 / (2 + sqrt 2).
  std::vector<HalfSpace> rows = {{Eigen::Vector2d(-1, 0), 0}, {Eigen::Vector2d(0, -1), 0},
                                 {Eigen::Vector2d(1, 1), 1}};
  for (auto& r : rows) normalize(r);
  CHECK(chebyshev_ball(rows, 2).radius == doctest::Approx(1 / (2 + std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("infeasible and thin systems") {
  std::vector<HalfSpace> empty = {{Vector::Constant(1, 1.0), 0.0}, {Vector::Constant(1, -1.0), -1.0}};
  CHECK(chebyshev_ball(empty, 1).radius < 0);
  CHECK_FALSE(strictly_feasible_exact(empty, 1));
  // 0 < x < 1e-12 is nonempty but far below any double tolerance.
  std::vector<HalfSpace> thin = {{Vector::Constant(1, -1.0), 0.0}, {Vector::Constant(1, 1.0), 1e-12}};
  CHECK(strictly_feasible_exact(thin, 1));
  // x < 0 and x > 0 touch only at the excluded point 0.
  std::vector<HalfSpace> touch = {{Vector::Constant(1, -1.0), 0.0}, {Vector::Constant(1, 1.0), 0.0}};
  CHECK_FALSE(strictly_feasible_exact(touch, 1));
}

TEST_CASE("no rows: unbounded") {
  CHECK_FALSE(chebyshev_ball({}, 2).bounded);
  CHECK(strictly_feasible_exact({}, 2));
}

TEST_CASE("property: simplex optimum matches a rational solve and certifies the ball") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + trial % 3;
    std::vector<HalfSpace> rows = Box::symmetric(dim, 5.0).halfspaces();
    for (int i = 0; i < 6; ++i) {
      HalfSpace h{rng.normal_vector(dim), rng.normal()};
      normalize(h);
      rows.push_back(h);
    }
    const auto ball = chebyshev_ball(rows, dim);
    // The ball really fits: every row holds with slack >= radius.
    for (const auto& r : rows) CHECK(r.normal.dot(ball.center) <= r.offset - ball.radius + 1e-9);
    // Same optimum in exact arithmetic on the rounded inputs.
    using Q = boost::multiprecision::cpp_rational;
    std::vector<std::vector<Q>> a;
    std::vector<Q> b, s;
    for (const auto& r : rows) {
      std::vector<Q> row;
      for (int j = 0; j < dim; ++j) row.emplace_back(r.normal[j]);
      a.push_back(row);
      b.emplace_back(r.offset);
      s.emplace_back(1);
    }
    const auto exact = solve_max_slack<Q>(a, b, s, dim, Q(0));
    CHECK(static_cast<double>(exact.slack) == doctest::Approx(ball.radius).epsilon(1e-9));
    CHECK(strictly_feasible_exact(rows, dim) == (exact.slack > 0));
  }
}
