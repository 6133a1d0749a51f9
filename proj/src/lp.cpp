#include "pwl/lp.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace pwl {

bool normalize(HalfSpace& h, double zero_tol) {
  const double n = h.normal.norm();
  if (!(n > zero_tol)) return false;
  h.normal /= n;
  h.offset /= n;
  return true;
}

ChebyshevBall chebyshev_ball(const std::vector<HalfSpace>& rows, int dim) {
  std::vector<std::vector<double>> a(rows.size(), std::vector<double>(dim));
  std::vector<double> b(rows.size()), s(rows.size(), 1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dim; ++j) a[i][j] = rows[i].normal[j];
    b[i] = rows[i].offset;
  }
  const auto sol = solve_max_slack<double>(a, b, s, static_cast<std::size_t>(dim), 1e-12);
  ChebyshevBall ball;
  ball.bounded = sol.bounded;
  ball.radius = sol.slack;
  ball.center = Vector::Map(sol.point.data(), dim);
  if (!std::isfinite(ball.radius) || !ball.center.allFinite())
    throw LpFailure("non-finite simplex result");
  return ball;
}

bool strictly_feasible_exact(const std::vector<HalfSpace>& rows, int dim) {
  using Q = boost::multiprecision::cpp_rational;
  std::vector<std::vector<Q>> a(rows.size(), std::vector<Q>(dim));
  std::vector<Q> b(rows.size()), s(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double l1 = 0.0;
    for (int j = 0; j < dim; ++j) {
      a[i][j] = Q(rows[i].normal[j]);
      l1 += std::abs(rows[i].normal[j]);
    }
    b[i] = Q(rows[i].offset);
    // Any positive per-row scale gives the same sign of t*.
    s[i] = l1 > 0.0 ? Q(l1) : Q(1);
  }
  const auto sol = solve_max_slack<Q>(a, b, s, static_cast<std::size_t>(dim), Q(0));
  return !sol.bounded || sol.slack > 0;
}

}  // namespace pwl
