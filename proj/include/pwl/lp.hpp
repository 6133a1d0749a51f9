#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pwl/network.hpp"

namespace pwl {

class LpFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of the max-slack problem
///   maximize t  subject to  a_i . x + s_i t <= b_i  for every row i.
/// With unit-norm rows and s_i = 1 the optimum is the Chebyshev center of the
/// polyhedron and t* its inradius; t* > 0 iff the strict system is feasible.
template <class T>
struct SlackSolution {
  bool bounded = true;
  T slack{};
  std::vector<T> point;
};

namespace detail {

template <class T>
bool lp_positive(const T& v, const T& tol) { return v > tol; }

}  // namespace detail

/// Dense tableau simplex with Bland's rule. `tol` is the pivot tolerance
/// (use 0 for exact scalar types). Free variables are split as x = u - v and
/// t is shifted by a known-feasible value so the slack basis starts feasible.
template <class T>
SlackSolution<T> solve_max_slack(const std::vector<std::vector<T>>& a, const std::vector<T>& b,
                                 const std::vector<T>& s, std::size_t dim, const T& tol,
                                 int max_iterations = 10000) {
  const std::size_t m = a.size();
  SlackSolution<T> out;
  if (m == 0) {
    out.bounded = false;
    out.point.assign(dim, T(0));
    return out;
  }
  // t0 < b_i / s_i for all i makes x = 0, t = t0 strictly feasible.
  T t0 = b[0] / s[0];
  for (std::size_t i = 1; i < m; ++i)
    if (b[i] / s[i] < t0) t0 = b[i] / s[i];
  t0 -= T(1);

  const std::size_t nv = 2 * dim + 1;  // u, v, w
  const std::size_t cols = nv + m + 1;  // + slacks + rhs
  std::vector<std::vector<T>> tab(m + 1, std::vector<T>(cols, T(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      tab[i][j] = a[i][j];
      tab[i][dim + j] = -a[i][j];
    }
    tab[i][2 * dim] = s[i];
    tab[i][nv + i] = T(1);
    tab[i][cols - 1] = b[i] - s[i] * t0;
    basis[i] = nv + i;
  }
  tab[m][2 * dim] = T(-1);  // objective row: maximize w

  for (int iter = 0;; ++iter) {
    if (iter >= max_iterations) throw LpFailure("simplex iteration limit reached");
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (tab[m][j] < -tol) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = m;
    T best{};
    for (std::size_t i = 0; i < m; ++i) {
      if (!detail::lp_positive(tab[i][enter], tol)) continue;
      T ratio = tab[i][cols - 1] / tab[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      out.bounded = false;
      out.point.assign(dim, T(0));
      return out;
    }
    const T piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const T f = tab[i][enter];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < cols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  std::vector<T> val(nv, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < nv) val[basis[i]] = tab[i][cols - 1];
  out.point.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) out.point[j] = val[j] - val[dim + j];
  out.slack = t0 + val[2 * dim];
  return out;
}

/// Open half-space normal . x < offset.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

/// Scales to a unit normal. Returns false for a (numerically) zero normal.
bool normalize(HalfSpace& h, double zero_tol = 1e-300);

struct ChebyshevBall {
  bool bounded = true;
  double radius = 0.0;
  Vector center;
};

/// Largest ball inside the intersection of unit-normal half-spaces.
ChebyshevBall chebyshev_ball(const std::vector<HalfSpace>& rows, int dim);

/// Exact rational re-check: true iff the open system {a_i . x < b_i} is
/// nonempty, decided without rounding. Normals need not be normalized.
bool strictly_feasible_exact(const std::vector<HalfSpace>& rows, int dim);

}  // namespace pwl
