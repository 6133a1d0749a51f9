#include "pwl/linmap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pwl {

namespace {

void check_unit(const Network& net, int layer, int unit, const Vector& x) {
  if (layer < 0 || layer >= net.depth())
    throw std::out_of_range("layer " + std::to_string(layer) + " out of range [0, " +
                            std::to_string(net.depth()) + ")");
  if (unit < 0 || unit >= net.layers[layer].width)
    throw std::out_of_range("unit " + std::to_string(unit) + " out of range [0, " +
                            std::to_string(net.layers[layer].width) + ")");
  if (x.size() != net.input_dim) throw std::invalid_argument("point dimension mismatch");
}

ActivationPattern prefix_pattern(const Network& net, const Vector& x, int layers) {
  auto p = pattern_at(net, x);
  p.resize(layers);
  return p;
}

bool coefficients_less(const AffineMap& a, const AffineMap& b) {
  for (int j = 0; j < a.cols(); ++j)
    if (a.matrix(0, j) != b.matrix(0, j)) return a.matrix(0, j) < b.matrix(0, j);
  return a.offset[0] < b.offset[0];
}

}  // namespace

AffineMap unit_linear_map(const Network& net, int layer, int unit, const Vector& x) {
  check_unit(net, layer, unit, x);
  return pattern_affine_map(net, pattern_at(net, x), layer + 1).row(unit);
}

double unit_activation(const Network& net, int layer, int unit, const Vector& x) {
  check_unit(net, layer, unit, x);
  return forward(net, x)[layer][unit];
}

IdentifiedPair find_identified_pair(const Network& net, int layer, int unit, const Vector& x1,
                                    const Vector& x2, double target_tol) {
  check_unit(net, layer, unit, x1);
  check_unit(net, layer, unit, x2);
  IdentifiedPair out;
  out.x1 = x1;
  out.x2 = x2;
  out.map1 = unit_linear_map(net, layer, unit, x1);
  out.map2 = unit_linear_map(net, layer, unit, x2);
  if (x1 == x2) {
    out.same_region = true;
    return out;
  }
  const double a1 = unit_activation(net, layer, unit, x1);
  const double a2 = unit_activation(net, layer, unit, x2);
  if (!(a1 > 0.0) || !(a2 > 0.0))
    throw std::domain_error("unit must be active at both points (activations " +
                            std::to_string(a1) + ", " + std::to_string(a2) + ")");
  const auto pattern2 = prefix_pattern(net, x2, layer + 1);
  out.same_region = prefix_pattern(net, x1, layer + 1) == pattern2;

  const Vector u = out.map2.matrix.row(0).transpose();
  const double uu = u.squaredNorm();
  if (uu == 0.0) throw NoIdentifiedPair("no identified pair along this ray: zero gradient at x2");
  // The unit is affine on x2's region, so one step along u is exact there.
  const Vector moved = x2 + ((a1 - a2) / uu) * u;
  if (prefix_pattern(net, moved, layer + 1) != pattern2)
    throw NoIdentifiedPair("no identified pair along this ray: the move leaves x2's region");
  out.x2 = moved;
  out.gap = std::abs(unit_activation(net, layer, unit, moved) - a1);
  if (out.gap > target_tol)
    throw NoIdentifiedPair("no identified pair along this ray: gap " + std::to_string(out.gap) +
                           " above tolerance");
  return out;
}

std::vector<UnitPiece> enumerate_unit_pieces(const Network& net, int layer, int unit,
                                             const std::vector<Vector>& samples) {
  const long n = static_cast<long>(samples.size());
  std::vector<UnitPiece> all(n);
  std::vector<char> keep(n, 0);
  for (const auto& x : samples) check_unit(net, layer, unit, x);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double a = forward(net, samples[i])[layer][unit];
    if (a > 0.0) {
      all[i] = {unit_linear_map(net, layer, unit, samples[i]), samples[i], a};
      keep[i] = 1;
    }
  }
  std::vector<UnitPiece> pieces;
  for (long i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    const bool seen = std::any_of(pieces.begin(), pieces.end(), [&](const UnitPiece& p) {
      return max_abs_difference(p.map, all[i].map) <= 1e-8;
    });
    if (!seen) pieces.push_back(std::move(all[i]));
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](const UnitPiece& a, const UnitPiece& b) {
    return coefficients_less(a.map, b.map);
  });
  return pieces;
}

}  // namespace pwl
