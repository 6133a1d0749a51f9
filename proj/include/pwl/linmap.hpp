#pragma once

#include <stdexcept>
#include <vector>

#include "pwl/network.hpp"

namespace pwl {

// Layers and units are 0-based here.

/// Affine map x -> u.x + c that unit (layer, unit) computes on the region
/// of x: the unit's weight row times the pattern-fixed maps below it.
AffineMap unit_linear_map(const Network& net, int layer, int unit, const Vector& x);

/// Output of one unit at x.
double unit_activation(const Network& net, int layer, int unit, const Vector& x);

class NoIdentifiedPair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IdentifiedPair {
  Vector x1;
  Vector x2;  // adjusted
  AffineMap map1;
  AffineMap map2;
  double gap = 0.0;  // |activation(x1) - activation(x2)|
  /// x1 and x2 share the pattern up to the unit's layer: one region, not two.
  bool same_region = false;
};

/// Moves x2 along its unit gradient until the unit's activation matches the
/// one at x1, keeping x2's pattern through `layer`. Throws NoIdentifiedPair
/// if the move leaves x2's region or misses target_tol, and
/// std::domain_error if the unit is inactive at either point.
IdentifiedPair find_identified_pair(const Network& net, int layer, int unit, const Vector& x1,
                                    const Vector& x2, double target_tol = 1e-10);

struct UnitPiece {
  AffineMap map;
  Vector representative;
  double activation = 0.0;
};

/// Distinct maps (to 1e-8) of one unit over the samples where it is
/// positive, sorted by coefficients; each keeps its first sample.
std::vector<UnitPiece> enumerate_unit_pieces(const Network& net, int layer, int unit,
                                             const std::vector<Vector>& samples);

}  // namespace pwl
