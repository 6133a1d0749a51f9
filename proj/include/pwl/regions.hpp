#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwl/lp.hpp"
#include "pwl/network.hpp"

namespace pwl {

/// Axis-aligned box lower < x < upper.
struct Box {
  Vector lower;
  Vector upper;

  static Box symmetric(int dim, double halfwidth);
  static Box uniform(int dim, double lo, double hi);
  int dim() const { return static_cast<int>(lower.size()); }
  std::vector<HalfSpace> halfspaces() const;
  double volume() const;
};

struct FeasibilityConfig {
  double box_halfwidth = 1e3;
  /// A cell is full-dimensional iff its Chebyshev radius exceeds this.
  double eps_feas = 1e-7;
  /// Re-decide LPs with |t*| <= 10 eps_feas in exact rational arithmetic.
  bool exact_rational = false;
  std::size_t region_cap = 1'000'000;
  /// OpenMP threads for the layer-wise kernel; 0 keeps the runtime default.
  int workers = 0;

  void validate() const;
};

/// Which unit comparison produced a constraint. For a rectifier `branch` is
/// the unit state (1 active, 0 inactive) and `rival` is -1; for maxout the
/// constraint says branch beats rival.
struct ConstraintOrigin {
  int layer = 0;
  int unit = 0;
  int branch = 0;
  int rival = -1;
};

struct Constraint {
  HalfSpace half;  // unit normal, strict
  ConstraintOrigin origin;
};

/// A full-dimensional cell on which the activation pattern is constant.
/// `constraints` omit the bounding box.
struct Region {
  std::vector<Constraint> constraints;
  AffineMap affine;
  ActivationPattern pattern;
  Vector witness;
  double clearance = 0.0;
};

/// Cells in lexicographic pattern order, grouped into linear regions: a
/// linear region is a maximal set of cells joined across shared facets on
/// which the network computes the same affine map.
struct RegionSet {
  Box box;
  int layers_processed = 0;
  std::vector<Region> regions;
  std::vector<int> linear_region_of;
  std::size_t linear_region_count = 0;

  std::size_t count() const { return linear_region_count; }
  std::size_t cell_count() const { return regions.size(); }
  /// Cell indices of each linear region, in id order.
  std::vector<std::vector<int>> linear_regions() const;
};

class RegionBudgetExhausted : public std::runtime_error {
 public:
  RegionBudgetExhausted(std::size_t partial, std::size_t cap);
  std::size_t partial_count;
};

/// Layer-wise subdivision, parallel across cells (OpenMP).
RegionSet enumerate_regions(const Network& net, const FeasibilityConfig& cfg = {});
RegionSet enumerate_regions(const Network& net, const Box& box, const FeasibilityConfig& cfg,
                            int layers = -1);

/// Depth-first single-threaded reference; same output as enumerate_regions.
RegionSet enumerate_regions_serial(const Network& net, const Box& box,
                                   const FeasibilityConfig& cfg, int layers = -1);

/// Number of linear regions in the default box.
std::size_t count_regions(const Network& net, const FeasibilityConfig& cfg = {});

/// Number of activation-pattern cells, streamed depth-first without keeping
/// any geometry.
std::size_t count_cells(const Network& net, const Box& box, const FeasibilityConfig& cfg);

/// Union of facet-adjacent cells with equal affine maps. Returns a label per
/// cell, numbered by first appearance.
std::vector<int> merge_linear_regions(const std::vector<Region>& cells, const Box& box,
                                      double eps_feas, std::size_t* count = nullptr);

/// Connected components of a regular grid over `box` (cell-centred, with a
/// fixed irrational shift so samples avoid rational breakpoints), where
/// neighbouring samples connect iff the network's local affine maps agree.
/// Independent of the LP path. Requires input_dim <= 2. Exact only when each
/// region's samples are 4-connected; slanted slivers thinner than a grid step
/// split and over-count.
std::size_t oracle_count_by_grid(const Network& net, const Box& box, std::size_t resolution,
                                 int workers = 0);
/// Distinct activation patterns over the same grid.
std::size_t oracle_count_patterns_by_grid(const Network& net, const Box& box,
                                          std::size_t resolution, int workers = 0);
/// Single-threaded version of the pattern grid for testing the parallel one.
std::size_t oracle_count_patterns_by_grid_serial(const Network& net, const Box& box,
                                                 std::size_t resolution);

/// Every s <= n0 normals independent and no n0+1 hyperplanes through a
/// common point, by singular-value rank tests at `tol`.
bool check_general_position(const std::vector<HalfSpace>& hyperplanes, int n0,
                            double tol = 1e-8);

/// Hyperplanes {x : W_i x + b_i = 0} of a single rectifier layer.
std::vector<HalfSpace> layer_hyperplanes(const Layer& layer);

using Polygon = std::vector<Eigen::Vector2d>;

struct RegionPolygon {
  int cell = 0;
  int linear_region = 0;
  Polygon vertices;  // counter-clockwise
};

/// Vertex lists of every cell of a 2-D region set, clipped to the box.
std::vector<RegionPolygon> region_polygons_2d(const RegionSet& rs,
                                              std::vector<std::string>* warnings = nullptr);

double polygon_area(const Polygon& p);

}  // namespace pwl
