#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pwl/bounds.hpp"
#include "pwl/network.hpp"
#include "pwl/regions.hpp"
#include "pwl/rng.hpp"

namespace pwl {

enum class WitnessKind {
  SawtoothGroup,
  FoldingRectifierNet,
  AbsNet,
  MaxoutParallel,
  MaxoutCones,
  Rank2MaxoutAsRectifier,
  ShiLayer,
  CatalanLayer,
};

std::string witness_kind_name(WitnessKind k);

/// Parameters of a constructed network and the region count it is built to
/// reach. Unused fields stay at 0 / empty.
struct WitnessSpec {
  WitnessKind kind = WitnessKind::AbsNet;
  int n0 = 0;
  int L = 0;
  std::vector<int> widths;
  /// Group sizes p_{l,i} of every folding layer.
  std::vector<std::vector<int>> groups;
  int k = 0;
  int m = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  BigInt predicted_count = 0;
  /// true: the count is exactly predicted_count; false: a lower bound.
  bool exact = false;
  /// Formula that produced predicted_count.
  std::string basis;
};

std::string witness_spec_json(const WitnessSpec& w);

struct Witness {
  Network net;
  WitnessSpec spec;
};

/// p rectifier units folding coordinate j (0-based) of an n0-dim input:
/// h_1 = max(0, x_j), h_i = max(0, 2 x_j - 2(i-1)). The alternating sum
/// `mixing . h` maps each of (0,1), (1,2), ..., (p-1,p) onto (0,1).
struct SawtoothGroup {
  Matrix weights;  // p x n0
  Vector bias;
  Eigen::RowVectorXd mixing;  // (1, -1, 1, ...)
};

SawtoothGroup build_sawtooth_group(int p, int j, int n0);

/// One-input net: a sawtooth group, then one unit max(0, h~) with the mixing
/// absorbed; with `threshold` the unit is max(0, h~ - 1/2).
Network build_sawtooth_net(int p, bool threshold = false);

/// The same net with its exact count. Without threshold: p + 1 regions, one
/// more for even p where the tail turns negative. With it, the pieces below
/// 1/2 around each valley merge.
Witness build_sawtooth_witness(int p, bool threshold = false);

struct FoldingOptions {
  /// Spread the remainder n_l mod n0 over the last groups; otherwise those
  /// units get zero weights.
  bool refined = true;
  std::uint64_t seed = 0;
  int max_retries = 500;
};

/// Layers l < L fold every coordinate into (0,1) with sawtooth groups; the
/// last layer cuts the unit cube with n_L hyperplanes in general position.
struct FoldingWitness : Witness {
  /// Unabsorbed form: layer l is relu(folds[l] z) followed by the linear map
  /// mixes[l]; the last entry of `folds` has no mix.
  std::vector<Layer> folds;
  std::vector<Matrix> mixes;
};

FoldingWitness build_folding_rectifier_net(int n0, const std::vector<int>& widths,
                                           const FoldingOptions& opt = {});

/// Evaluates the unabsorbed form with explicit intermediary units.
Vector evaluate_unabsorbed(const FoldingWitness& w, const Vector& x);

/// (|x1|, |x2|) from four rectifiers and a mixing layer.
Witness build_abs_net();

/// One maxout layer; unit j < min(n, m) has breakpoints x_j = 1..k-1, the
/// rest are constant.
Witness build_maxout_parallel(int n, int m, int k);

/// Maxout units over x_i - x_j (i < j) with the given breakpoints.
Witness build_shi_layer(int n);
Witness build_catalan_layer(int n);

struct ConesOptions {
  double delta = 1e-2;
  /// Enumerate and throw ConstructionError if the count misses the bound.
  bool verify = true;
};

class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, double delta)
      : std::runtime_error(what), delta(delta) {}
  double delta;
};

/// Width n0, rank k, L layers. Hidden layers use branch directions +-e_i
/// with slightly rotated copies per unit, shifted so every piece's image
/// covers a common ball; the last layer is a k^n0 grid inside that ball.
Witness build_maxout_cones(int n0, int L, int k, const ConesOptions& opt = {});

/// Rank-2 maxout net with units |z_i - c_l|, c_1 = 0 and c_l = 2^-(l-1).
/// Has 2^(n0 L) linear regions.
Witness build_rank2_folding_maxout(int n0, int L);

/// Rectifier net with twice as many units computing a rank-2 maxout net on
/// a box: max(a, b) = max(0, a - b) + max(0, b + C) - C with C large enough
/// that the second unit never switches. The maxout output equals
/// readout * h + readout_offset where h is the rectifier output.
struct RectifierSimulation {
  Network net;
  Matrix readout;
  Vector readout_offset;
  /// Largest |difference| seen over the certificate sample.
  double certificate = 0.0;
  std::size_t certificate_points = 0;
};

RectifierSimulation rank2_maxout_as_rectifier(const Network& maxout, const Box& box,
                                              std::size_t probes = 1000,
                                              std::uint64_t seed = 0);

Vector simulation_output(const RectifierSimulation& sim, const Vector& x);

/// True iff for `probes` random points of boxes[0] every other box holds a
/// point with the same network output to 1e-8. Counterparts are found by
/// Newton steps on the local affine maps, from each box centre and a few
/// seeded points of the box.
bool identification_check(const Network& net, const std::vector<Box>& boxes,
                          std::size_t probes = 100, std::uint64_t seed = 0);

}  // namespace pwl
