#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pwl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a network or structure violates its shape invariants.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Activation { Rectifier, Maxout };

/// Activation of a hidden layer. A rectifier unit has one pre-activation
/// (compared against an implicit zero); a rank-k maxout unit has k.
struct ActivationKind {
  Activation type = Activation::Rectifier;
  int rank = 1;

  static ActivationKind rectifier() { return {Activation::Rectifier, 1}; }
  static ActivationKind maxout(int k);

  bool is_maxout() const { return type == Activation::Maxout; }
  bool operator==(const ActivationKind&) const = default;
};

/// One hidden layer. For maxout, rows (j*k .. j*k+k-1) of `weights` belong to
/// unit j (0-based), so the row count is always rank * width.
struct Layer {
  ActivationKind activation;
  int width = 0;
  Matrix weights;
  Vector bias;

  static Layer rectifier(Matrix w, Vector b);
  static Layer maxout(int rank, Matrix w, Vector b);

  int rank() const { return activation.rank; }
  int input_dim() const { return static_cast<int>(weights.cols()); }
};

struct LayerShape {
  int width = 0;
  ActivationKind activation;
};

/// Widths and activation kinds without weights; what the bound formulas need.
struct NetworkStructure {
  int input_dim = 0;
  std::vector<LayerShape> layers;

  static NetworkStructure rectifier(int n0, const std::vector<int>& widths);
  static NetworkStructure maxout(int n0, const std::vector<int>& widths, int rank);

  void validate() const;
  bool all_rectifier() const;
  int total_units() const;
  std::vector<int> widths() const;
};

/// Hidden stack only; no output layer is modelled.
struct Network {
  int input_dim = 0;
  std::vector<Layer> layers;

  void validate() const;
  int depth() const { return static_cast<int>(layers.size()); }
  int output_dim() const { return layers.empty() ? input_dim : layers.back().width; }
  int total_units() const;
  NetworkStructure structure() const;
};

/// Per layer, per unit: rectifier 0/1, maxout the winning branch index.
using ActivationPattern = std::vector<std::vector<int>>;

/// Compact text code: one character per unit, layers separated by '.'.
std::string pattern_code(const ActivationPattern& pattern);

/// x -> matrix * x + offset.
struct AffineMap {
  Matrix matrix;
  Vector offset;

  static AffineMap identity(int n);
  Vector operator()(const Vector& x) const { return matrix * x + offset; }
  /// (this ∘ inner)(x) = this(inner(x)).
  AffineMap after(const AffineMap& inner) const;
  AffineMap row(int i) const;
  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

/// Largest absolute coefficient difference between two maps of equal shape.
double max_abs_difference(const AffineMap& a, const AffineMap& b);

/// Activations x_1..x_L of every hidden layer at input x.
std::vector<Vector> forward(const Network& net, const Vector& x);

/// Output of the last hidden layer.
Vector evaluate(const Network& net, const Vector& x);

/// Branch taken by every unit at x. Ties: a rectifier pre-activation of
/// exactly 0 is inactive, maxout ties go to the lowest branch index.
ActivationPattern pattern_at(const Network& net, const Vector& x);

/// Unit states of one layer from its pre-activation vector, same tie rule.
std::vector<int> layer_states(const Layer& layer, const Vector& preactivation);

/// The affine map a layer computes once its unit states are fixed.
AffineMap fixed_layer_map(const Layer& layer, const std::vector<int>& states);

/// Composition of the first `layers` pattern-fixed layer maps (all if -1).
AffineMap pattern_affine_map(const Network& net, const ActivationPattern& pattern,
                             int layers = -1);

/// Sum over layers of k_l * n_l * (n_{l-1} + 1).
std::size_t parameter_count(const NetworkStructure& s);

}  // namespace pwl
