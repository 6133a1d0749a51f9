#include "pwl/network.hpp"

#include <algorithm>
#include <cmath>

namespace pwl {

ActivationKind ActivationKind::maxout(int k) {
  if (k < 2) throw StructureError("maxout rank must be at least 2, got " + std::to_string(k));
  return {Activation::Maxout, k};
}

Layer Layer::rectifier(Matrix w, Vector b) {
  Layer l;
  l.activation = ActivationKind::rectifier();
  l.width = static_cast<int>(w.rows());
  l.weights = std::move(w);
  l.bias = std::move(b);
  return l;
}

Layer Layer::maxout(int rank, Matrix w, Vector b) {
  Layer l;
  l.activation = ActivationKind::maxout(rank);
  if (w.rows() % rank != 0)
    throw StructureError("maxout weight rows (" + std::to_string(w.rows()) +
                         ") not a multiple of rank " + std::to_string(rank));
  l.width = static_cast<int>(w.rows()) / rank;
  l.weights = std::move(w);
  l.bias = std::move(b);
  return l;
}

NetworkStructure NetworkStructure::rectifier(int n0, const std::vector<int>& widths) {
  NetworkStructure s;
  s.input_dim = n0;
  for (int w : widths) s.layers.push_back({w, ActivationKind::rectifier()});
  return s;
}

NetworkStructure NetworkStructure::maxout(int n0, const std::vector<int>& widths, int rank) {
  NetworkStructure s;
  s.input_dim = n0;
  for (int w : widths) s.layers.push_back({w, ActivationKind::maxout(rank)});
  return s;
}

void NetworkStructure::validate() const {
  if (input_dim < 1) throw StructureError("input dimension must be positive");
  if (layers.empty()) throw StructureError("at least one hidden layer is required");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].width < 1)
      throw StructureError("layer " + std::to_string(l + 1) + ": width must be positive");
    const auto& a = layers[l].activation;
    if (a.is_maxout() ? a.rank < 2 : a.rank != 1)
      throw StructureError("layer " + std::to_string(l + 1) + ": invalid rank");
  }
}

bool NetworkStructure::all_rectifier() const {
  return std::all_of(layers.begin(), layers.end(),
                     [](const LayerShape& s) { return !s.activation.is_maxout(); });
}

int NetworkStructure::total_units() const {
  int n = 0;
  for (const auto& s : layers) n += s.width;
  return n;
}

std::vector<int> NetworkStructure::widths() const {
  std::vector<int> w;
  for (const auto& s : layers) w.push_back(s.width);
  return w;
}

void Network::validate() const {
  if (input_dim < 1) throw StructureError("input dimension must be positive");
  if (layers.empty()) throw StructureError("at least one hidden layer is required");
  int prev = input_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    const std::string where = "layer " + std::to_string(l + 1) + ": ";
    if (layer.width < 1) throw StructureError(where + "width must be positive");
    const int rows = layer.rank() * layer.width;
    if (layer.weights.rows() != rows)
      throw StructureError(where + "weights has " + std::to_string(layer.weights.rows()) +
                           " rows, expected " + std::to_string(rows));
    if (layer.weights.cols() != prev)
      throw StructureError(where + "weights has " + std::to_string(layer.weights.cols()) +
                           " columns, expected " + std::to_string(prev));
    if (layer.bias.size() != rows)
      throw StructureError(where + "bias has " + std::to_string(layer.bias.size()) +
                           " entries, expected " + std::to_string(rows));
    if (!layer.weights.allFinite() || !layer.bias.allFinite())
      throw StructureError(where + "non-finite parameter");
    prev = layer.width;
  }
}

int Network::total_units() const {
  int n = 0;
  for (const auto& l : layers) n += l.width;
  return n;
}

NetworkStructure Network::structure() const {
  NetworkStructure s;
  s.input_dim = input_dim;
  for (const auto& l : layers) s.layers.push_back({l.width, l.activation});
  return s;
}

std::string pattern_code(const ActivationPattern& pattern) {
  static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string code;
  for (std::size_t l = 0; l < pattern.size(); ++l) {
    if (l) code += '.';
    for (int s : pattern[l]) code += (s >= 0 && s < 36) ? digits[s] : '?';
  }
  return code;
}

AffineMap AffineMap::identity(int n) {
  return {Matrix::Identity(n, n), Vector::Zero(n)};
}

AffineMap AffineMap::after(const AffineMap& inner) const {
  return {matrix * inner.matrix, matrix * inner.offset + offset};
}

AffineMap AffineMap::row(int i) const {
  return {matrix.row(i), offset.segment(i, 1)};
}

double max_abs_difference(const AffineMap& a, const AffineMap& b) {
  return std::max((a.matrix - b.matrix).cwiseAbs().maxCoeff(),
                  (a.offset - b.offset).cwiseAbs().maxCoeff());
}

std::vector<int> layer_states(const Layer& layer, const Vector& pre) {
  std::vector<int> states(layer.width);
  const int k = layer.rank();
  for (int j = 0; j < layer.width; ++j) {
    if (!layer.activation.is_maxout()) {
      states[j] = pre[j] > 0.0 ? 1 : 0;
      continue;
    }
    int best = 0;
    for (int t = 1; t < k; ++t)
      if (pre[j * k + t] > pre[j * k + best]) best = t;
    states[j] = best;
  }
  return states;
}

namespace {

Vector apply_layer(const Layer& layer, const Vector& pre) {
  Vector out(layer.width);
  const int k = layer.rank();
  for (int j = 0; j < layer.width; ++j) {
    if (!layer.activation.is_maxout())
      out[j] = std::max(0.0, pre[j]);
    else
      out[j] = pre.segment(j * k, k).maxCoeff();
  }
  return out;
}

void check_input(const Network& net, const Vector& x) {
  if (x.size() != net.input_dim)
    throw StructureError("input has dimension " + std::to_string(x.size()) + ", network expects " +
                         std::to_string(net.input_dim));
}

}  // namespace

std::vector<Vector> forward(const Network& net, const Vector& x) {
  check_input(net, x);
  std::vector<Vector> acts;
  acts.reserve(net.layers.size());
  Vector cur = x;
  for (const Layer& layer : net.layers) {
    cur = apply_layer(layer, layer.weights * cur + layer.bias);
    acts.push_back(cur);
  }
  return acts;
}

Vector evaluate(const Network& net, const Vector& x) {
  check_input(net, x);
  Vector cur = x;
  for (const Layer& layer : net.layers) cur = apply_layer(layer, layer.weights * cur + layer.bias);
  return cur;
}

ActivationPattern pattern_at(const Network& net, const Vector& x) {
  check_input(net, x);
  ActivationPattern p;
  p.reserve(net.layers.size());
  Vector cur = x;
  for (const Layer& layer : net.layers) {
    const Vector pre = layer.weights * cur + layer.bias;
    p.push_back(layer_states(layer, pre));
    cur = apply_layer(layer, pre);
  }
  return p;
}

AffineMap fixed_layer_map(const Layer& layer, const std::vector<int>& states) {
  AffineMap m{Matrix::Zero(layer.width, layer.input_dim()), Vector::Zero(layer.width)};
  const int k = layer.rank();
  for (int j = 0; j < layer.width; ++j) {
    if (!layer.activation.is_maxout()) {
      if (states[j]) {
        m.matrix.row(j) = layer.weights.row(j);
        m.offset[j] = layer.bias[j];
      }
    } else {
      m.matrix.row(j) = layer.weights.row(j * k + states[j]);
      m.offset[j] = layer.bias[j * k + states[j]];
    }
  }
  return m;
}

AffineMap pattern_affine_map(const Network& net, const ActivationPattern& pattern, int layers) {
  if (layers < 0) layers = net.depth();
  AffineMap acc = AffineMap::identity(net.input_dim);
  for (int l = 0; l < layers; ++l) acc = fixed_layer_map(net.layers[l], pattern[l]).after(acc);
  return acc;
}

std::size_t parameter_count(const NetworkStructure& s) {
  s.validate();
  std::size_t total = 0;
  std::size_t prev = static_cast<std::size_t>(s.input_dim);
  for (const auto& l : s.layers) {
    const auto w = static_cast<std::size_t>(l.width);
    total += static_cast<std::size_t>(l.activation.rank) * w * (prev + 1);
    prev = w;
  }
  return total;
}

}  // namespace pwl
