#include "pwl/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pwl/lp.hpp"
#include "pwl/network_io.hpp"

namespace pwl {

Network random_network(int n0, const std::vector<int>& widths, Rng& rng, int maxout_rank) {
  Network net;
  net.input_dim = n0;
  int prev = n0;
  for (int w : widths) {
    const int rows = w * maxout_rank;
    Matrix W = rng.normal_matrix(rows, prev);
    Vector b = rng.normal_vector(rows);
    net.layers.push_back(maxout_rank > 1 ? Layer::maxout(maxout_rank, W, b)
                                         : Layer::rectifier(W, b));
    prev = w;
  }
  net.validate();
  return net;
}

Network perturb(const Network& net, double magnitude, Rng& rng) {
  Network out = net;
  for (auto& layer : out.layers) {
    for (int j = 0; j < layer.weights.cols(); ++j)
      for (int i = 0; i < layer.weights.rows(); ++i)
        layer.weights(i, j) += rng.uniform(-magnitude, magnitude);
    for (int i = 0; i < layer.bias.size(); ++i) layer.bias[i] += rng.uniform(-magnitude, magnitude);
  }
  return out;
}

std::string witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::SawtoothGroup: return "SawtoothGroup";
    case WitnessKind::FoldingRectifierNet: return "FoldingRectifierNet";
    case WitnessKind::AbsNet: return "AbsNet";
    case WitnessKind::MaxoutParallel: return "MaxoutParallel";
    case WitnessKind::MaxoutCones: return "MaxoutCones";
    case WitnessKind::Rank2MaxoutAsRectifier: return "Rank2MaxoutAsRectifier";
    case WitnessKind::ShiLayer: return "ShiLayer";
    case WitnessKind::CatalanLayer: return "CatalanLayer";
  }
  return "?";
}

std::string witness_spec_json(const WitnessSpec& w) {
  nlohmann::ordered_json j;
  j["kind"] = witness_kind_name(w.kind);
  j["n0"] = w.n0;
  if (w.L) j["L"] = w.L;
  if (!w.widths.empty()) j["widths"] = w.widths;
  if (!w.groups.empty()) j["groups"] = w.groups;
  if (w.k) j["k"] = w.k;
  if (w.m) j["m"] = w.m;
  if (w.delta != 0.0) j["delta"] = w.delta;
  j["seed"] = w.seed;
  if (w.predicted_count <= BigInt(std::numeric_limits<std::uint64_t>::max()))
    j["predicted_count"] = static_cast<std::uint64_t>(w.predicted_count);
  else
    j["predicted_count"] = w.predicted_count.str();
  j["exact"] = w.exact;
  j["basis"] = w.basis;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Sawtooth and folding nets

SawtoothGroup build_sawtooth_group(int p, int j, int n0) {
  if (p < 1) throw std::domain_error("sawtooth group needs p >= 1");
  if (j < 0 || j >= n0) throw std::domain_error("sawtooth coordinate out of range");
  SawtoothGroup g;
  g.weights = Matrix::Zero(p, n0);
  g.bias = Vector::Zero(p);
  g.mixing = Eigen::RowVectorXd::Zero(p);
  for (int i = 0; i < p; ++i) {
    g.weights(i, j) = i == 0 ? 1.0 : 2.0;
    g.bias[i] = -2.0 * i;
    g.mixing[i] = i % 2 == 0 ? 1.0 : -1.0;
  }
  return g;
}

Network build_sawtooth_net(int p, bool threshold) {
  const auto g = build_sawtooth_group(p, 0, 1);
  Network net;
  net.input_dim = 1;
  net.layers.push_back(Layer::rectifier(g.weights, g.bias));
  net.layers.push_back(Layer::rectifier(Matrix(g.mixing), Vector::Constant(1, threshold ? -0.5 : 0.0)));
  return net;
}

Witness build_sawtooth_witness(int p, bool threshold) {
  Witness w;
  w.net = build_sawtooth_net(p, threshold);
  w.spec.kind = WitnessKind::SawtoothGroup;
  w.spec.n0 = 1;
  w.spec.L = 2;
  w.spec.widths = {p, 1};
  w.spec.exact = true;
  const int even = p % 2 == 0 ? 1 : 0;
  if (threshold) {
    w.spec.predicted_count = p + 1 + (p - 1) / 2 + even;
    w.spec.basis = "p active pieces, (p-1)/2 inner valleys, outer zero pieces";
  } else {
    w.spec.predicted_count = p + 1 + even;
    w.spec.basis = "p folds plus the constant piece below 0";
  }
  return w;
}

namespace {

std::vector<int> group_sizes(int n, int n0, bool refined) {
  const int q = n / n0, m = n % n0;
  std::vector<int> sizes(n0, q);
  if (refined)
    for (int i = n0 - m; i < n0; ++i) ++sizes[i];
  return sizes;
}

// The fold layer acting on z and its mixing rows. After the first layer z
// lies in (0,1), so groups there are scaled by p to fold the whole interval.
std::pair<Layer, Matrix> fold_layer(int n, int n0, const std::vector<int>& sizes, bool scaled) {
  Matrix W = Matrix::Zero(n, n0);
  Vector b = Vector::Zero(n);
  Matrix M = Matrix::Zero(n0, n);
  int row = 0;
  for (int i = 0; i < n0; ++i) {
    const auto g = build_sawtooth_group(sizes[i], i, n0);
    const double s = scaled ? sizes[i] : 1.0;
    W.middleRows(row, sizes[i]) = s * g.weights;
    b.segment(row, sizes[i]) = g.bias;
    M.block(i, row, 1, sizes[i]) = g.mixing;
    row += sizes[i];
  }
  return {Layer::rectifier(W, b), M};
}

struct Cut {
  Matrix A;
  Vector c;
};

Cut draw_cut(int n0, int nL, Rng& rng) {
  Cut cut{Matrix(nL, n0), Vector(nL)};
  for (int u = 0; u < nL; ++u) {
    Vector a, p;
    double c = 0.0;
    while (std::abs(c) < 1e-3) {
      a = rng.normal_vector(n0);
      a /= a.norm();
      p = rng.uniform_vector(n0, 0.2, 0.8);
      c = a.dot(p);
    }
    if (c < 0) {
      a = -a;
      c = -c;
    }
    cut.A.row(u) = a.transpose();
    cut.c[u] = c;
  }
  return cut;
}

// The all-inactive cell must stay away from the far faces z_i = 1, else its
// mirrored copies touch across a fold and merge into one linear region.
bool zero_cell_clear(const Cut& cut, int n0) {
  std::vector<HalfSpace> rows = Box::uniform(n0, 0.0, 1.0).halfspaces();
  for (int u = 0; u < cut.A.rows(); ++u) {
    HalfSpace h{cut.A.row(u).transpose(), cut.c[u]};
    normalize(h);
    rows.push_back(h);
  }
  for (int i = 0; i < n0; ++i) {
    auto probe = rows;
    HalfSpace far{-Vector::Unit(n0, i), -0.999};
    probe.push_back(far);
    if (chebyshev_ball(probe, n0).radius > 0.0) return false;
  }
  return true;
}

bool cut_acceptable(const Cut& cut, int n0) {
  std::vector<HalfSpace> planes;
  for (int u = 0; u < cut.A.rows(); ++u) planes.push_back({cut.A.row(u).transpose(), cut.c[u]});
  if (!check_general_position(planes, n0)) return false;
  Network single;
  single.input_dim = n0;
  single.layers.push_back(Layer::rectifier(cut.A, -cut.c));
  const auto cells = enumerate_regions_serial(single, Box::uniform(n0, 0.0, 1.0), FeasibilityConfig{});
  if (BigInt(cells.cell_count()) != shallow_max_regions(n0, static_cast<int>(cut.A.rows())))
    return false;
  return n0 == 1 || zero_cell_clear(cut, n0);
}

}  // namespace

FoldingWitness build_folding_rectifier_net(int n0, const std::vector<int>& widths,
                                           const FoldingOptions& opt) {
  if (n0 < 1 || widths.empty()) throw std::domain_error("folding net needs n0 >= 1 and a layer");
  const auto structure = NetworkStructure::rectifier(n0, widths);
  structure.validate();
  for (std::size_t l = 0; l + 1 < widths.size(); ++l)
    if (widths[l] < n0)
      throw std::domain_error("folding net needs n_l >= n0 below the last layer; layer " +
                              std::to_string(l + 1) + " has " + std::to_string(widths[l]));

  FoldingWitness w;
  w.spec.kind = WitnessKind::FoldingRectifierNet;
  w.spec.n0 = n0;
  w.spec.L = static_cast<int>(widths.size());
  w.spec.widths = widths;
  w.spec.seed = opt.seed;

  const int L = static_cast<int>(widths.size());
  for (int l = 0; l + 1 < L; ++l) {
    const auto sizes = group_sizes(widths[l], n0, opt.refined);
    auto [layer, mix] = fold_layer(widths[l], n0, sizes, l > 0);
    w.folds.push_back(layer);
    w.mixes.push_back(mix);
    w.spec.groups.push_back(sizes);
  }

  const int nL = widths.back();
  Cut cut;
  bool found = false;
  Rng root(opt.seed);
  for (int attempt = 0; attempt < opt.max_retries && !found; ++attempt) {
    Rng rng = root.split(static_cast<std::uint64_t>(attempt));
    cut = draw_cut(n0, nL, rng);
    found = cut_acceptable(cut, n0);
  }
  if (!found)
    throw std::runtime_error("no general-position last layer found in " +
                             std::to_string(opt.max_retries) + " draws");
  w.folds.push_back(Layer::rectifier(cut.A, -cut.c));

  w.net.input_dim = n0;
  w.net.layers.push_back(w.folds[0]);
  for (int l = 1; l < L; ++l)
    w.net.layers.push_back(Layer::rectifier(w.folds[l].weights * w.mixes[l - 1], w.folds[l].bias));
  w.net.validate();

  w.spec.predicted_count =
      opt.refined ? deep_rectifier_lower_refined(structure) : deep_rectifier_lower(structure);
  w.spec.exact = false;
  w.spec.basis = "prod_{l<L} prod_i p_{l,i} * sum_{j<=n0} C(n_L, j)";
  return w;
}

Vector evaluate_unabsorbed(const FoldingWitness& w, const Vector& x) {
  Vector z = x;
  for (std::size_t l = 0; l < w.folds.size(); ++l) {
    Vector h = (w.folds[l].weights * z + w.folds[l].bias).cwiseMax(0.0);
    z = l < w.mixes.size() ? Vector(w.mixes[l] * h) : h;
  }
  return z;
}

Witness build_abs_net() {
  Matrix W1(4, 2);
  W1 << 1, 0, -1, 0, 0, 1, 0, -1;
  Matrix W2(2, 4);
  W2 << 1, 1, 0, 0, 0, 0, 1, 1;
  Witness w;
  w.net.input_dim = 2;
  w.net.layers.push_back(Layer::rectifier(W1, Vector::Zero(4)));
  w.net.layers.push_back(Layer::rectifier(W2, Vector::Zero(2)));
  w.spec.kind = WitnessKind::AbsNet;
  w.spec.n0 = 2;
  w.spec.L = 2;
  w.spec.widths = {4, 2};
  w.spec.predicted_count = 4;
  w.spec.exact = true;
  w.spec.basis = "one region per quadrant";
  return w;
}

// ---------------------------------------------------------------------------
// Maxout layers

namespace {

// Branches f_t(d) = (t + base) d - sum_{s<=t} beta_s: the upper envelope
// switches from t-1 to t at d = beta_t. base = 0 makes f_0 = 0.
void envelope_rows(Matrix& W, Vector& b, int row0, const Eigen::RowVectorXd& d,
                   const std::vector<double>& breaks, double base = 0.0) {
  double acc = 0.0;
  for (std::size_t t = 0; t <= breaks.size(); ++t) {
    if (t > 0) acc += breaks[t - 1];
    W.row(row0 + static_cast<int>(t)) = (static_cast<double>(t) + base) * d;
    b[row0 + static_cast<int>(t)] = -acc;
  }
}

Witness pair_layer(int n, const std::vector<double>& breaks, WitnessKind kind) {
  if (n < 2) throw std::domain_error("pair arrangements need n >= 2");
  const int k = static_cast<int>(breaks.size()) + 1;
  const int m = n * (n - 1) / 2;
  Matrix W(m * k, n);
  Vector b(m * k);
  int unit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++unit) {
      Eigen::RowVectorXd d = Eigen::RowVectorXd::Zero(n);
      d[i] = 1.0;
      d[j] = -1.0;
      envelope_rows(W, b, unit * k, d, breaks);
    }
  Witness w;
  w.net.input_dim = n;
  w.net.layers.push_back(Layer::maxout(k, W, b));
  w.spec.kind = kind;
  w.spec.n0 = n;
  w.spec.L = 1;
  w.spec.widths = {m};
  w.spec.k = k;
  w.spec.m = m;
  w.spec.exact = true;
  return w;
}

}  // namespace

Witness build_maxout_parallel(int n, int m, int k) {
  if (n < 1 || m < 1 || k < 2) throw std::domain_error("maxout parallel needs n, m >= 1, k >= 2");
  Matrix W = Matrix::Zero(m * k, n);
  Vector b = Vector::Zero(m * k);
  std::vector<double> breaks;
  for (int s = 1; s < k; ++s) breaks.push_back(s);
  for (int j = 0; j < std::min(n, m); ++j)
    envelope_rows(W, b, j * k, Eigen::RowVectorXd::Unit(n, j), breaks);
  Witness w;
  w.net.input_dim = n;
  w.net.layers.push_back(Layer::maxout(k, W, b));
  w.spec.kind = WitnessKind::MaxoutParallel;
  w.spec.n0 = n;
  w.spec.L = 1;
  w.spec.widths = {m};
  w.spec.k = k;
  w.spec.m = m;
  w.spec.predicted_count = maxout_layer_bounds(n, m, k).first;
  w.spec.exact = true;
  w.spec.basis = "k^min(n, m)";
  return w;
}

Witness build_shi_layer(int n) {
  auto w = pair_layer(n, {0.0, 1.0}, WitnessKind::ShiLayer);
  w.spec.predicted_count = boost::multiprecision::pow(BigInt(n + 1), n - 1);
  w.spec.basis = "(n+1)^(n-1)";
  return w;
}

Witness build_catalan_layer(int n) {
  auto w = pair_layer(n, {-1.0, 0.0, 1.0}, WitnessKind::CatalanLayer);
  BigInt fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  w.spec.predicted_count = fact * binomial(2 * n, n) / (n + 1);
  w.spec.basis = "n! * C_n";
  return w;
}

namespace {

// Max over rows of each unit, without bias.
Vector homogeneous_max(const Matrix& W, int k, const Vector& z) {
  const Vector pre = W * z;
  Vector out(W.rows() / k);
  for (int j = 0; j < out.size(); ++j) out[j] = pre.segment(j * k, k).maxCoeff();
  return out;
}

// Radius of a ball around the origin that every "good" piece of the shifted
// layer z -> F(z) - y* covers, given that its input covers B(0, rho_in).
// A piece is good when the preimage of y* under its map lies inside it.
std::pair<double, int> cone_layer_radius(const Matrix& W, int k, int n0, const Vector& y,
                                         double rho_in) {
  double rho = std::numeric_limits<double>::infinity();
  int good = 0;
  std::vector<int> choice(n0, 0);
  while (true) {
    Matrix M(n0, n0);
    for (int j = 0; j < n0; ++j) M.row(j) = W.row(j * k + choice[j]);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    if (smin > 1e-12) {
      const Vector x = svd.solve(y);
      double clear = rho_in - x.norm();
      for (int j = 0; j < n0; ++j)
        for (int t = 0; t < k; ++t) {
          if (t == choice[j]) continue;
          const Eigen::RowVectorXd d = W.row(j * k + choice[j]) - W.row(j * k + t);
          const double nd = d.norm();
          if (nd == 0.0) {
            clear = -1.0;
            continue;
          }
          clear = std::min(clear, d.dot(x) / nd);
        }
      if (clear > 0.0) {
        ++good;
        rho = std::min(rho, clear * smin);
      }
    }
    int pos = 0;
    while (pos < n0 && ++choice[pos] == k) choice[pos++] = 0;
    if (pos == n0) break;
  }
  return {rho, good};
}

}  // namespace

Witness build_maxout_cones(int n0, int L, int k, const ConesOptions& opt) {
  if (n0 < 1 || L < 1 || k < 2) throw std::domain_error("maxout cones need n0, L >= 1, k >= 2");
  if (L > 1 && k > 2 * n0)
    throw std::domain_error("maxout cones need k <= 2 n0 when L > 1 (one branch per +-e_i)");

  Witness w;
  w.net.input_dim = n0;
  const double c = std::cos(opt.delta), s = std::sin(opt.delta);
  double rho = 100.0;

  for (int l = 0; l + 1 < L; ++l) {
    Matrix W(n0 * k, n0);
    for (int j = 0; j < n0; ++j)
      for (int t = 0; t < k; ++t) {
        const int axis = t / 2;
        Vector g = Vector::Zero(n0);
        g[axis] = t % 2 == 0 ? 1.0 : -1.0;
        if (j > 0) {
          // Rotate toward a coordinate other than g's own axis.
          int other = (j - 1) % (n0 - 1);
          if (other >= axis) ++other;
          g = c * g + s * Vector::Unit(n0, other);
        }
        W.row(j * k + t) = g.transpose();
      }
    const Vector y = homogeneous_max(W, k, Vector::Unit(n0, 0) * (rho / 2));
    Vector b(n0 * k);
    for (int j = 0; j < n0; ++j) b.segment(j * k, k).setConstant(-y[j]);
    auto [next, good] = cone_layer_radius(W, k, n0, y, rho);
    if (good == 0)
      throw ConstructionError("maxout cones: no piece covers the shifted origin", opt.delta);
    rho = next;
    w.net.layers.push_back(Layer::maxout(k, W, b));
  }

  // Last layer: a k^n0 grid of breakpoints inside B(0, rho). No branch is
  // constant, so grid cells over different lower pieces keep distinct maps.
  const double a = rho / (2.0 * std::sqrt(static_cast<double>(n0)));
  std::vector<double> breaks;
  for (int t = 1; t < k; ++t) breaks.push_back(a * (-1.0 + 2.0 * t / k));
  Matrix W = Matrix::Zero(n0 * k, n0);
  Vector b = Vector::Zero(n0 * k);
  for (int j = 0; j < n0; ++j) envelope_rows(W, b, j * k, Eigen::RowVectorXd::Unit(n0, j), breaks, 1.0);
  w.net.layers.push_back(Layer::maxout(k, W, b));
  w.net.validate();

  w.spec.kind = WitnessKind::MaxoutCones;
  w.spec.n0 = n0;
  w.spec.L = L;
  w.spec.widths.assign(L, n0);
  w.spec.k = k;
  w.spec.delta = opt.delta;
  w.spec.predicted_count = deep_maxout_lower(n0, L, k);
  w.spec.exact = false;
  w.spec.basis = "k^(L-1+n0)";

  if (opt.verify) {
    const auto count = count_regions(w.net);
    if (BigInt(count) < w.spec.predicted_count) {
      std::ostringstream msg;
      msg << "maxout cones: enumerated " << count << " regions, below k^(L-1+n0) = "
          << w.spec.predicted_count << " at rotation " << opt.delta << "; adjust delta";
      throw ConstructionError(msg.str(), opt.delta);
    }
  }
  return w;
}

Witness build_rank2_folding_maxout(int n0, int L) {
  if (n0 < 1 || L < 1) throw std::domain_error("rank-2 folding net needs n0, L >= 1");
  Witness w;
  w.net.input_dim = n0;
  for (int l = 0; l < L; ++l) {
    const double centre = l == 0 ? 0.0 : std::ldexp(1.0, -l);
    Matrix W = Matrix::Zero(2 * n0, n0);
    Vector b(2 * n0);
    for (int i = 0; i < n0; ++i) {
      W(2 * i, i) = 1.0;
      W(2 * i + 1, i) = -1.0;
      b[2 * i] = -centre;
      b[2 * i + 1] = centre;
    }
    w.net.layers.push_back(Layer::maxout(2, W, b));
  }
  w.spec.kind = WitnessKind::Rank2MaxoutAsRectifier;
  w.spec.n0 = n0;
  w.spec.L = L;
  w.spec.widths.assign(L, n0);
  w.spec.k = 2;
  w.spec.predicted_count = boost::multiprecision::pow(BigInt(2), n0 * L);
  w.spec.exact = true;
  w.spec.basis = "2^(n0 (L-1)) identified copies of 2^n0 regions";
  return w;
}

// ---------------------------------------------------------------------------
// Rank-2 maxout as rectifier

namespace {

struct Interval {
  Vector lo, hi;
};

Interval affine_range(const Matrix& W, const Vector& b, const Interval& in) {
  Interval out{b, b};
  for (int i = 0; i < W.rows(); ++i)
    for (int j = 0; j < W.cols(); ++j) {
      const double p = W(i, j) * in.lo[j], q = W(i, j) * in.hi[j];
      out.lo[i] += std::min(p, q);
      out.hi[i] += std::max(p, q);
    }
  return out;
}

}  // namespace

RectifierSimulation rank2_maxout_as_rectifier(const Network& maxout, const Box& box,
                                              std::size_t probes, std::uint64_t seed) {
  maxout.validate();
  for (const auto& layer : maxout.layers)
    if (!layer.activation.is_maxout() || layer.rank() != 2)
      throw std::domain_error("rank-2 simulation needs every layer to be rank-2 maxout");
  if (box.dim() != maxout.input_dim) throw std::domain_error("box dimension mismatch");

  RectifierSimulation sim;
  sim.net.input_dim = maxout.input_dim;
  // Input of the current layer as P h + q in terms of the previous rectifier
  // output h (the identity on x for the first layer).
  Matrix P = Matrix::Identity(maxout.input_dim, maxout.input_dim);
  Vector q = Vector::Zero(maxout.input_dim);
  Interval range{box.lower, box.upper};

  for (const auto& layer : maxout.layers) {
    const int n = layer.width;
    Matrix Wa(n, layer.input_dim()), Wb(n, layer.input_dim());
    Vector ba(n), bb(n);
    for (int j = 0; j < n; ++j) {
      Wa.row(j) = layer.weights.row(2 * j);
      Wb.row(j) = layer.weights.row(2 * j + 1);
      ba[j] = layer.bias[2 * j];
      bb[j] = layer.bias[2 * j + 1];
    }
    const Interval rb = affine_range(Wb, bb, range);
    const Interval ra = affine_range(Wa, ba, range);
    Vector C(n);
    for (int j = 0; j < n; ++j) C[j] = std::max(0.0, -rb.lo[j]) + 1.0;

    Matrix W(2 * n, P.cols());
    Vector b(2 * n);
    W.topRows(n) = (Wa - Wb) * P;
    b.head(n) = (Wa - Wb) * q + (ba - bb);
    W.bottomRows(n) = Wb * P;
    b.tail(n) = Wb * q + bb + C;
    sim.net.layers.push_back(Layer::rectifier(W, b));

    P.resize(n, 2 * n);
    P << Matrix::Identity(n, n), Matrix::Identity(n, n);
    q = -C;
    range.lo = ra.lo.cwiseMax(rb.lo);
    range.hi = ra.hi.cwiseMax(rb.hi);
  }
  sim.readout = P;
  sim.readout_offset = q;
  sim.net.validate();

  Rng rng(seed);
  for (std::size_t i = 0; i < probes; ++i) {
    Vector x(box.dim());
    for (int d = 0; d < box.dim(); ++d) x[d] = rng.uniform(box.lower[d], box.upper[d]);
    const double diff = (simulation_output(sim, x) - evaluate(maxout, x)).cwiseAbs().maxCoeff();
    sim.certificate = std::max(sim.certificate, diff);
  }
  sim.certificate_points = probes;
  return sim;
}

Vector simulation_output(const RectifierSimulation& sim, const Vector& x) {
  return sim.readout * evaluate(sim.net, x) + sim.readout_offset;
}

// ---------------------------------------------------------------------------

bool identification_check(const Network& net, const std::vector<Box>& boxes, std::size_t probes,
                          std::uint64_t seed) {
  if (boxes.size() < 2) return true;
  for (const auto& b : boxes)
    if (b.dim() != net.input_dim) throw std::domain_error("box dimension mismatch");
  auto in_box = [](const Box& b, const Vector& x) {
    return ((x.array() > b.lower.array()) && (x.array() < b.upper.array())).all();
  };
  // Newton steps with the local affine maps. A box that straddles several
  // pieces may need more than one step, and a start on a flat piece makes
  // no progress, so a few seeded starts back up the box centre.
  auto newton = [&](const Box& b, const Vector& y, Vector x) {
    for (int it = 0; it < 32; ++it) {
      const Vector r = y - evaluate(net, x);
      if (r.cwiseAbs().maxCoeff() <= 1e-8) return in_box(b, x);
      const AffineMap m = pattern_affine_map(net, pattern_at(net, x));
      const Vector step = m.matrix.completeOrthogonalDecomposition().solve(r);
      if (step.isZero()) return false;
      x += step;
    }
    return false;
  };
  Rng starts(seed ^ 0x5eedULL);
  auto counterpart = [&](const Box& b, const Vector& y) {
    if (newton(b, y, (b.lower + b.upper) / 2)) return true;
    for (int s = 0; s < 16; ++s) {
      Vector x(net.input_dim);
      for (int d = 0; d < net.input_dim; ++d) x[d] = starts.uniform(b.lower[d], b.upper[d]);
      if (newton(b, y, x)) return true;
    }
    return false;
  };
  Rng rng(seed);
  const auto& first = boxes.front();
  for (std::size_t i = 0; i < probes; ++i) {
    Vector x(net.input_dim);
    for (int d = 0; d < net.input_dim; ++d) x[d] = rng.uniform(first.lower[d], first.upper[d]);
    const Vector y = evaluate(net, x);
    for (std::size_t bi = 1; bi < boxes.size(); ++bi)
      if (!counterpart(boxes[bi], y)) return false;
  }
  return true;
}

}  // namespace pwl
