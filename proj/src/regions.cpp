#include "pwl/regions.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <boost/multiprecision/cpp_int.hpp>
#include <omp.h>

namespace pwl {

Box Box::symmetric(int dim, double halfwidth) {
  return {Vector::Constant(dim, -halfwidth), Vector::Constant(dim, halfwidth)};
}

Box Box::uniform(int dim, double lo, double hi) {
  return {Vector::Constant(dim, lo), Vector::Constant(dim, hi)};
}

std::vector<HalfSpace> Box::halfspaces() const {
  std::vector<HalfSpace> out;
  const int n = dim();
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Unit(n, j);
    out.push_back({e, upper[j]});
    out.push_back({-e, -lower[j]});
  }
  return out;
}

double Box::volume() const { return (upper - lower).prod(); }

void FeasibilityConfig::validate() const {
  if (!(box_halfwidth > 0)) throw std::invalid_argument("box half-width must be positive");
  if (!(eps_feas > 0)) throw std::invalid_argument("feasibility tolerance must be positive");
  if (region_cap == 0) throw std::invalid_argument("region cap must be positive");
}

std::vector<std::vector<int>> RegionSet::linear_regions() const {
  std::vector<std::vector<int>> groups(linear_region_count);
  for (std::size_t i = 0; i < linear_region_of.size(); ++i)
    groups[linear_region_of[i]].push_back(static_cast<int>(i));
  return groups;
}

RegionBudgetExhausted::RegionBudgetExhausted(std::size_t partial, std::size_t cap)
    : std::runtime_error("region budget exhausted: " + std::to_string(partial) +
                         " cells exceed the cap of " + std::to_string(cap)),
      partial_count(partial) {}

namespace {

using Q = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Exact re-check of a borderline cell. Every constraint is rebuilt from its
// origin with rational composition of the pattern-fixed layer maps.

struct QAffine {
  std::vector<std::vector<Q>> a;  // rows x n0
  std::vector<Q> c;
};

QAffine q_identity(int n) {
  QAffine m{std::vector<std::vector<Q>>(n, std::vector<Q>(n, Q(0))), std::vector<Q>(n, Q(0))};
  for (int i = 0; i < n; ++i) m.a[i][i] = Q(1);
  return m;
}

// (w . F)(x) + b for a weight row w.
std::pair<std::vector<Q>, Q> q_pull(const Eigen::RowVectorXd& w, double b, const QAffine& f,
                                    int n0) {
  std::vector<Q> n(n0, Q(0));
  Q c(b);
  for (Eigen::Index r = 0; r < w.size(); ++r) {
    if (w[r] == 0.0) continue;
    const Q wr(w[r]);
    for (int j = 0; j < n0; ++j) n[j] += wr * f.a[r][j];
    c += wr * f.c[r];
  }
  return {std::move(n), std::move(c)};
}

QAffine q_fixed_layer(const Layer& layer, const std::vector<int>& states, const QAffine& in,
                      int n0) {
  QAffine out{std::vector<std::vector<Q>>(layer.width, std::vector<Q>(n0, Q(0))),
              std::vector<Q>(layer.width, Q(0))};
  const int k = layer.rank();
  for (int j = 0; j < layer.width; ++j) {
    int row = j;
    if (layer.activation.is_maxout()) {
      row = j * k + states[j];
    } else if (!states[j]) {
      continue;
    }
    auto [n, c] = q_pull(layer.weights.row(row), layer.bias[row], in, n0);
    out.a[j] = std::move(n);
    out.c[j] = std::move(c);
  }
  return out;
}

bool exact_strictly_feasible(const Network& net, const Box& box, const ActivationPattern& prefix,
                             const std::vector<Constraint>& constraints) {
  const int n0 = net.input_dim;
  int max_layer = 0;
  for (const auto& c : constraints) max_layer = std::max(max_layer, c.origin.layer);
  std::vector<QAffine> maps{q_identity(n0)};
  for (int l = 0; l < max_layer; ++l)
    maps.push_back(q_fixed_layer(net.layers[l], prefix[l], maps.back(), n0));

  std::vector<std::vector<Q>> rows;
  std::vector<Q> rhs, scale;
  auto push = [&](std::vector<Q> n, Q off) {
    Q l1(0);
    for (const auto& v : n) l1 += abs(v);
    rows.push_back(std::move(n));
    rhs.push_back(std::move(off));
    scale.push_back(l1 > 0 ? l1 : Q(1));
  };
  for (const auto& h : box.halfspaces()) {
    std::vector<Q> n(n0);
    for (int j = 0; j < n0; ++j) n[j] = Q(h.normal[j]);
    push(std::move(n), Q(h.offset));
  }
  for (const auto& con : constraints) {
    const auto& o = con.origin;
    const Layer& layer = net.layers[o.layer];
    const QAffine& f = maps[o.layer];
    std::vector<Q> n;
    Q c;
    if (!layer.activation.is_maxout()) {
      std::tie(n, c) = q_pull(layer.weights.row(o.unit), layer.bias[o.unit], f, n0);
      // active: -(n.x) < c ; inactive: n.x < -c
      if (o.branch) {
        for (auto& v : n) v = -v;
      } else {
        c = -c;
      }
    } else {
      const int k = layer.rank();
      const Eigen::RowVectorXd d =
          layer.weights.row(o.unit * k + o.branch) - layer.weights.row(o.unit * k + o.rival);
      const double db = layer.bias[o.unit * k + o.branch] - layer.bias[o.unit * k + o.rival];
      std::tie(n, c) = q_pull(d, db, f, n0);
      for (auto& v : n) v = -v;
    }
    push(std::move(n), std::move(c));
  }
  const auto sol = solve_max_slack<Q>(rows, rhs, scale, static_cast<std::size_t>(n0), Q(0));
  return !sol.bounded || sol.slack > 0;
}

// ---------------------------------------------------------------------------

// Input-space form n.x + c of a weight row applied after map f.
struct Pulled {
  Vector n;
  double c = 0.0;
  bool constant = false;
};

Pulled pull(const Eigen::RowVectorXd& w, double b, const AffineMap& f) {
  Pulled p;
  p.n = (w * f.matrix).transpose();
  p.c = w.dot(f.offset) + b;
  const double scale = w.norm() * std::max(1.0, f.matrix.norm());
  const double nn = p.n.norm();
  p.constant = nn == 0.0 || nn <= 1e-12 * scale;
  return p;
}

struct Piece {
  std::vector<Constraint> constraints;
  std::vector<int> states;
  Vector witness;
  double clearance = 0.0;
};

class Splitter {
 public:
  Splitter(const Network& net, const Box& box, const FeasibilityConfig& cfg)
      : net_(net), box_(box), cfg_(cfg), box_rows_(box.halfspaces()) {}

  Region root() const {
    Region r;
    r.affine = AffineMap::identity(net_.input_dim);
    r.witness = (box_.lower + box_.upper) / 2;
    r.clearance = ((box_.upper - box_.lower) / 2).minCoeff();
    return r;
  }

  std::vector<Region> split(const Region& parent, int l) const {
    const Layer& layer = net_.layers[l];
    const int k = layer.rank();
    std::vector<Piece> pieces(1);
    pieces[0].constraints = parent.constraints;
    pieces[0].witness = parent.witness;
    pieces[0].clearance = parent.clearance;

    for (int j = 0; j < layer.width; ++j) {
      std::vector<Piece> next;
      // Pre-activation rows of this unit pulled back to input space.
      std::vector<Pulled> pre;
      for (int t = 0; t < k; ++t)
        pre.push_back(pull(layer.weights.row(j * k + t), layer.bias[j * k + t], parent.affine));

      for (const Piece& piece : pieces) {
        const int options = layer.activation.is_maxout() ? k : 2;
        for (int t = 0; t < options; ++t) {
          std::vector<Constraint> extra;
          bool possible = true;
          if (!layer.activation.is_maxout()) {
            const Pulled& g = pre[0];
            if (g.constant) {
              possible = (g.c > 0.0) == (t == 1);
            } else {
              Constraint c{t ? HalfSpace{-g.n, g.c} : HalfSpace{g.n, -g.c}, {l, j, t, -1}};
              normalize(c.half);
              extra.push_back(std::move(c));
            }
          } else {
            for (int s = 0; s < k && possible; ++s) {
              if (s == t) continue;
              Pulled d;
              d.n = pre[t].n - pre[s].n;
              d.c = pre[t].c - pre[s].c;
              const Eigen::RowVectorXd dw =
                  layer.weights.row(j * k + t) - layer.weights.row(j * k + s);
              const double scale = dw.norm() * std::max(1.0, parent.affine.matrix.norm());
              const double nn = d.n.norm();
              if (nn == 0.0 || nn <= 1e-12 * scale) {
                possible = d.c > 0.0 || (d.c == 0.0 && t < s);
              } else {
                Constraint c{HalfSpace{-d.n, d.c}, {l, j, t, s}};
                normalize(c.half);
                extra.push_back(std::move(c));
              }
            }
          }
          if (!possible) continue;
          Piece child;
          child.states = piece.states;
          child.states.push_back(t);
          if (!feasible(piece, extra, parent.pattern, child)) continue;
          next.push_back(std::move(child));
        }
      }
      pieces = std::move(next);
    }

    std::vector<Region> out;
    out.reserve(pieces.size());
    for (Piece& p : pieces) {
      Region r;
      r.pattern = parent.pattern;
      r.pattern.push_back(p.states);
      r.affine = fixed_layer_map(layer, p.states).after(parent.affine);
      r.constraints = std::move(p.constraints);
      r.witness = std::move(p.witness);
      r.clearance = p.clearance;
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  // Fills child's constraints/witness; false if the child has no interior.
  bool feasible(const Piece& piece, std::vector<Constraint>& extra,
                const ActivationPattern& parent_pattern, Piece& child) const {
    child.constraints = piece.constraints;
    bool ball_fits = true;
    for (const auto& c : extra) {
      const double slack = c.half.offset - c.half.normal.dot(piece.witness);
      if (slack < piece.clearance) ball_fits = false;
    }
    for (auto& c : extra) child.constraints.push_back(std::move(c));
    if (ball_fits) {
      child.witness = piece.witness;
      child.clearance = piece.clearance;
      return true;
    }
    std::vector<HalfSpace> rows = box_rows_;
    for (const auto& c : child.constraints) rows.push_back(c.half);
    ChebyshevBall ball;
    try {
      ball = chebyshev_ball(rows, net_.input_dim);
    } catch (const LpFailure& e) {
      ActivationPattern p = parent_pattern;
      p.push_back(child.states);
      throw LpFailure(std::string(e.what()) + " in cell " + pattern_code(p));
    }
    child.witness = ball.center;
    child.clearance = ball.radius;
    if (cfg_.exact_rational && std::abs(ball.radius) <= 10 * cfg_.eps_feas) {
      ActivationPattern p = parent_pattern;
      p.push_back(child.states);
      return exact_strictly_feasible(net_, box_, p, child.constraints);
    }
    return ball.radius > cfg_.eps_feas;
  }

  const Network& net_;
  const Box& box_;
  const FeasibilityConfig& cfg_;
  std::vector<HalfSpace> box_rows_;
};

void check_inputs(const Network& net, const Box& box, const FeasibilityConfig& cfg) {
  net.validate();
  cfg.validate();
  if (box.dim() != net.input_dim)
    throw StructureError("box dimension does not match the network input");
  if (!((box.upper - box.lower).array() > 0).all()) throw StructureError("empty bounding box");
}

int resolve_layers(const Network& net, int layers) {
  if (layers < 0 || layers > net.depth()) return net.depth();
  return layers;
}

void finish(RegionSet& rs, const FeasibilityConfig& cfg) {
  std::stable_sort(rs.regions.begin(), rs.regions.end(),
                   [](const Region& a, const Region& b) { return a.pattern < b.pattern; });
  rs.linear_region_of =
      merge_linear_regions(rs.regions, rs.box, cfg.eps_feas, &rs.linear_region_count);
}

void dfs(const Splitter& sp, const Region& r, int l, int depth, std::vector<Region>* out,
         std::size_t& leaves, std::size_t cap) {
  if (l == depth) {
    if (++leaves > cap) throw RegionBudgetExhausted(leaves, cap);
    if (out) out->push_back(r);
    return;
  }
  for (const Region& child : sp.split(r, l)) dfs(sp, child, l + 1, depth, out, leaves, cap);
}

}  // namespace

RegionSet enumerate_regions(const Network& net, const FeasibilityConfig& cfg) {
  return enumerate_regions(net, Box::symmetric(net.input_dim, cfg.box_halfwidth), cfg);
}

RegionSet enumerate_regions(const Network& net, const Box& box, const FeasibilityConfig& cfg,
                            int layers) {
  check_inputs(net, box, cfg);
  layers = resolve_layers(net, layers);
  const Splitter sp(net, box, cfg);
  std::vector<Region> cells{sp.root()};
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();

  for (int l = 0; l < layers; ++l) {
    std::vector<std::vector<Region>> children(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        children[i] = sp.split(cells[i], l);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    std::size_t total = 0;
    for (const auto& c : children) total += c.size();
    if (total > cfg.region_cap) throw RegionBudgetExhausted(total, cfg.region_cap);
    std::vector<Region> merged;
    merged.reserve(total);
    for (auto& c : children)
      for (auto& r : c) merged.push_back(std::move(r));
    cells = std::move(merged);
  }

  RegionSet rs;
  rs.box = box;
  rs.layers_processed = layers;
  rs.regions = std::move(cells);
  finish(rs, cfg);
  return rs;
}

RegionSet enumerate_regions_serial(const Network& net, const Box& box,
                                   const FeasibilityConfig& cfg, int layers) {
  check_inputs(net, box, cfg);
  layers = resolve_layers(net, layers);
  const Splitter sp(net, box, cfg);
  RegionSet rs;
  rs.box = box;
  rs.layers_processed = layers;
  std::size_t leaves = 0;
  dfs(sp, sp.root(), 0, layers, &rs.regions, leaves, cfg.region_cap);
  finish(rs, cfg);
  return rs;
}

std::size_t count_regions(const Network& net, const FeasibilityConfig& cfg) {
  return enumerate_regions(net, cfg).count();
}

std::size_t count_cells(const Network& net, const Box& box, const FeasibilityConfig& cfg) {
  check_inputs(net, box, cfg);
  const Splitter sp(net, box, cfg);
  std::size_t leaves = 0;
  dfs(sp, sp.root(), 0, net.depth(), nullptr, leaves, cfg.region_cap);
  return leaves;
}

// ---------------------------------------------------------------------------
// Linear-region merging.

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

bool maps_equal(const AffineMap& a, const AffineMap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale =
      1.0 + std::max({a.matrix.cwiseAbs().maxCoeff(), a.offset.cwiseAbs().maxCoeff(),
                      b.matrix.cwiseAbs().maxCoeff(), b.offset.cwiseAbs().maxCoeff()});
  return max_abs_difference(a, b) <= 1e-9 * scale;
}

// Does the common boundary of a and b on hyperplane h have relative interior?
bool facet_has_interior(const HalfSpace& h, const Region& a, const Region& b, const Box& box,
                        double eps) {
  const int n0 = static_cast<int>(h.normal.size());
  const Vector x0 = h.offset * h.normal;
  Matrix basis(n0, n0 - 1);
  if (n0 > 1) {
    Eigen::HouseholderQR<Matrix> qr(Matrix(h.normal));
    const Matrix qfull = qr.householderQ() * Matrix::Identity(n0, n0);
    basis = qfull.rightCols(n0 - 1);
  }
  std::vector<HalfSpace> rows;
  auto add = [&](const HalfSpace& g) {
    Vector r = basis.transpose() * g.normal;
    const double c = g.offset - g.normal.dot(x0);
    if (r.norm() <= 1e-9) return c >= -1e-9;  // parallel to h
    HalfSpace red{r, c};
    normalize(red);
    rows.push_back(red);
    return true;
  };
  for (const auto& g : box.halfspaces())
    if (!add(g)) return false;
  for (const Region* r : {&a, &b})
    for (const auto& c : r->constraints)
      if (!add(c.half)) return false;
  if (n0 == 1) {
    for (const auto& r : rows)
      if (r.offset <= eps) return false;
    return true;
  }
  return chebyshev_ball(rows, n0 - 1).radius > eps;
}

bool share_facet(const Region& a, const Region& b, const Box& box, double eps) {
  for (const auto& ca : a.constraints)
    for (const auto& cb : b.constraints) {
      if ((ca.half.normal + cb.half.normal).norm() > 1e-9) continue;
      if (std::abs(ca.half.offset + cb.half.offset) > 1e-9 * (1.0 + std::abs(ca.half.offset)))
        continue;
      if (facet_has_interior(ca.half, a, b, box, eps)) return true;
    }
  return false;
}

}  // namespace

std::vector<int> merge_linear_regions(const std::vector<Region>& cells, const Box& box,
                                      double eps_feas, std::size_t* count) {
  const std::size_t n = cells.size();
  UnionFind uf(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t i) {
    const auto& m = cells[i].affine;
    return m.matrix.size() ? m.matrix(0, 0) : 0.0;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    for (std::size_t q = p + 1; q < n; ++q) {
      const std::size_t j = order[q];
      if (key(j) - key(i) > 1e-9 * (1.0 + std::abs(key(i)))) break;
      if (uf.find(i) == uf.find(j)) continue;
      if (!maps_equal(cells[i].affine, cells[j].affine)) continue;
      if (share_facet(cells[i], cells[j], box, eps_feas)) uf.unite(i, j);
    }
  }
  std::vector<int> label(n, -1);
  std::map<std::size_t, int> ids;
  for (std::size_t i = 0; i < n; ++i) {
    auto root = uf.find(i);
    auto it = ids.find(root);
    if (it == ids.end()) it = ids.emplace(root, static_cast<int>(ids.size())).first;
    label[i] = it->second;
  }
  if (count) *count = ids.size();
  return label;
}

// ---------------------------------------------------------------------------
// Grid oracles.

namespace {

// Cell-centred samples shifted by an irrational fraction of the spacing.
double grid_coordinate(const Box& box, int axis, std::size_t i, std::size_t res) {
  static constexpr double shift[2] = {0.5 + 1.0 / (1000.0 * 3.14159265358979),
                                      0.5 + 1.0 / (1000.0 * 2.71828182845905)};
  const double h = (box.upper[axis] - box.lower[axis]) / static_cast<double>(res);
  return box.lower[axis] + (static_cast<double>(i) + shift[axis]) * h;
}

void check_grid(const Network& net, const Box& box, std::size_t res) {
  net.validate();
  if (net.input_dim > 2) throw StructureError("grid oracle needs input dimension <= 2");
  if (box.dim() != net.input_dim) throw StructureError("box dimension mismatch");
  if (res < 2) throw StructureError("grid resolution must be at least 2");
}

std::size_t grid_points(const Network& net, std::size_t res) {
  return net.input_dim == 1 ? res : res * res;
}

Vector grid_point(const Network& net, const Box& box, std::size_t idx, std::size_t res) {
  Vector x(net.input_dim);
  if (net.input_dim == 1) {
    x[0] = grid_coordinate(box, 0, idx, res);
  } else {
    x[0] = grid_coordinate(box, 0, idx % res, res);
    x[1] = grid_coordinate(box, 1, idx / res, res);
  }
  return x;
}

std::vector<std::string> grid_codes(const Network& net, const Box& box, std::size_t res,
                                    int workers) {
  const std::size_t total = grid_points(net, res);
  std::vector<std::string> codes(total);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    codes[i] = pattern_code(pattern_at(net, grid_point(net, box, static_cast<std::size_t>(i), res)));
  return codes;
}

}  // namespace

std::size_t oracle_count_patterns_by_grid(const Network& net, const Box& box,
                                          std::size_t resolution, int workers) {
  check_grid(net, box, resolution);
  const auto n = static_cast<std::ptrdiff_t>(grid_points(net, resolution));
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::unordered_set<std::string> seen;
#pragma omp parallel num_threads(threads)
  {
    std::unordered_set<std::string> local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i)
      local.insert(pattern_code(pattern_at(net, grid_point(net, box, static_cast<std::size_t>(i), resolution))));
#pragma omp critical
    seen.insert(local.begin(), local.end());
  }
  return seen.size();
}

std::size_t oracle_count_patterns_by_grid_serial(const Network& net, const Box& box,
                                                 std::size_t resolution) {
  check_grid(net, box, resolution);
  std::map<ActivationPattern, int> seen;
  const std::size_t total = grid_points(net, resolution);
  for (std::size_t i = 0; i < total; ++i) seen[pattern_at(net, grid_point(net, box, i, resolution))];
  return seen.size();
}

std::size_t oracle_count_by_grid(const Network& net, const Box& box, std::size_t resolution,
                                 int workers) {
  check_grid(net, box, resolution);
  const auto codes = grid_codes(net, box, resolution, workers);
  const std::size_t total = codes.size();

  // Pattern id per sample, then an affine-map class per pattern.
  std::unordered_map<std::string, int> pattern_id;
  std::vector<int> sample_pattern(total);
  std::vector<std::size_t> representative;
  for (std::size_t i = 0; i < total; ++i) {
    auto [it, inserted] = pattern_id.emplace(codes[i], static_cast<int>(representative.size()));
    if (inserted) representative.push_back(i);
    sample_pattern[i] = it->second;
  }
  std::vector<AffineMap> class_maps;
  std::vector<int> pattern_class(representative.size());
  for (std::size_t p = 0; p < representative.size(); ++p) {
    const Vector x = grid_point(net, box, representative[p], resolution);
    const AffineMap m = pattern_affine_map(net, pattern_at(net, x));
    int cls = -1;
    for (std::size_t c = 0; c < class_maps.size() && cls < 0; ++c)
      if (maps_equal(class_maps[c], m)) cls = static_cast<int>(c);
    if (cls < 0) {
      cls = static_cast<int>(class_maps.size());
      class_maps.push_back(m);
    }
    pattern_class[p] = cls;
  }
  auto cls = [&](std::size_t i) { return pattern_class[sample_pattern[i]]; };

  if (net.input_dim == 1) {
    std::size_t runs = 1;
    for (std::size_t i = 1; i < total; ++i)
      if (cls(i) != cls(i - 1)) ++runs;
    return runs;
  }
  UnionFind uf(total);
  for (std::size_t r = 0; r < resolution; ++r)
    for (std::size_t c = 0; c < resolution; ++c) {
      const std::size_t i = r * resolution + c;
      if (c + 1 < resolution && cls(i) == cls(i + 1)) uf.unite(i, i + 1);
      if (r + 1 < resolution && cls(i) == cls(i + resolution)) uf.unite(i, i + resolution);
    }
  std::size_t comps = 0;
  for (std::size_t i = 0; i < total; ++i)
    if (uf.find(i) == i) ++comps;
  return comps;
}

// ---------------------------------------------------------------------------

namespace {

double smallest_relative_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

// Calls fn on every size-r subset of {0..n-1}; stops when fn returns false.
template <class Fn>
bool for_each_subset(int n, int r, Fn fn) {
  if (r > n) return true;
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(idx)) return false;
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

bool check_general_position(const std::vector<HalfSpace>& hyperplanes, int n0, double tol) {
  const int m = static_cast<int>(hyperplanes.size());
  std::vector<HalfSpace> unit = hyperplanes;
  for (auto& h : unit)
    if (!normalize(h)) return false;

  // Full rank of every min(m, n0)-subset implies it for all smaller subsets.
  const int r = std::min(m, n0);
  if (r == 0) return true;
  const bool independent = for_each_subset(m, r, [&](const std::vector<int>& idx) {
    Matrix a(r, n0);
    for (int i = 0; i < r; ++i) a.row(i) = unit[idx[i]].normal.transpose();
    return smallest_relative_singular_value(a) > tol;
  });
  if (!independent) return false;

  // n0+1 hyperplanes share a point iff the augmented system is singular.
  return for_each_subset(m, n0 + 1, [&](const std::vector<int>& idx) {
    Matrix a(n0 + 1, n0 + 1);
    for (int i = 0; i <= n0; ++i) {
      a.row(i).head(n0) = unit[idx[i]].normal.transpose();
      a(i, n0) = -unit[idx[i]].offset;
    }
    return smallest_relative_singular_value(a) > tol;
  });
}

std::vector<HalfSpace> layer_hyperplanes(const Layer& layer) {
  std::vector<HalfSpace> out;
  for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
    out.push_back({layer.weights.row(r).transpose(), -layer.bias[r]});
  return out;
}

// ---------------------------------------------------------------------------

double polygon_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& u = p[i];
    const auto& v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return 0.5 * a;
}

std::vector<RegionPolygon> region_polygons_2d(const RegionSet& rs,
                                              std::vector<std::string>* warnings) {
  if (rs.box.dim() != 2) throw StructureError("polygon export needs a 2-D input space");
  std::vector<RegionPolygon> out;
  const auto box_rows = rs.box.halfspaces();
  for (std::size_t i = 0; i < rs.regions.size(); ++i) {
    const Region& r = rs.regions[i];
    std::vector<HalfSpace> rows = box_rows;
    for (const auto& c : r.constraints) rows.push_back(c.half);

    Polygon verts;
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        Eigen::Matrix2d m;
        m << rows[a].normal[0], rows[a].normal[1], rows[b].normal[0], rows[b].normal[1];
        if (std::abs(m.determinant()) < 1e-12) continue;
        const Eigen::Vector2d v = m.inverse() * Eigen::Vector2d(rows[a].offset, rows[b].offset);
        bool inside = true;
        for (const auto& h : rows)
          if (h.normal[0] * v.x() + h.normal[1] * v.y() > h.offset + 1e-9) {
            inside = false;
            break;
          }
        if (!inside) continue;
        bool dup = false;
        for (const auto& w : verts)
          if ((w - v).norm() <= 1e-9 * (1.0 + v.norm())) dup = true;
        if (!dup) verts.push_back(v);
      }
    const Eigen::Vector2d c(r.witness[0], r.witness[1]);
    std::sort(verts.begin(), verts.end(), [&](const auto& p, const auto& q) {
      return std::atan2(p.y() - c.y(), p.x() - c.x()) < std::atan2(q.y() - c.y(), q.x() - c.x());
    });
    if (verts.size() < 3) {
      if (warnings)
        warnings->push_back("cell " + pattern_code(r.pattern) + " has empty interior; skipped");
      continue;
    }
    out.push_back({static_cast<int>(i), rs.linear_region_of.empty() ? 0 : rs.linear_region_of[i],
                   std::move(verts)});
  }
  return out;
}

}  // namespace pwl
