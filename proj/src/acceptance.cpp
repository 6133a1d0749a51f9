#include "pwl/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "pwl/bounds.hpp"
#include "pwl/constructions.hpp"
#include "pwl/linmap.hpp"
#include "pwl/regions.hpp"
#include "pwl/rng.hpp"

namespace pwl {

namespace {

// Pinned tolerances.
constexpr double kGridStep = 1e-3;
constexpr double kEquivalenceTol = 1e-9;
constexpr std::size_t kEquivalencePoints = 1000;
constexpr double kFdStep = 1e-6;
constexpr double kFdTol = 1e-6;
constexpr double kReconstructTol = 1e-9;
constexpr double kBoundaryDistance = 1e-5;
constexpr double kIdentifyTol = 1e-10;
constexpr double kPerturbation = 1e-6;
constexpr int kPerturbTrials = 20;

std::size_t count(const Network& net, int workers = 0) {
  FeasibilityConfig cfg;
  cfg.workers = workers;
  return count_regions(net, cfg);
}

std::string str(const BigInt& v) { return v.str(); }

CriterionResult shallow_attainment(Rng rng) {
  CriterionResult r{1, "shallow attainment", true, ""};
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const int n1 = 1 + i % 8;
    Rng sub = rng.split(static_cast<std::uint64_t>(i));
    const Network net = random_network(2, {n1}, sub);
    const bool gp = check_general_position(layer_hyperplanes(net.layers[0]), 2);
    const std::size_t c = count(net);
    const BigInt expect = shallow_max_regions(2, n1);
    if (!gp || BigInt(c) != expect) {
      r.passed = false;
      r.detail = "net " + std::to_string(i) + " n1=" + std::to_string(n1) + ": count " +
                 std::to_string(c) + ", expected " + str(expect) +
                 (gp ? "" : ", general position check failed");
      return r;
    }
    ++checked;
  }
  r.detail = std::to_string(checked) + "/20 nets reach sum_{j<=2} C(n1, j)";
  return r;
}

CriterionResult upper_bound(Rng rng) {
  CriterionResult r{2, "2^N upper bound", true, ""};
  int violations = 0;
  std::size_t largest = 0;
  for (int i = 0; i < 50; ++i) {
    Rng sub = rng.split(static_cast<std::uint64_t>(i));
    const int n0 = 1 + i % 3;
    const int depth = 1 + (i / 3) % 3;
    std::vector<int> widths;
    int budget = 10;
    for (int l = 0; l < depth && budget > 0; ++l) {
      const int w = 1 + static_cast<int>(sub.uniform() * std::min(budget, 5));
      widths.push_back(std::min(w, budget));
      budget -= widths.back();
    }
    const Network net = random_network(n0, widths, sub);
    const std::size_t c = count(net);
    const std::size_t bound = std::size_t{1} << net.total_units();
    if (c > bound) ++violations;
    largest = std::max(largest, c);
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " violations in 50 nets (largest count " +
             std::to_string(largest) + ")";
  return r;
}

CriterionResult folding_1d() {
  CriterionResult r{3, "1-D folding witness (2, 2)", true, ""};
  const auto w = build_folding_rectifier_net(1, {2, 2});
  const std::size_t c = count(w.net);
  const BigInt bound = deep_rectifier_lower(NetworkStructure::rectifier(1, {2, 2}));
  const Box box = Box::uniform(1, -1.0, 3.0);
  const auto res = static_cast<std::size_t>(std::llround((box.upper[0] - box.lower[0]) / kGridStep));
  const std::size_t grid = oracle_count_by_grid(w.net, box, res);
  const std::size_t on_box = enumerate_regions(w.net, box, FeasibilityConfig{}).count();
  r.passed = c == 6 && BigInt(c) == bound && grid == c && on_box == c;
  r.detail = "count " + std::to_string(c) + ", bound " + str(bound) + ", grid " +
             std::to_string(grid) + " (step 1e-3 on [-1, 3], enumerator there " +
             std::to_string(on_box) + ")";
  return r;
}

CriterionResult folding_2d() {
  CriterionResult r{4, "2-D folding witness (4, 4)", true, ""};
  const auto w = build_folding_rectifier_net(2, {4, 4});
  const std::size_t c = count(w.net);
  r.passed = c >= 44 && c == kFolding2dCount;
  r.detail = "count " + std::to_string(c) + " >= 44, frozen value " +
             std::to_string(kFolding2dCount);
  return r;
}

CriterionResult refined_bound() {
  CriterionResult r{5, "remainder refinement (5, 3)", true, ""};
  const auto w = build_folding_rectifier_net(2, {5, 3});
  const std::size_t c = count(w.net);
  const auto s = NetworkStructure::rectifier(2, {5, 3});
  const BigInt refined = deep_rectifier_lower_refined(s);
  const BigInt plain = deep_rectifier_lower(s);
  r.passed = refined == 42 && plain == 28 && BigInt(c) >= refined && BigInt(c) > plain;
  r.detail = "count " + std::to_string(c) + ", refined bound " + str(refined) +
             ", unrefined " + str(plain);
  return r;
}

CriterionResult maxout_exact() {
  CriterionResult r{6, "maxout exact counts", true, ""};
  struct Case {
    const char* name;
    Witness w;
    std::size_t expect;
  };
  const std::vector<Case> cases = {{"parallel(2,2,3)", build_maxout_parallel(2, 2, 3), 9},
                                   {"shi(3)", build_shi_layer(3), 16},
                                   {"catalan(3)", build_catalan_layer(3), 30},
                                   {"shi(2)", build_shi_layer(2), 3}};
  for (const auto& c : cases) {
    const std::size_t got = count(c.w.net);
    if (got != c.expect) r.passed = false;
    r.detail += std::string(r.detail.empty() ? "" : ", ") + c.name + "=" + std::to_string(got);
  }
  return r;
}

CriterionResult cones() {
  CriterionResult r{7, "maxout cones witness", true, ""};
  for (int k : {2, 3}) {
    ConesOptions opt;
    opt.verify = false;
    const auto w = build_maxout_cones(2, 2, k, opt);
    const std::size_t c = count(w.net);
    const BigInt bound = deep_maxout_lower(2, 2, k);
    if (BigInt(c) < bound) r.passed = false;
    r.detail += "k=" + std::to_string(k) + ": " + std::to_string(c) + " >= " + str(bound) + "; ";
    if (k == 2) {
      const auto sim = rank2_maxout_as_rectifier(w.net, Box::symmetric(2, 1e3));
      const std::size_t cs = count(sim.net);
      if (cs != c) r.passed = false;
      r.detail += "rectifier simulation " + std::to_string(cs) + "; ";
    }
  }
  r.detail.resize(r.detail.size() - 2);
  return r;
}

CriterionResult rank2_equivalence(Rng rng) {
  CriterionResult r{8, "rank-2 equivalence", true, ""};
  const auto w = build_rank2_folding_maxout(2, 2);
  const auto sim = rank2_maxout_as_rectifier(w.net, Box::symmetric(2, 1e3), kEquivalencePoints,
                                             rng.split(1).engine()());
  double worst = 0.0;
  for (std::size_t i = 0; i < kEquivalencePoints; ++i) {
    const Vector x = rng.uniform_vector(2, -2.0, 2.0);
    worst = std::max(worst, (simulation_output(sim, x) - evaluate(w.net, x)).cwiseAbs().maxCoeff());
  }
  const int units_maxout = w.net.total_units(), units_rect = sim.net.total_units();
  r.passed = worst <= kEquivalenceTol && sim.certificate <= kEquivalenceTol &&
             units_rect == 2 * units_maxout;
  std::ostringstream d;
  d << "max |diff| " << std::max(worst, sim.certificate) << " over " << 2 * kEquivalencePoints
    << " points, units " << units_maxout << " -> " << units_rect;
  r.detail = d.str();
  return r;
}

// Distance from x to the nearest unit boundary, measured in the local
// linear pieces of every pre-activation comparison.
double boundary_distance(const Network& net, const Vector& x) {
  const auto pattern = pattern_at(net, x);
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < net.depth(); ++l) {
    const AffineMap below = pattern_affine_map(net, pattern, l);
    const Matrix A = net.layers[l].weights * below.matrix;
    const Vector c = net.layers[l].weights * below.offset + net.layers[l].bias;
    for (int i = 0; i < A.rows(); ++i) {
      const double g = A.row(i).norm();
      if (g > 0.0) best = std::min(best, std::abs(A.row(i).dot(x) + c[i]) / g);
    }
  }
  return best;
}

CriterionResult linear_maps(Rng rng) {
  CriterionResult r{9, "linear-map correctness", true, ""};
  const Network net = random_network(2, {4, 4, 3}, rng);
  int points = 0, skipped = 0;
  double fd_err = 0.0, rec_err = 0.0;
  while (points < 100) {
    const Vector x = rng.uniform_vector(2, -3.0, 3.0);
    if (boundary_distance(net, x) < kBoundaryDistance) {
      ++skipped;
      continue;
    }
    ++points;
    const auto acts = forward(net, x);
    for (int l = 0; l < net.depth(); ++l)
      for (int j = 0; j < net.layers[l].width; ++j) {
        const AffineMap m = unit_linear_map(net, l, j, x);
        rec_err = std::max(rec_err, std::abs(m(x)[0] - acts[l][j]));
        for (int d = 0; d < 2; ++d) {
          Vector e = Vector::Zero(2);
          e[d] = kFdStep;
          const double fd = (forward(net, x + e)[l][j] - forward(net, x - e)[l][j]) / (2 * kFdStep);
          fd_err = std::max(fd_err, std::abs(fd - m.matrix(0, d)));
        }
      }
  }
  r.passed = fd_err <= kFdTol && rec_err <= kReconstructTol;
  std::ostringstream d;
  d << points << " points (" << skipped << " near a boundary skipped), max slope error " << fd_err
    << ", max reconstruction error " << rec_err;
  r.detail = d.str();
  return r;
}

CriterionResult identification() {
  CriterionResult r{10, "identification", true, ""};
  const Network abs = build_abs_net().net;
  auto box2 = [](double x0, double x1, double y0, double y1) {
    return Box{Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y1)};
  };
  const std::vector<Box> quadrants = {box2(0, 1, 0, 1), box2(-1, 0, 0, 1), box2(-1, 0, -1, 0),
                                      box2(0, 1, -1, 0)};
  const bool abs_ok = identification_check(abs, quadrants);
  const Network saw = build_sawtooth_net(3);
  std::vector<Box> intervals;
  for (int i = 0; i < 3; ++i) intervals.push_back(Box::uniform(1, i, i + 1));
  const bool saw_ok = identification_check(saw, intervals);

  const auto pair = find_identified_pair(abs, 1, 0, Eigen::Vector2d(0.7, 0.2),
                                         Eigen::Vector2d(-0.9, 0.2), kIdentifyTol);
  const double off = (pair.x2 - Eigen::Vector2d(-0.7, 0.2)).cwiseAbs().maxCoeff();
  r.passed = abs_ok && saw_ok && off <= 1e-12 && pair.gap <= kIdentifyTol;
  std::ostringstream d;
  d << "quadrants " << (abs_ok ? "identified" : "NOT identified") << ", sawtooth intervals "
    << (saw_ok ? "identified" : "NOT identified") << ", pair x2' = (" << pair.x2[0] << ", "
    << pair.x2[1] << ") with gap " << pair.gap;
  r.detail = d.str();
  return r;
}

CriterionResult perturbation(Rng rng) {
  CriterionResult r{11, "perturbation stability", true, ""};
  struct Named {
    std::string name;
    Network net;
  };
  const std::vector<Named> nets = {
      {"fold(1;2,2)", build_folding_rectifier_net(1, {2, 2}).net},
      {"fold(2;4,4)", build_folding_rectifier_net(2, {4, 4}).net},
      {"fold(2;5,3)", build_folding_rectifier_net(2, {5, 3}).net},
      {"parallel(2,2,3)", build_maxout_parallel(2, 2, 3).net},
      {"shi(3)", build_shi_layer(3).net},
      {"catalan(3)", build_catalan_layer(3).net},
      {"shi(2)", build_shi_layer(2).net}};
  int failures = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const std::size_t base = count(nets[i].net);
    std::size_t lo = std::numeric_limits<std::size_t>::max();
    for (int t = 0; t < kPerturbTrials; ++t) {
      Rng sub = rng.split(i * 1000 + static_cast<std::uint64_t>(t));
      const std::size_t c = count(perturb(nets[i].net, kPerturbation, sub));
      lo = std::min(lo, c);
      if (c < base) ++failures;
    }
    r.detail += (r.detail.empty() ? "" : ", ") + nets[i].name + " " + std::to_string(base) +
                " -> min " + std::to_string(lo);
  }
  r.passed = failures == 0;
  r.detail = std::to_string(failures) + " drops in " +
             std::to_string(kPerturbTrials * static_cast<int>(nets.size())) + " trials; " + r.detail;
  return r;
}

std::vector<std::string> region_order(const Network& net, int workers) {
  FeasibilityConfig cfg;
  cfg.workers = workers;
  std::vector<std::string> codes;
  const auto rs = enumerate_regions(net, cfg);
  for (std::size_t i = 0; i < rs.regions.size(); ++i)
    codes.push_back(pattern_code(rs.regions[i].pattern) + "/" + std::to_string(rs.linear_region_of[i]));
  return codes;
}

CriterionResult determinism(const AcceptanceOptions& opt) {
  CriterionResult r{12, "determinism", true, ""};
  const std::string a = acceptance_text(run_acceptance_core(opt));
  const std::string b = acceptance_text(run_acceptance_core(opt));
  const bool same_report = a == b;

  Rng rng(opt.seed);
  std::vector<Network> nets = {build_folding_rectifier_net(2, {4, 4}).net,
                               build_catalan_layer(3).net,
                               build_maxout_cones(2, 2, 3, {1e-2, false}).net};
  for (int i = 0; i < 3; ++i) {
    Rng sub = rng.split(100 + static_cast<std::uint64_t>(i));
    nets.push_back(random_network(2, {5, 4}, sub));
  }
  bool same_order = true;
  for (const auto& net : nets) {
    if (region_order(net, 1) != region_order(net, opt.workers)) same_order = false;
  }
  r.passed = same_report && same_order;
  r.detail = std::string("repeated reports ") + (same_report ? "identical" : "DIFFER") +
             "; 1 vs " + std::to_string(opt.workers) + " workers on " +
             std::to_string(nets.size()) + " nets: order " + (same_order ? "identical" : "DIFFERS");
  return r;
}

CriterionResult guarded(int id, const std::string& name, const std::function<CriterionResult()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& c) { return c.passed; });
}

AcceptanceReport run_acceptance_core(const AcceptanceOptions& opt) {
  const Rng root(opt.seed);
  AcceptanceReport rep;
  rep.results.push_back(guarded(1, "shallow attainment", [&] { return shallow_attainment(root.split(1)); }));
  rep.results.push_back(guarded(2, "2^N upper bound", [&] { return upper_bound(root.split(2)); }));
  rep.results.push_back(guarded(3, "1-D folding witness (2, 2)", folding_1d));
  rep.results.push_back(guarded(4, "2-D folding witness (4, 4)", folding_2d));
  rep.results.push_back(guarded(5, "remainder refinement (5, 3)", refined_bound));
  rep.results.push_back(guarded(6, "maxout exact counts", maxout_exact));
  rep.results.push_back(guarded(7, "maxout cones witness", cones));
  rep.results.push_back(guarded(8, "rank-2 equivalence", [&] { return rank2_equivalence(root.split(8)); }));
  rep.results.push_back(guarded(9, "linear-map correctness", [&] { return linear_maps(root.split(9)); }));
  rep.results.push_back(guarded(10, "identification", identification));
  rep.results.push_back(guarded(11, "perturbation stability", [&] { return perturbation(root.split(11)); }));
  return rep;
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opt) {
  AcceptanceReport rep = run_acceptance_core(opt);
  rep.results.push_back(guarded(12, "determinism", [&] { return determinism(opt); }));
  return rep;
}

std::string acceptance_text(const AcceptanceReport& r) {
  std::ostringstream out;
  int passed = 0;
  for (const auto& c : r.results) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << (c.id < 10 ? " " : "") << c.id << "  " << c.name
        << ": " << c.detail << "\n";
    passed += c.passed;
  }
  out << passed << "/" << r.results.size() << " criteria passed\n";
  return out.str();
}

}  // namespace pwl
