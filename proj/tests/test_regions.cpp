#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "pwl/constructions.hpp"
#include "pwl/regions.hpp"
#include "pwl/rng.hpp"

using namespace pwl;

namespace {

Network single_layer(const Matrix& w, const Vector& b) {
  Network net;
  net.input_dim = static_cast<int>(w.cols());
  net.layers.push_back(Layer::rectifier(w, b));
  return net;
}

bool inside(const Region& r, const Vector& x, double margin = 0.0) {
  for (const auto& c : r.constraints)
    if (c.half.normal.dot(x) >= c.half.offset - margin) return false;
  return true;
}

}  // namespace

TEST_CASE("three random lines in general position: 7 regions") {
  Rng rng(3);
  const Network net = random_network(2, {3}, rng);
  REQUIRE(check_general_position(layer_hyperplanes(net.layers[0]), 2));
  CHECK(count_regions(net) == 7);
}

TEST_CASE("zero-weight unit with positive bias: one region") {
  const Network net = single_layer(Matrix::Zero(1, 2), Vector::Constant(1, 0.5));
  const auto rs = enumerate_regions(net);
  CHECK(rs.count() == 1);
  CHECK(rs.regions[0].pattern[0] == std::vector<int>{1});
}

TEST_CASE("sawtooth with threshold: 7 cells joined into 5 linear regions") {
  const Network net = build_sawtooth_net(3, true);
  const auto rs = enumerate_regions(net);
  // Cells break at {0,1,2} and {0.5,1.5,2.5}. Around 1 and 2 the output is
  // 0 on both sides, so those pairs of cells share one affine map.
  CHECK(rs.cell_count() == 7);
  CHECK(rs.count() == 5);
  CHECK(count_cells(net, Box::symmetric(1, 1e3), {}) == 7);
}

TEST_CASE("exact counts of constructed nets") {
  CHECK(count_regions(build_shi_layer(3).net) == 16);
  CHECK(count_regions(build_abs_net().net) == 4);
  CHECK(count_regions(build_maxout_parallel(2, 2, 3).net) == 9);
}

TEST_CASE("grid oracles") {
  const auto g = build_sawtooth_group(3, 0, 1);
  const Network saw1 = single_layer(g.weights, g.bias);
  CHECK(oracle_count_patterns_by_grid(saw1, Box::uniform(1, -1, 4), 5001) == 4);
  CHECK(oracle_count_by_grid(saw1, Box::uniform(1, -1, 4), 5001) == 4);

  const Network zero = single_layer(Matrix::Zero(3, 2), Vector::Zero(3));
  CHECK(oracle_count_by_grid(zero, Box::symmetric(2, 1), 101) == 1);
  CHECK(oracle_count_patterns_by_grid(zero, Box::symmetric(2, 1), 101) == 1);

  const Network abs = build_abs_net().net;
  CHECK(oracle_count_by_grid(abs, Box::symmetric(2, 1), 401) == 4);
  CHECK(oracle_count_patterns_by_grid(abs, Box::symmetric(2, 1), 401) == 4);
  CHECK(oracle_count_patterns_by_grid_serial(abs, Box::symmetric(2, 1), 401) == 4);
}

TEST_CASE("general position checks") {
  auto h = [](double a, double b, double c) { return HalfSpace{Eigen::Vector2d(a, b), c}; };
  CHECK(check_general_position({h(1, 0, 0), h(0, 1, 0), h(1, 1, 1)}, 2));
  CHECK_FALSE(check_general_position({h(1, 0, 0), h(1, 0, 1)}, 2));
  CHECK_FALSE(check_general_position({h(1, 0, 0), h(0, 1, 0), h(1, 1, 0)}, 2));
}

TEST_CASE("polygons") {
  FeasibilityConfig cfg;
  const Box unit = Box::symmetric(2, 1);
  {
    const auto rs = enumerate_regions(build_abs_net().net, unit, cfg);
    std::vector<std::string> warnings;
    const auto polys = region_polygons_2d(rs, &warnings);
    CHECK(warnings.empty());
    REQUIRE(polys.size() == 4);
    for (const auto& p : polys) {
      CHECK(p.vertices.size() == 4);
      CHECK(polygon_area(p.vertices) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  {
    Matrix w(1, 2);
    w << 1, 0;
    const auto rs = enumerate_regions(single_layer(w, Vector::Zero(1)), unit, cfg);
    const auto polys = region_polygons_2d(rs);
    REQUIRE(polys.size() == 2);
    for (const auto& p : polys) {
      CHECK(p.vertices.size() == 4);
      CHECK(polygon_area(p.vertices) == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
  {
    Rng rng(3);
    const Network net = random_network(2, {3}, rng);
    const Box box = Box::symmetric(2, 20);
    const auto polys = region_polygons_2d(enumerate_regions(net, box, cfg));
    CHECK(polys.size() == 7);
    double total = 0;
    for (const auto& p : polys) {
      CHECK(polygon_area(p.vertices) > 0);
      total += polygon_area(p.vertices);
    }
    CHECK(std::abs(total - box.volume()) <= 1e-6);
  }
}

TEST_CASE("property: single-layer 2-D counts match the arrangement formula") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int n1 = 1 + trial % 8;
    const Network net = random_network(2, {n1}, rng);
    const auto& layer = net.layers[0];
    std::vector<Eigen::Vector2d> a;
    std::vector<double> c;
    for (int i = 0; i < n1; ++i) {
      a.emplace_back(layer.weights(i, 0), layer.weights(i, 1));
      c.push_back(-layer.bias[i]);
    }
    const auto rs = enumerate_regions(net, Box::symmetric(2, 2), {});
    CAPTURE(trial);
    CHECK(rs.cell_count() == static_cast<std::size_t>(oracle::line_arrangement_regions(a, c, -2, 2)));
    CHECK(rs.count() == rs.cell_count());
    // In the large default box every intersection is inside.
    CHECK(count_regions(net) == oracle::binom(n1, 0) + oracle::binom(n1, 1) + oracle::binom(n1, 2));
  }
}

TEST_CASE("property: enumerated cells are consistent with pointwise evaluation") {
  Rng rng(202);
  const std::vector<std::vector<int>> shapes = {{3, 3}, {4, 2}, {2, 2, 2}, {5}, {3, 4, 1}};
  for (int trial = 0; trial < 15; ++trial) {
    const auto& widths = shapes[trial % shapes.size()];
    const int rank = trial % 3 == 2 ? 2 : 1;
    const Network net = random_network(2, widths, rng, rank);
    const Box box = Box::symmetric(2, 4);
    const auto rs = enumerate_regions(net, box, {});
    CAPTURE(trial);
    REQUIRE(rs.cell_count() > 0);

    // Distinct patterns, witness realises its own pattern, lexicographic order.
    std::set<ActivationPattern> seen;
    for (std::size_t i = 0; i < rs.regions.size(); ++i) {
      const auto& r = rs.regions[i];
      CHECK(seen.insert(r.pattern).second);
      CHECK(pattern_at(net, r.witness) == r.pattern);
      CHECK(inside(r, r.witness));
      if (i > 0) CHECK(rs.regions[i - 1].pattern < r.pattern);
      // Points near the witness follow the cell's affine map.
      for (int s = 0; s < 10; ++s) {
        Vector dir = rng.normal_vector(2);
        dir *= 0.5 * r.clearance / dir.norm();
        const Vector x = r.witness + dir;
        CHECK((evaluate(net, x) - r.affine(x)).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }

    // Coverage: random points land in the cell of their pattern.
    for (int s = 0; s < 200; ++s) {
      const Vector x = rng.uniform_vector(2, -4, 4);
      const auto p = pattern_at(net, x);
      auto it = std::find_if(rs.regions.begin(), rs.regions.end(),
                             [&](const Region& r) { return r.pattern == p; });
      REQUIRE(it != rs.regions.end());
      CHECK(inside(*it, x, -1e-9));
    }

    // Each extra layer only subdivides.
    std::size_t prev = 1;
    for (int l = 1; l <= net.depth(); ++l) {
      const auto part = enumerate_regions(net, box, {}, l);
      CHECK(part.layers_processed == l);
      CHECK(part.cell_count() >= prev);
      prev = part.cell_count();
    }

    // The grid sees no pattern the enumerator missed.
    CHECK(oracle_count_patterns_by_grid(net, box, 301) <= rs.cell_count());
  }
}

TEST_CASE("property: serial and parallel enumeration agree, exact mode agrees") {
  Rng rng(303);
  for (int trial = 0; trial < 12; ++trial) {
    const Network net = random_network(2 + trial % 2, {4, 3}, rng, trial % 4 == 3 ? 2 : 1);
    const Box box = Box::symmetric(net.input_dim, 5);
    FeasibilityConfig cfg;
    cfg.workers = 4;
    const auto par = enumerate_regions(net, box, cfg);
    const auto ser = enumerate_regions_serial(net, box, cfg);
    CAPTURE(trial);
    REQUIRE(par.cell_count() == ser.cell_count());
    CHECK(par.count() == ser.count());
    CHECK(par.linear_region_of == ser.linear_region_of);
    for (std::size_t i = 0; i < par.regions.size(); ++i) CHECK(par.regions[i].pattern == ser.regions[i].pattern);
    CHECK(count_cells(net, box, cfg) == par.cell_count());

    FeasibilityConfig exact = cfg;
    exact.exact_rational = true;
    CHECK(enumerate_regions(net, box, exact).cell_count() == par.cell_count());
  }
}

TEST_CASE("property: at most 2^N regions") {
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const int n0 = 1 + trial % 3;
    std::vector<int> widths;
    const int depth = 1 + trial % 3;
    for (int l = 0; l < depth; ++l) widths.push_back(1 + static_cast<int>(rng.uniform(0, 3)));
    const Network net = random_network(n0, widths, rng);
    CHECK(count_regions(net) <= (std::size_t{1} << net.total_units()));
  }
}

TEST_CASE("property: 1-D counts match finite-difference pieces") {
  Rng rng(505);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = random_network(1, {3, 3}, rng);
    const auto rs = enumerate_regions(net, Box::symmetric(1, 3), {});
    // Pieces shorter than a few grid steps are invisible to the oracle.
    double thinnest = INFINITY;
    for (const auto& r : rs.regions) thinnest = std::min(thinnest, r.clearance);
    if (thinnest < 5e-3) continue;
    ++compared;
    const auto f = [&](double x) { return evaluate(net, Vector::Constant(1, x)); };
    CAPTURE(trial);
    CHECK(static_cast<std::size_t>(oracle::pieces_1d(f, -3, 3, 1e-4)) == rs.count());
  }
  CHECK(compared >= 15);
}

TEST_CASE("region budget") {
  FeasibilityConfig cfg;
  cfg.region_cap = 5;
  try {
    enumerate_regions(build_shi_layer(3).net, cfg);
    FAIL("expected the budget to run out");
  } catch (const RegionBudgetExhausted& e) {
    CHECK(e.partial_count >= 5);
    CHECK(std::string(e.what()).find("region budget exhausted") != std::string::npos);
  }
  cfg.region_cap = 16;
  CHECK(count_regions(build_shi_layer(3).net, cfg) == 16);
  FeasibilityConfig bad;
  bad.eps_feas = -1;
  CHECK_THROWS(bad.validate());
}
