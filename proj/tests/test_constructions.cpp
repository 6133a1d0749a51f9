#include <doctest.h>

#include "oracles.hpp"
#include "pwl/constructions.hpp"
#include "pwl/regions.hpp"

using namespace pwl;

namespace {

double folded(const SawtoothGroup& g, double x) {
  const Vector pre = g.weights * Vector::Constant(1, x) + g.bias;
  return g.mixing.dot(pre.cwiseMax(0.0));
}

// Closed form of the folded value on [0, p]: distance pattern of a triangle
// wave with period 2.
double triangle(double x) {
  const double r = std::fmod(x, 2.0);
  return r <= 1 ? r : 2 - r;
}

std::size_t count(const Network& net) { return count_regions(net); }

}  // namespace

TEST_CASE("sawtooth group values") {
  const auto g = build_sawtooth_group(3, 0, 1);
  CHECK(folded(g, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(folded(g, 1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(folded(g, 2.5) == doctest::Approx(0.5).epsilon(1e-15));
  const auto one = build_sawtooth_group(1, 0, 1);
  for (double x : {-2.0, -0.1, 0.0, 0.3, 7.0}) CHECK(folded(one, x) == std::max(0.0, x));
}

TEST_CASE("sawtooth group: endpoints land on {0, 1} and pieces match a triangle wave") {
  for (int p = 1; p <= 8; ++p) {
    const auto g = build_sawtooth_group(p, 0, 1);
    for (int k = 1; k <= p; ++k) {
      const double a = folded(g, k - 1), b = folded(g, k);
      CHECK(((a == 0 && b == 1) || (a == 1 && b == 0)));
    }
    for (int s = 0; s <= 100 * p; ++s) {
      const double x = 0.01 * s;
      CHECK(folded(g, x) == doctest::Approx(triangle(x)).epsilon(1e-12));
    }
  }
  const auto g = build_sawtooth_group(3, 1, 3);
  CHECK(g.weights.col(0).isZero());
  CHECK(g.weights.col(2).isZero());
  CHECK(g.weights(2, 1) == 2.0);
  CHECK(g.bias[2] == -4.0);
  CHECK_THROWS_AS(build_sawtooth_group(0, 0, 1), std::domain_error);
  CHECK_THROWS_AS(build_sawtooth_group(2, 3, 3), std::domain_error);
}

TEST_CASE("property: sawtooth witness counts match their formula") {
  for (int p = 1; p <= 7; ++p)
    for (bool threshold : {false, true}) {
      const Witness w = build_sawtooth_witness(p, threshold);
      CAPTURE(p);
      CAPTURE(threshold);
      CHECK(BigInt(count(w.net)) == w.spec.predicted_count);
      // Independent 1-D check of the same number.
      const auto f = [&](double x) { return evaluate(w.net, Vector::Constant(1, x)); };
      CHECK(static_cast<std::size_t>(oracle::pieces_1d(f, -1, p + 1.5, 1e-3)) == count(w.net));
    }
}

TEST_CASE("folding nets reach their predicted counts") {
  {
    const auto w = build_folding_rectifier_net(1, {2, 2});
    CHECK(w.spec.predicted_count == 6);
    CHECK(count(w.net) == 6);
    const auto f = [&](double x) { return evaluate(w.net, Vector::Constant(1, x)); };
    CHECK(oracle::pieces_1d(f, -1, 3, 1e-3) == 6);
  }
  {
    const auto w = build_folding_rectifier_net(2, {2, 2});
    CHECK(w.spec.predicted_count == 4);
    CHECK(count(w.net) >= 4);
  }
  {
    const auto w = build_folding_rectifier_net(2, {4, 4});
    CHECK(w.spec.predicted_count == 44);
    CHECK(count(w.net) >= 44);
    CHECK(w.spec.groups == std::vector<std::vector<int>>{{2, 2}});
  }
  {
    const auto w = build_folding_rectifier_net(2, {5, 3});
    CHECK(w.spec.predicted_count == 42);
    CHECK(w.spec.groups == std::vector<std::vector<int>>{{2, 3}});
    CHECK(count(w.net) >= 42);
    FoldingOptions opt;
    opt.refined = false;
    const auto plain = build_folding_rectifier_net(2, {5, 3}, opt);
    CHECK(plain.spec.predicted_count == 28);
    CHECK(count(plain.net) >= 28);
  }
  CHECK_THROWS_AS(build_folding_rectifier_net(3, {2, 5}), std::domain_error);
}

TEST_CASE("property: absorbing the mixing layers does not change the function") {
  for (const auto& widths : std::vector<std::vector<int>>{{2, 2}, {4, 4}, {5, 3}, {4, 5, 2}}) {
    const auto w = build_folding_rectifier_net(2, widths);
    Rng rng(9);
    for (int s = 0; s < 200; ++s) {
      const Vector x = rng.uniform_vector(2, -1, 4);
      CHECK((evaluate(w.net, x) - evaluate_unabsorbed(w, x)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("folding nets are reproducible from their seed") {
  FoldingOptions a, b;
  a.seed = b.seed = 17;
  const auto x = build_folding_rectifier_net(2, {4, 4}, a);
  const auto y = build_folding_rectifier_net(2, {4, 4}, b);
  CHECK(x.net.layers.back().weights == y.net.layers.back().weights);
  CHECK(x.net.layers.back().bias == y.net.layers.back().bias);
}

TEST_CASE("maxout layer counts") {
  CHECK(count(build_maxout_parallel(2, 2, 3).net) == 9);
  CHECK(count(build_maxout_parallel(2, 3, 2).net) == 4);
  CHECK(build_maxout_parallel(2, 3, 2).spec.predicted_count == 4);
  CHECK(count(build_shi_layer(3).net) == 16);
  CHECK(count(build_shi_layer(2).net) == 3);
  CHECK(count(build_catalan_layer(3).net) == 30);
  CHECK(build_catalan_layer(3).spec.predicted_count == 30);
  CHECK(build_shi_layer(4).spec.predicted_count == 125);
}

TEST_CASE("maxout cones") {
  CHECK(count(build_maxout_cones(2, 1, 4).net) >= 4);
  const auto two = build_maxout_cones(2, 2, 2);
  CHECK(two.spec.predicted_count == 8);
  CHECK(count(two.net) >= 8);
  CHECK(count(build_maxout_cones(2, 2, 3).net) >= 27);
  CHECK_THROWS_AS(build_maxout_cones(1, 2, 3), std::domain_error);
}

TEST_CASE("rank-2 folding maxout and its rectifier simulation") {
  CHECK(count(build_rank2_folding_maxout(1, 2).net) == 4);
  for (int n0 = 1; n0 <= 3; ++n0) CHECK(count(build_rank2_folding_maxout(n0, 1).net) == (1u << n0));
  const auto w = build_rank2_folding_maxout(2, 2);
  CHECK(count(w.net) == 16);
  const Box box = Box::symmetric(2, 1e3);
  const auto sim = rank2_maxout_as_rectifier(w.net, box);
  CHECK(sim.net.total_units() == 2 * w.net.total_units());
  CHECK(sim.certificate <= 1e-9);
  CHECK(sim.certificate_points == 1000);
  CHECK(count(sim.net) == 16);
  Rng rng(31);
  for (int s = 0; s < 500; ++s) {
    const Vector x = rng.uniform_vector(2, -3, 3);
    CHECK((simulation_output(sim, x) - evaluate(w.net, x)).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK_THROWS_AS(rank2_maxout_as_rectifier(build_abs_net().net, box), std::domain_error);
}

TEST_CASE("identification") {
  const Network abs = build_abs_net().net;
  const std::vector<Box> quadrants = {Box{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)},
                                       Box{Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, 1)},
                                       Box{Eigen::Vector2d(-1, -1), Eigen::Vector2d(0, 0)},
                                       Box{Eigen::Vector2d(0, -1), Eigen::Vector2d(1, 0)}};
  CHECK(identification_check(abs, quadrants));

  // Both boxes lie in the positive quadrant, where the map is the identity.
  const std::vector<Box> shifted = {Box::uniform(2, 0.1, 0.4), Box::uniform(2, 0.6, 0.9)};
  CHECK_FALSE(identification_check(abs, shifted));

  const std::vector<Box> intervals = {Box::uniform(1, 0, 1), Box::uniform(1, 1, 2), Box::uniform(1, 2, 3)};
  CHECK(identification_check(build_sawtooth_net(3), intervals));
  CHECK(identification_check(build_folding_rectifier_net(1, {3, 2}).net, intervals));
}

TEST_CASE("witness spec JSON") {
  const std::string j = witness_spec_json(build_shi_layer(3).spec);
  CHECK(j.find("\"predicted_count\": 16") != std::string::npos);
  CHECK(j.find("\"exact\": true") != std::string::npos);
  CHECK(j.find("ShiLayer") != std::string::npos);
}
