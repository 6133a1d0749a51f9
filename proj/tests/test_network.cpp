#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "pwl/constructions.hpp"
#include "pwl/network.hpp"
#include "pwl/network_io.hpp"
#include "pwl/rng.hpp"

using namespace pwl;

TEST_CASE("forward on the quadrant net folds every quadrant onto the first") {
  const Network abs = build_abs_net().net;
  for (Eigen::Vector2d x : {Eigen::Vector2d(-2, 3), Eigen::Vector2d(2, 3), Eigen::Vector2d(2, -3),
                            Eigen::Vector2d(-2, -3)})
    CHECK((evaluate(abs, x) - Eigen::Vector2d(2, 3)).norm() == 0.0);
  CHECK(evaluate(abs, Eigen::Vector2d(0, 0)).norm() == 0.0);
}

TEST_CASE("zero network gives zero activations everywhere") {
  Network net;
  net.input_dim = 3;
  net.layers.push_back(Layer::rectifier(Matrix::Zero(4, 3), Vector::Zero(4)));
  net.layers.push_back(Layer::maxout(2, Matrix::Zero(4, 4), Vector::Zero(4)));
  Rng rng(5);
  for (int i = 0; i < 20; ++i)
    for (const auto& a : forward(net, rng.normal_vector(3))) CHECK(a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sawtooth net: intermediary value and pattern at 1.5") {
  const Network saw = build_sawtooth_net(3);
  const auto acts = forward(saw, Vector::Constant(1, 1.5));
  CHECK(acts[1][0] == doctest::Approx(0.5).epsilon(1e-15));
  const auto p = pattern_at(saw, Vector::Constant(1, 1.5));
  CHECK(p[0] == std::vector<int>{1, 1, 0});
}

TEST_CASE("pattern tie rule: zero pre-activation is inactive, maxout ties take the lowest branch") {
  Network net;
  net.input_dim = 1;
  net.layers.push_back(Layer::rectifier(Matrix::Constant(1, 1, 1.0), Vector::Zero(1)));
  CHECK(pattern_at(net, Vector::Zero(1))[0][0] == 0);
  Network mx;
  mx.input_dim = 1;
  Matrix W(3, 1);
  W << 1, 1, 0;
  mx.layers.push_back(Layer::maxout(3, W, Vector::Zero(3)));
  CHECK(pattern_at(mx, Vector::Constant(1, 2.0))[0][0] == 0);
  CHECK(pattern_at(mx, Vector::Constant(1, -2.0))[0][0] == 2);
  CHECK(pattern_at(mx, Vector::Zero(1))[0][0] == 0);
}

TEST_CASE("pattern on the quadrant net at (1, -1)") {
  const auto p = pattern_at(build_abs_net().net, Eigen::Vector2d(1, -1));
  CHECK(p[0] == std::vector<int>{1, 0, 0, 1});
}

TEST_CASE("negative orthant with nonnegative weights and zero bias is all inactive") {
  Rng rng(11);
  Network net;
  net.input_dim = 3;
  Matrix W = rng.normal_matrix(5, 3).cwiseAbs();
  net.layers.push_back(Layer::rectifier(W, Vector::Zero(5)));
  const auto p = pattern_at(net, Vector::Constant(3, -50.0));
  CHECK(p[0] == std::vector<int>(5, 0));
}

TEST_CASE("parameter counts") {
  CHECK(parameter_count(NetworkStructure::rectifier(2, {4, 4})) == 32);
  CHECK(parameter_count(NetworkStructure::rectifier(1, {1})) == 2);
  CHECK(parameter_count(NetworkStructure::maxout(2, {2}, 3)) == 18);
  for (int L = 1; L <= 6; ++L) {
    const int n0 = 3, n = 5;
    CHECK(parameter_count(NetworkStructure::rectifier(n0, std::vector<int>(L, n))) ==
          static_cast<std::size_t>(n * (n0 + 1) + (L - 1) * n * (n + 1)));
  }
}

TEST_CASE("structure validation rejects empty and zero-width stacks") {
  CHECK_THROWS_AS(NetworkStructure::rectifier(2, {}).validate(), StructureError);
  CHECK_THROWS_AS(NetworkStructure::rectifier(2, {3, 0}).validate(), StructureError);
  CHECK_THROWS_AS(NetworkStructure::rectifier(0, {3}).validate(), StructureError);
  CHECK_THROWS_AS(ActivationKind::maxout(1), StructureError);
}

TEST_CASE("forward rejects a wrong input dimension") {
  CHECK_THROWS_AS(forward(build_abs_net().net, Vector::Zero(3)), StructureError);
}

TEST_CASE("property: forward equals the pattern-fixed affine map at 1000 points") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    Rng sub = rng.split(trial);
    const int rank = trial % 2 ? 3 : 1;
    const Network net = random_network(1 + trial % 3, {5, 4, 3}, sub, rank);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector x = sub.uniform_vector(net.input_dim, -4, 4);
      const AffineMap m = pattern_affine_map(net, pattern_at(net, x));
      worst = std::max(worst, (m(x) - evaluate(net, x)).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("property: the pattern is locally constant on the folding net") {
  // Kinks of the 1-D fold: 0 and 1 from the first layer, t and 2 - t for
  // every cut point t of the last layer.
  const auto w = build_folding_rectifier_net(1, {2, 2});
  std::vector<double> kinks = {0.0, 1.0};
  const Layer& cut = w.folds.back();
  for (int u = 0; u < cut.width; ++u) {
    const double t = -cut.bias[u] / cut.weights(u, 0);
    kinks.push_back(t);
    kinks.push_back(2.0 - t);
  }
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(-1, 3);
    double d = INFINITY;
    for (double k : kinks) d = std::min(d, std::abs(x - k));
    const auto p = pattern_at(w.net, Vector::Constant(1, x));
    for (double f : {-0.99, -0.5, 0.5, 0.99})
      CHECK(pattern_at(w.net, Vector::Constant(1, x + f * d)) == p);
  }
}

TEST_CASE("pattern codes") {
  CHECK(pattern_code({{1, 0, 1}, {2, 11}}) == "101.2b");
}

TEST_CASE("json round trip is bit exact") {
  Rng rng(3);
  const std::vector<Network> nets = {build_abs_net().net, build_catalan_layer(3).net,
                                     build_folding_rectifier_net(2, {5, 3}).net,
                                     random_network(2, {3, 3}, rng, 2)};
  for (const auto& net : nets) {
    const Network back = network_from_json(network_to_json(net));
    REQUIRE(back.layers.size() == net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      CHECK(back.layers[l].activation == net.layers[l].activation);
      CHECK((back.layers[l].weights.array() == net.layers[l].weights.array()).all());
      CHECK((back.layers[l].bias.array() == net.layers[l].bias.array()).all());
    }
  }
  const auto path = std::filesystem::temp_directory_path() / "pwl_roundtrip.json";
  save_network(nets[3], path);
  const Network loaded = load_network(path);
  CHECK((loaded.layers[1].weights.array() == nets[3].layers[1].weights.array()).all());
  std::filesystem::remove(path);
}

TEST_CASE("json parse errors name the problem") {
  const std::string bad_rows = R"({"input_dim": 2, "layers": [{"activation": "rectifier",
      "width": 2, "weights": [[1, 0]], "bias": [0, 0]}]})";
  try {
    network_from_json(bad_rows);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("layer 1") != std::string::npos);
    CHECK(std::string(e.what()).find("weights has 1 rows, expected 2") != std::string::npos);
  }
  const std::string rank_on_relu = R"({"input_dim": 1, "layers": [{"activation": "rectifier",
      "rank": 2, "width": 1, "weights": [[1]], "bias": [0]}]})";
  try {
    network_from_json(rank_on_relu);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("rank not allowed") != std::string::npos);
  }
  CHECK_THROWS_AS(network_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(network_from_json(R"({"input_dim": 1, "layers": []})"), ParseError);
}
