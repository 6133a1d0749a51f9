#include <doctest.h>

#include "oracles.hpp"
#include "pwl/bounds.hpp"

using namespace pwl;

TEST_CASE("shallow maximum") {
  CHECK(shallow_max_regions(2, 3) == 7);
  CHECK(shallow_max_regions(2, 0) == 1);
  CHECK(shallow_max_regions(2, 20) == 211);
  for (int n0 = 1; n0 <= 5; ++n0)
    for (int n1 = 0; n1 <= 30; ++n1) {
      std::uint64_t s = 0;
      for (int j = 0; j <= n0; ++j) s += oracle::binom(n1, j);
      CHECK(shallow_max_regions(n0, n1) == s);
    }
}

TEST_CASE("2^N upper bound") {
  CHECK(rectifier_upper_bound(NetworkStructure::rectifier(2, {3})) == 8);
  CHECK(rectifier_upper_bound(NetworkStructure::rectifier(1, {1})) == 2);
  CHECK(rectifier_upper_bound(NetworkStructure::rectifier(2, {10, 10})) == 1048576);
  // Beyond 64 bits.
  CHECK(rectifier_upper_bound(NetworkStructure::rectifier(2, {50, 50})).str() ==
        "1267650600228229401496703205376");
  CHECK_THROWS_AS(rectifier_upper_bound(NetworkStructure::maxout(2, {2}, 2)), std::domain_error);
}

TEST_CASE("deep rectifier lower bound") {
  CHECK(deep_rectifier_lower(NetworkStructure::rectifier(1, {2, 2})) == 6);
  CHECK(deep_rectifier_lower(NetworkStructure::rectifier(2, {4, 4, 4})) == 176);
  CHECK(deep_rectifier_lower(NetworkStructure::rectifier(2, {2, 2})) == 4);
  try {
    deep_rectifier_lower(NetworkStructure::rectifier(3, {2, 5}));
    FAIL("expected a hypothesis error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("n_i >= n0") != std::string::npos);
  }
}

TEST_CASE("refined lower bound") {
  CHECK(deep_rectifier_lower_refined(NetworkStructure::rectifier(2, {5, 3})) == 42);
  CHECK(deep_rectifier_lower_refined(NetworkStructure::rectifier(2, {4, 4})) == 44);
  CHECK(deep_rectifier_lower_refined(NetworkStructure::rectifier(3, {7, 3})) == 96);
}

TEST_CASE("maxout bounds") {
  CHECK(maxout_layer_bounds(2, 3, 2) == std::pair<BigInt, BigInt>(4, 8));
  CHECK(maxout_layer_bounds(1, 1, 2) == std::pair<BigInt, BigInt>(2, 2));
  CHECK(maxout_layer_bounds(3, 2, 3) == std::pair<BigInt, BigInt>(9, 9));
  // The arrangement term wins when k^m is large: n = 1, m = 10, k = 2 -> 1 + 40.
  CHECK(maxout_layer_bounds(1, 10, 2).second == 41);
  CHECK(deep_maxout_lower(2, 3, 3) == 81);
  CHECK(deep_maxout_lower(1, 1, 2) == 2);
  CHECK(deep_maxout_lower(2, 2, 2) == 8);
  for (int n0 = 1; n0 <= 4; ++n0)
    for (int L = 1; L <= 4; ++L)
      for (int k = 2; k <= 4; ++k) {
        BigInt expect = 1;
        for (int i = 0; i < L - 1 + n0; ++i) expect *= k;
        CHECK(deep_maxout_lower(n0, L, k) == expect);
      }
}

TEST_CASE("regions per parameter, small case") {
  const auto r = regions_per_parameter(NetworkStructure::rectifier(1, {2, 2}));
  // Deep: 6 regions, 2*2 + 2*3 = 10 parameters. Shallow: 4 units,
  // 1 + 4 = 5 regions, 4*2 = 8 parameters.
  CHECK(r.deep_regions == 6);
  CHECK(r.deep_params == 10);
  CHECK(r.shallow_regions == 5);
  CHECK(r.shallow_params == 8);
  CHECK(r.deep == Rational(3, 5));
  CHECK(r.shallow == Rational(5, 8));
  CHECK_FALSE(r.note.has_value());
}

TEST_CASE("regions per parameter: one layer gives equal ratios, depth helps") {
  for (int n = 2; n <= 6; ++n) {
    const auto r = regions_per_parameter(NetworkStructure::rectifier(2, {n}));
    CHECK(r.deep == r.shallow);
  }
  Rational prev = 0;
  for (int L = 1; L <= 6; ++L) {
    const auto r = regions_per_parameter(NetworkStructure::rectifier(2, std::vector<int>(L, 4)));
    CHECK(r.deep > prev);
    prev = r.deep;
    // Shallow ratio stays below (N^2 / 2 + N + 1) / (3 N) with N = 4L units.
    const int N = 4 * L;
    CHECK(r.shallow <= Rational(N * N + 2 * N + 2, 6 * N));
  }
  CHECK(regions_per_parameter(NetworkStructure::rectifier(2, {4, 6})).note.has_value());
}

TEST_CASE("identified region count") {
  CHECK(identified_region_count({{2, 2}}) == 4);
  CHECK(identified_region_count({{1, 1, 1}}) == 1);
  CHECK(identified_region_count({{2, 3}, {3, 2}}) == 36);
  CHECK_THROWS_AS(identified_region_count({{0}}), std::domain_error);
}

TEST_CASE("property: lower <= refined <= 2^N on every admissible structure") {
  for (int n0 = 1; n0 <= 3; ++n0)
    for (int a = n0; a <= 7; ++a)
      for (int b = n0; b <= 7; ++b)
        for (int c = n0; c <= 5; ++c) {
          const auto s = NetworkStructure::rectifier(n0, {a, b, c});
          const BigInt lo = deep_rectifier_lower(s), ref = deep_rectifier_lower_refined(s);
          CHECK(lo <= ref);
          CHECK(ref <= rectifier_upper_bound(s));
          if (a % n0 == 0 && b % n0 == 0) CHECK(lo == ref);
        }
}

TEST_CASE("bound report") {
  const auto r = bound_report(NetworkStructure::rectifier(2, {4, 4, 4}));
  CHECK(*r.deep_rectifier_lower == 176);
  CHECK(r.shallow_max == shallow_max_regions(2, 12));
  const std::string json = bound_report_json(r);
  CHECK(json.find("\"deep_rectifier_lower\": 176") != std::string::npos);
  const auto big = bound_report(NetworkStructure::rectifier(2, {40, 40}));
  CHECK(bound_report_json(big).find("\"upper_2N\": \"1208925819614629174706176\"") != std::string::npos);
  const auto thin = bound_report(NetworkStructure::rectifier(3, {2}));
  CHECK_FALSE(thin.deep_rectifier_lower.has_value());
  CHECK_FALSE(thin.notes.empty());
  const auto mx = bound_report(NetworkStructure::maxout(2, {3}, 2));
  CHECK(*mx.maxout_lower == 4);
  CHECK(*mx.maxout_upper == 8);
  CHECK(bound_report_text(mx).find("maxout_upper") != std::string::npos);
}
