#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pwl/network.hpp"

namespace pwl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(unsigned n, unsigned k);

/// Regions of n1 hyperplanes in general position in R^n0: sum_{j<=n0} C(n1, j).
BigInt shallow_max_regions(int n0, int n1);

/// 2^N for a rectifier structure with N hidden units.
BigInt rectifier_upper_bound(const NetworkStructure& s);

/// (prod_{i<L} floor(n_i/n0)^n0) * sum_{j<=n0} C(n_L, j). Needs n_i >= n0.
BigInt deep_rectifier_lower(const NetworkStructure& s);

/// Same, with the remainder m_l = n_l mod n0 spread over the groups:
/// floor(n_l/n0)^(n0-m_l) * (floor(n_l/n0)+1)^m_l per layer.
BigInt deep_rectifier_lower_refined(const NetworkStructure& s);

/// Single maxout layer, n inputs, m units of rank k:
/// (k^min(n,m), min(sum_{j<=n} C(k^2 m, j), k^m)).
std::pair<BigInt, BigInt> maxout_layer_bounds(int n, int m, int k);

/// k^(L-1+n0) for L maxout layers of width n0 and rank k.
BigInt deep_maxout_lower(int n0, int L, int k);

struct RegionsPerParameter {
  Rational deep;
  Rational shallow;
  BigInt deep_regions, deep_params;
  BigInt shallow_regions, shallow_params;
  std::optional<std::string> note;
};

/// Lower-bound regions per parameter of a rectifier structure against a
/// shallow net with the same number of units.
RegionsPerParameter regions_per_parameter(const NetworkStructure& s);

/// Product of all group sizes p_{l,i}: the number of input neighbourhoods the
/// first layers identify onto one cube.
BigInt identified_region_count(const std::vector<std::vector<int>>& fold_counts);

/// Every bound that applies to `s`; inapplicable ones are empty and explained
/// in `notes`.
struct BoundReport {
  NetworkStructure structure;
  BigInt shallow_max;
  std::optional<BigInt> upper_2N;
  std::optional<BigInt> deep_rectifier_lower;
  std::optional<BigInt> deep_rectifier_lower_refined;
  std::optional<BigInt> maxout_lower;
  std::optional<BigInt> maxout_upper;
  BigInt params;
  std::optional<RegionsPerParameter> regions_per_param;
  std::vector<std::string> notes;
};

BoundReport bound_report(const NetworkStructure& s);

std::string bound_report_json(const BoundReport& r);
std::string bound_report_text(const BoundReport& r);

}  // namespace pwl
