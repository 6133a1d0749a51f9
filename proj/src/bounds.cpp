#include "pwl/bounds.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pwl {

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt shallow_max_regions(int n0, int n1) {
  if (n0 < 1 || n1 < 0) throw std::domain_error("shallow_max_regions needs n0 >= 1, n1 >= 0");
  BigInt sum = 0;
  for (int j = 0; j <= n0; ++j) sum += binomial(static_cast<unsigned>(n1), static_cast<unsigned>(j));
  return sum;
}

namespace {

void require_rectifier(const NetworkStructure& s, const char* what) {
  s.validate();
  if (!s.all_rectifier()) throw std::domain_error(std::string(what) + " applies to rectifier networks only");
}

// Deep lower bounds need every hidden width at least the input dimension.
void require_wide(const NetworkStructure& s) {
  for (std::size_t l = 0; l < s.layers.size(); ++l)
    if (s.layers[l].width < s.input_dim)
      throw std::domain_error("deep rectifier lower bound needs n_i >= n0 for every layer; layer " +
                              std::to_string(l + 1) + " has width " +
                              std::to_string(s.layers[l].width) + " < n0 = " +
                              std::to_string(s.input_dim));
}

BigInt ipow(BigInt base, long long e) {
  BigInt r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

BigInt rectifier_upper_bound(const NetworkStructure& s) {
  require_rectifier(s, "the 2^N upper bound");
  return ipow(2, s.total_units());
}

BigInt deep_rectifier_lower(const NetworkStructure& s) {
  require_rectifier(s, "the deep rectifier lower bound");
  require_wide(s);
  const int n0 = s.input_dim;
  BigInt prod = 1;
  for (std::size_t l = 0; l + 1 < s.layers.size(); ++l) prod *= ipow(s.layers[l].width / n0, n0);
  return prod * shallow_max_regions(n0, s.layers.back().width);
}

BigInt deep_rectifier_lower_refined(const NetworkStructure& s) {
  require_rectifier(s, "the deep rectifier lower bound");
  require_wide(s);
  const int n0 = s.input_dim;
  BigInt prod = 1;
  for (std::size_t l = 0; l + 1 < s.layers.size(); ++l) {
    const int q = s.layers[l].width / n0;
    const int m = s.layers[l].width % n0;
    prod *= ipow(q, n0 - m) * ipow(q + 1, m);
  }
  return prod * shallow_max_regions(n0, s.layers.back().width);
}

std::pair<BigInt, BigInt> maxout_layer_bounds(int n, int m, int k) {
  if (n < 1 || m < 1 || k < 2) throw std::domain_error("maxout_layer_bounds needs n, m >= 1, k >= 2");
  const BigInt lower = ipow(k, std::min(n, m));
  const BigInt arrangement = shallow_max_regions(n, k * k * m);
  return {lower, std::min(arrangement, ipow(k, m))};
}

BigInt deep_maxout_lower(int n0, int L, int k) {
  if (n0 < 1 || L < 1 || k < 2) throw std::domain_error("deep_maxout_lower needs n0, L >= 1, k >= 2");
  return ipow(k, L - 1 + n0);
}

RegionsPerParameter regions_per_parameter(const NetworkStructure& s) {
  require_rectifier(s, "regions per parameter");
  RegionsPerParameter r;
  r.deep_regions = deep_rectifier_lower(s);
  r.deep_params = BigInt(parameter_count(s));
  const auto shallow = NetworkStructure::rectifier(s.input_dim, {s.total_units()});
  r.shallow_regions = shallow_max_regions(s.input_dim, s.total_units());
  r.shallow_params = BigInt(parameter_count(shallow));
  r.deep = Rational(r.deep_regions, r.deep_params);
  r.shallow = Rational(r.shallow_regions, r.shallow_params);
  const auto w = s.widths();
  if (std::adjacent_find(w.begin(), w.end(), std::not_equal_to<>()) != w.end())
    r.note = "hidden widths are not constant; the comparison assumes a constant width";
  return r;
}

BigInt identified_region_count(const std::vector<std::vector<int>>& fold_counts) {
  BigInt prod = 1;
  for (const auto& layer : fold_counts)
    for (int p : layer) {
      if (p < 1) throw std::domain_error("fold counts must be at least 1");
      prod *= p;
    }
  return prod;
}

BoundReport bound_report(const NetworkStructure& s) {
  s.validate();
  BoundReport r;
  r.structure = s;
  r.shallow_max = shallow_max_regions(s.input_dim, s.total_units());
  r.params = BigInt(parameter_count(s));

  if (s.all_rectifier()) {
    r.upper_2N = rectifier_upper_bound(s);
    try {
      r.deep_rectifier_lower = deep_rectifier_lower(s);
      r.deep_rectifier_lower_refined = deep_rectifier_lower_refined(s);
      r.regions_per_param = regions_per_parameter(s);
      if (r.regions_per_param->note) r.notes.push_back(*r.regions_per_param->note);
    } catch (const std::domain_error& e) {
      r.notes.push_back(e.what());
    }
    return r;
  }

  const int k = s.layers.front().activation.rank;
  const bool uniform = std::all_of(s.layers.begin(), s.layers.end(), [&](const LayerShape& l) {
    return l.activation.is_maxout() && l.activation.rank == k;
  });
  if (!uniform) {
    r.notes.push_back("mixed activations: no closed-form bound applies");
    return r;
  }
  if (s.layers.size() == 1) {
    auto [lo, hi] = maxout_layer_bounds(s.input_dim, s.layers[0].width, k);
    r.maxout_lower = lo;
    r.maxout_upper = hi;
    return r;
  }
  const bool width_n0 = std::all_of(s.layers.begin(), s.layers.end(),
                                    [&](const LayerShape& l) { return l.width == s.input_dim; });
  if (width_n0)
    r.maxout_lower = deep_maxout_lower(s.input_dim, static_cast<int>(s.layers.size()), k);
  else
    r.notes.push_back("deep maxout lower bound needs every layer of width n0");
  r.notes.push_back("no upper bound for deep maxout networks beyond single layers");
  return r;
}

namespace {

using nlohmann::json;

json big(const BigInt& v) {
  if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max()))
    return json(static_cast<std::uint64_t>(v));
  return json(v.str());
}

json big(const std::optional<BigInt>& v) { return v ? big(*v) : json(nullptr); }

json rational(const Rational& q) {
  return json{{"num", big(BigInt(numerator(q)))},
              {"den", big(BigInt(denominator(q)))},
              {"value", static_cast<double>(q)}};
}

std::string activation_name(const ActivationKind& a) {
  return a.is_maxout() ? "maxout(" + std::to_string(a.rank) + ")" : "rectifier";
}

}  // namespace

std::string bound_report_json(const BoundReport& r) {
  json layers = json::array();
  for (const auto& l : r.structure.layers)
    layers.push_back({{"width", l.width}, {"activation", activation_name(l.activation)}});
  json doc{{"structure", {{"input_dim", r.structure.input_dim}, {"layers", layers}}},
           {"shallow_max", big(r.shallow_max)},
           {"upper_2N", big(r.upper_2N)},
           {"deep_rectifier_lower", big(r.deep_rectifier_lower)},
           {"deep_rectifier_lower_refined", big(r.deep_rectifier_lower_refined)},
           {"maxout_lower", big(r.maxout_lower)},
           {"maxout_upper", big(r.maxout_upper)},
           {"params", big(r.params)},
           {"notes", r.notes}};
  if (r.regions_per_param) {
    const auto& q = *r.regions_per_param;
    doc["regions_per_param"] = {{"deep", rational(q.deep)},
                                {"shallow", rational(q.shallow)},
                                {"shallow_units", r.structure.total_units()}};
  } else {
    doc["regions_per_param"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string bound_report_text(const BoundReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::string widths;
  for (const auto& l : r.structure.layers)
    widths += (widths.empty() ? "" : ",") + std::to_string(l.width);
  auto opt = [](const std::optional<BigInt>& v) { return v ? v->str() : std::string("-"); };
  rows.emplace_back("input_dim", std::to_string(r.structure.input_dim));
  rows.emplace_back("widths", widths);
  rows.emplace_back("activation", activation_name(r.structure.layers.front().activation));
  rows.emplace_back("params", r.params.str());
  rows.emplace_back("shallow_max", r.shallow_max.str());
  rows.emplace_back("upper_2N", opt(r.upper_2N));
  rows.emplace_back("deep_rectifier_lower", opt(r.deep_rectifier_lower));
  rows.emplace_back("deep_rectifier_lower_refined", opt(r.deep_rectifier_lower_refined));
  rows.emplace_back("maxout_lower", opt(r.maxout_lower));
  rows.emplace_back("maxout_upper", opt(r.maxout_upper));
  if (r.regions_per_param) {
    rows.emplace_back("regions_per_param.deep", r.regions_per_param->deep.str());
    rows.emplace_back("regions_per_param.shallow", r.regions_per_param->shallow.str());
  }
  std::size_t w = 0;
  for (const auto& [k, v] : rows) w = std::max(w, k.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  return out.str();
}

}  // namespace pwl
