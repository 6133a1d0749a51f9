#include <doctest.h>

#include <json.hpp>

#include "pwl/constructions.hpp"
#include "pwl/region_io.hpp"

using namespace pwl;
using nlohmann::json;

TEST_CASE("region report JSON") {
  const auto rs = enumerate_regions(build_abs_net().net);
  const json doc = json::parse(region_report_json(rs));
  CHECK(doc["count"] == 4);
  CHECK(doc["cell_count"] == 4);
  CHECK(doc["box"] == 1000.0);
  CHECK(doc["layers_processed"] == 2);
  REQUIRE(doc["regions"].size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& r = doc["regions"][i];
    CHECK(r["pattern"] == pattern_code(rs.regions[i].pattern));
    CHECK(r["witness"].size() == 2);
    CHECK(r["affine"]["matrix"].size() == 2);
    CHECK(r["constraints"].size() == rs.regions[i].constraints.size());
    CHECK(r["constraints"][0].size() == 3);
  }
  const json lean = json::parse(region_report_json(rs, false));
  CHECK(lean["count"] == 4);

  const auto shifted = enumerate_regions(build_abs_net().net, Box::uniform(2, -1, 3), {});
  const json b = json::parse(region_report_json(shifted))["box"];
  CHECK(b["lower"] == json::array({-1.0, -1.0}));
  CHECK(b["upper"] == json::array({3.0, 3.0}));
}

TEST_CASE("polygon CSV and SVG") {
  const auto rs = enumerate_regions(build_abs_net().net, Box::symmetric(2, 1), {});
  const auto polys = region_polygons_2d(rs);
  const std::string csv = polygons_csv(polys);
  CHECK(csv.rfind("region_id,vertex_index,x,y\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 16);
  const std::string svg = polygons_svg(polys, rs);
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t paths = 0;
  for (auto pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++paths;
  CHECK(paths == 4);
  // Same input, same bytes.
  CHECK(polygons_svg(polys, rs) == svg);
}
