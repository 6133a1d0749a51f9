#include "pwl/region_io.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pwl/network_io.hpp"

namespace pwl {

namespace {

using json = nlohmann::ordered_json;

json vec(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json box_json(const Box& b) {
  const bool symmetric = (b.lower + b.upper).cwiseAbs().maxCoeff() == 0.0 &&
                         (b.upper.array() == b.upper[0]).all();
  if (symmetric) return b.upper[0];
  return json{{"lower", vec(b.lower)}, {"upper", vec(b.upper)}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string region_report_json(const RegionSet& rs, bool geometry) {
  json doc;
  doc["count"] = rs.count();
  doc["cell_count"] = rs.cell_count();
  doc["box"] = box_json(rs.box);
  doc["layers_processed"] = rs.layers_processed;
  json regions = json::array();
  if (geometry) {
    for (std::size_t i = 0; i < rs.regions.size(); ++i) {
      const auto& r = rs.regions[i];
      json matrix = json::array();
      for (int row = 0; row < r.affine.rows(); ++row) matrix.push_back(vec(r.affine.matrix.row(row).transpose()));
      json constraints = json::array();
      for (const auto& c : r.constraints) {
        json row = vec(c.half.normal);
        row.push_back(c.half.offset);
        constraints.push_back(row);
      }
      regions.push_back({{"pattern", pattern_code(r.pattern)},
                         {"linear_region", rs.linear_region_of[i]},
                         {"witness", vec(r.witness)},
                         {"clearance", r.clearance},
                         {"affine", {{"matrix", matrix}, {"offset", vec(r.affine.offset)}}},
                         {"constraints", constraints}});
    }
  }
  doc["regions"] = regions;
  return doc.dump(2) + "\n";
}

std::string polygons_csv(const std::vector<RegionPolygon>& polys) {
  std::ostringstream out;
  out << "region_id,vertex_index,x,y\n";
  for (const auto& p : polys)
    for (std::size_t v = 0; v < p.vertices.size(); ++v)
      out << p.cell << ',' << v << ',' << format_double(p.vertices[v].x()) << ','
          << format_double(p.vertices[v].y()) << '\n';
  return out.str();
}

std::string polygons_svg(const std::vector<RegionPolygon>& polys, const RegionSet& rs,
                         int size_px) {
  const Box& b = rs.box;
  const double sx = size_px / (b.upper[0] - b.lower[0]);
  const double sy = size_px / (b.upper[1] - b.lower[1]);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
      << size_px << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">\n";
  char buf[64];
  for (const auto& p : polys) {
    const std::uint64_t h = fnv1a(pattern_code(rs.regions[p.cell].pattern));
    std::snprintf(buf, sizeof buf, "hsl(%d,%d%%,%d%%)", static_cast<int>(h % 360),
                  55 + static_cast<int>((h >> 12) % 30), 45 + static_cast<int>((h >> 24) % 25));
    out << "  <path fill=\"" << buf << "\" stroke=\"#222\" stroke-width=\"0.5\" d=\"";
    for (std::size_t v = 0; v < p.vertices.size(); ++v) {
      // SVG y grows downward.
      std::snprintf(buf, sizeof buf, "%s%.3f %.3f ", v == 0 ? "M" : "L",
                    (p.vertices[v].x() - b.lower[0]) * sx, (b.upper[1] - p.vertices[v].y()) * sy);
      out << buf;
    }
    out << "Z\"><title>" << pattern_code(rs.regions[p.cell].pattern) << "</title></path>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pwl
