#pragma once

#include <string>
#include <vector>

#include "pwl/regions.hpp"

namespace pwl {

/// {"count", "cell_count", "box", "layers_processed", "regions": [{"pattern",
/// "linear_region", "witness", "clearance", "affine": {"matrix", "offset"},
/// "constraints": [[normal..., offset]]}]}. "box" is the half-width when the
/// box is symmetric, else {"lower", "upper"}.
std::string region_report_json(const RegionSet& rs, bool geometry = true);

/// region_id,vertex_index,x,y with region_id the cell index.
std::string polygons_csv(const std::vector<RegionPolygon>& polys);

/// One path per cell, filled by a stable hash of its pattern.
std::string polygons_svg(const std::vector<RegionPolygon>& polys, const RegionSet& rs,
                         int size_px = 600);

}  // namespace pwl
