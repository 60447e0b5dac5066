#pragma once

#include <span>
#include <string>

#include "navflow/flow.hpp"

namespace navflow {

// SVG 1.1 drawing of a d=2 pattern and its links in the scaled domain:
// one circle per node, one line per link, the crossing surface as a
// highlighted segment (directed) or arc (radial), crossing-set nodes with a
// distinct class, and an optional highlighted trajectory polyline.
std::string render_svg(const PointPattern& pattern, const NavigationForest& forest,
                       const CrossingSurface* surface = nullptr,
                       std::span<const std::int32_t> crossing_nodes = {},
                       std::span<const std::int32_t> trajectory_nodes = {});

}  // namespace navflow
