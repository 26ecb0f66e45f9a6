#pragma once

#include <string>

#include "fracstab/boundary.hpp"
#include "fracstab/regions.hpp"
#include "fracstab/simulate.hpp"
#include "fracstab/stability.hpp"

// Text emitters for every output file. All numbers go through
// format_double or the JSON library's round-trip printer, so identical
// inputs give byte-identical output.

namespace fracstab {

/// {"class", "margin", "base_order", "roots": [[re, im], ...], ...}
std::string verdict_json(const StabilityVerdict& v);

/// omega,p1,p2,branch_id ; straight boundaries are two-point segments
/// spanning `window` with an empty omega column.
std::string boundary_csv(const BoundarySet& set, const Window& window);

/// Boundary-only plot.
std::string boundary_svg(const BoundarySet& set, const Plane& plane, const Window& window);

/// p1,p2,verdict per cell centre, scan order.
std::string region_csv(const RegionMap& map);
std::string region_json(const RegionMap& map);
/// Cells coloured by verdict with optional boundary overlay.
std::string region_svg(const RegionMap& map, const BoundarySet* boundaries = nullptr);

/// Index of a sweep: axis, values and per-layer file stems and counts.
std::string sweep_index_json(const SweepStack& stack, const std::string& layer_prefix);
/// One stable-set outline per layer, stroke lightness following the value.
std::string sweep_svg(const SweepStack& stack);

std::string robust_csv(const RobustRegion& robust);
std::string robust_json(const RobustRegion& robust);
std::string robust_svg(const RobustRegion& robust);

/// t,y
std::string trajectory_csv(const SimResult& result);
std::string simulation_json(const SimResult& result, const SimConfig& cfg);

}  // namespace fracstab
