#pragma once

#include <span>
#include <string>

#include "gvdtg/grid.hpp"
#include "gvdtg/gvd.hpp"
#include "gvdtg/sim.hpp"
#include "gvdtg/topology.hpp"

namespace gvdtg {

struct RenderLayers {
  const TopoGraph* graph = nullptr;
  std::span<const GvdNode> disks;   // drawn as circles when non-empty
  std::span<const Pose> trajectory; // start dot and end star when non-empty
};

/// Map raster (row runs), optional disks, graph overlay and trajectory as a standalone SVG document.
std::string render_svg(const OccupancyGrid& map, const RenderLayers& layers);

}  // namespace gvdtg
