#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "qvor/voronoi.hpp"

namespace qvor {

struct SvgOptions {
  int size = 480;          // canvas width and height, px
  int resolution = 160;    // cell raster, samples per axis
  bool ellipsoid_view = false;  // draw (xi_1, xi_d, xi_{d+1}) instead of the unit sphere
  Eigen::Vector3d view = Eigen::Vector3d(1.0, 0.55, 0.4);  // towards the viewer
  std::string title;
  std::string config_hash;
};

// Orthographic picture of the front hemisphere: cells coloured by nearest
// site, boundary polylines, site markers (hollow when on the far side).
// Output is deterministic for fixed inputs.
std::string render_svg(const PureStateModel& model, std::span<const Eigen::Vector3d> sites,
                       const DistanceKind& kind, const BoundaryResult& boundary,
                       const SvgOptions& options = {});

}  // namespace qvor
