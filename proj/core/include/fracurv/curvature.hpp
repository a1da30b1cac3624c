#pragma once

#include "fracurv/distance.hpp"
#include "fracurv/raster.hpp"

namespace fracurv {

/// The three intrinsic volumes of a pixel set in the plane, in the
/// normalization where c1 is half the boundary length: c0 is the Euler
/// characteristic, c1 half the perimeter, c2 the area.
struct CurvatureTriple {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Curvature triple of the closed union of occupied pixels. The Euler
/// characteristic is combinatorial (vertices - edges + faces of the closed
/// cubical complex, so foreground components count with 8-connectivity and
/// holes with 4-connectivity); the perimeter follows the zero level of the
/// signed pixel distance, which needs two distance transforms. Throws when
/// an occupied pixel touches the grid border.
CurvatureTriple curvature_triple(const BinaryMask& mask);

/// Curvature triple of the parallel set {dist <= eps} sampled on the grid of
/// `field`. The inside rule is the same comparison parallel_set uses, and the
/// boundary is interpolated from the distance values themselves, so one field
/// serves every radius. Throws when the set touches the grid border.
CurvatureTriple levelset_curvature(const DistanceField& field, double eps);

}  // namespace fracurv
