#pragma once

#include <cstdint>
#include <vector>

#include "fracurv/raster.hpp"

namespace fracurv {

/// Squared Euclidean distance, in pixel units, from each pixel center to the
/// nearest occupied pixel center. Exact integers: the two-pass parabola
/// method introduces no rounding. kFar marks pixels with no occupied pixel in
/// reach (only possible on an empty mask, which is rejected anyway).
struct DistanceField {
  int width = 0;
  int height = 0;
  double h = 0.0;
  Vec2 origin;
  std::vector<std::int32_t> sq;  // row-major squared distances in pixels

  std::int32_t at(int x, int y) const {
    return sq[static_cast<std::size_t>(y) * width + x];
  }
};

/// Exact Euclidean distance transform of the occupied pixels. Throws on an
/// empty mask. Square grids up to 32768 pixels per side stay within int32.
DistanceField distance_transform(const BinaryMask& mask);

/// Thresholds the field at radius eps (world units): the parallel set of the
/// occupied pixels, sampled at pixel centers. Throws when the resulting set
/// touches the grid border, since curvature estimates would then see a
/// clipped boundary.
BinaryMask parallel_set(const DistanceField& field, double eps);

}  // namespace fracurv
