#pragma once

#include <string>

#include "fracurv/raster.hpp"
#include "fracurv/tree.hpp"

namespace fracurv {

/// Writes the stopped cover as an SVG: one polygon per cell, colored by the
/// cell's depth in the tree so the construction scales are distinguishable,
/// with the open set outlined behind them.
void render_svg(const LabeledTree& tree, const MarkovStop& stop,
                const OpenSetSpec& open_set, const std::string& path);

/// Writes the mask as a binary PGM (P5, maxval 255), occupied pixels black.
/// Rows are emitted top to bottom, so the image is oriented like the plane.
void write_pgm(const BinaryMask& mask, const std::string& path);

}  // namespace fracurv
