#pragma once

#include <cstdint>
#include <vector>

#include "fracurv/models.hpp"
#include "fracurv/polygon.hpp"
#include "fracurv/tree.hpp"

namespace fracurv {

/// Axis-aligned pixel grid over a window of the plane. Pixel (x, y) covers
/// the square [origin + (x, y) * h, origin + (x + 1, y + 1) * h); its sample
/// point is the center. Row y = 0 is the bottom row.
struct BinaryMask {
  int width = 0;
  int height = 0;
  double h = 0.0;  // pixel side length in world units
  Vec2 origin;     // world position of the lower-left corner of pixel (0, 0)
  std::vector<std::uint8_t> bits;  // row-major, bits[y * width + x]

  BinaryMask() = default;
  BinaryMask(int w, int ht, double px, Vec2 org)
      : width(w), height(ht), h(px), origin(org),
        bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(ht), 0) {}

  bool test(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y) {
    bits[static_cast<std::size_t>(y) * width + x] = 1;
  }
  Vec2 center(int x, int y) const {
    return {origin.x + (x + 0.5) * h, origin.y + (y + 0.5) * h};
  }
  std::int64_t count() const;
  bool touches_border() const;
};

/// Paints the filled convex polygon onto the mask: every pixel whose center
/// is covered, with a 2x2 subsample vote at run boundaries; a polygon smaller
/// than a pixel still marks the pixel under its centroid and vertices, so no
/// cell of a cover is ever dropped.
void paint_convex_polygon(BinaryMask& mask, const Polygon& poly);

/// Grid spanning `lo..hi` padded by `margin` world units, pixel size h.
/// Throws when the span would exceed `max_pixels` on either axis.
BinaryMask make_grid(Vec2 lo, Vec2 hi, double h, double margin,
                     int max_pixels = 1 << 15);

/// Rasterizes the stopped cover {f_sigma(O)} of an already materialized tree.
/// `margin` is extra padding in world units (room for later dilation).
/// Requires h <= stop-diameter so cells cannot straddle a pixel unseen; in
/// practice h is far below it.
BinaryMask rasterize_cover(const LabeledTree& tree, const MarkovStop& stop,
                           const OpenSetSpec& open_set, double h,
                           double margin);

/// Streaming variant: realizes the tree on the fly at stop radius `delta`,
/// painting into a grid spanning the open set. Cells are enumerated once and
/// never stored. When `by_first_letter` is non-null it is resized to one
/// mask per root map (same grid geometry); each non-root cell is painted
/// into the mask of its first letter as well.
BinaryMask rasterize_cover_streamed(const TreeModel& model, std::uint64_t seed,
                                    double delta, double R,
                                    const OpenSetSpec& open_set, double h,
                                    double margin,
                                    std::vector<BinaryMask>* by_first_letter = nullptr);

}  // namespace fracurv
