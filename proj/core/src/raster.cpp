#include "fracurv/raster.hpp"

#include "model_detail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fracurv {

std::int64_t BinaryMask::count() const {
  std::int64_t n = 0;
  for (std::uint8_t b : bits) n += b;
  return n;
}

bool BinaryMask::touches_border() const {
  for (int x = 0; x < width; ++x) {
    if (test(x, 0) || test(x, height - 1)) return true;
  }
  for (int y = 0; y < height; ++y) {
    if (test(0, y) || test(width - 1, y)) return true;
  }
  return false;
}

namespace {

bool inside_convex(const Polygon& poly, Vec2 p, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < -tol) return false;
  }
  return true;
}

// Interval of x covered by the polygon on the horizontal line y = cy.
// Assumes counterclockwise orientation; half-open vertex rule keeps each
// crossing counted once.
bool scan_interval(const Polygon& poly, double cy, double& xin, double& xout) {
  const std::size_t n = poly.size();
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = poly[i];
    Vec2 b = poly[(i + 1) % n];
    if (a.y == b.y) continue;
    const double ymin = std::min(a.y, b.y);
    const double ymax = std::max(a.y, b.y);
    if (cy < ymin || cy >= ymax) continue;
    const double t = (cy - a.y) / (b.y - a.y);
    const double x = a.x + t * (b.x - a.x);
    if (!any) {
      lo = hi = x;
      any = true;
    } else {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!any) return false;
  xin = lo;
  xout = hi;
  return true;
}

}  // namespace

void paint_convex_polygon(BinaryMask& mask, const Polygon& poly) {
  if (poly.size() < 3 || mask.width <= 0 || mask.height <= 0) return;

  // Composed maps may carry a reflection, which flips orientation; the scan
  // and the half-plane tests both want counterclockwise input.
  Polygon ccw = poly;
  if (polygon_area(ccw) < 0) std::reverse(ccw.begin(), ccw.end());

  double ymin = ccw[0].y, ymax = ccw[0].y;
  for (const Vec2& v : ccw) {
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double h = mask.h;
  const double tol = 1e-12 * std::max(1.0, polygon_diameter(ccw));

  int y0 = static_cast<int>(std::ceil((ymin - mask.origin.y) / h - 0.5));
  int y1 = static_cast<int>(std::floor((ymax - mask.origin.y) / h - 0.5));
  y0 = std::max(y0, 0);
  y1 = std::min(y1, mask.height - 1);

  bool painted = false;
  for (int y = y0; y <= y1; ++y) {
    const double cy = mask.origin.y + (y + 0.5) * h;
    double xin = 0.0, xout = 0.0;
    if (!scan_interval(ccw, cy, xin, xout)) continue;

    int x0 = static_cast<int>(std::ceil((xin - mask.origin.x) / h - 0.5));
    int x1 = static_cast<int>(std::floor((xout - mask.origin.x) / h - 0.5));
    for (int x = std::max(x0, 0); x <= std::min(x1, mask.width - 1); ++x) {
      mask.set(x, y);
      painted = true;
    }

    // Supersample the two pixels holding the interval endpoints: a 2x2 vote
    // keeps thin slivers that miss every center but still cover a good part
    // of a pixel. Majority threshold: two of the four subsamples.
    for (double xe : {xin, xout}) {
      const int px = static_cast<int>(std::floor((xe - mask.origin.x) / h));
      if (px < 0 || px >= mask.width) continue;
      if (mask.test(px, y)) continue;
      const Vec2 c = mask.center(px, y);
      int votes = 0;
      for (double dx : {-0.25 * h, 0.25 * h}) {
        for (double dy : {-0.25 * h, 0.25 * h}) {
          if (inside_convex(ccw, {c.x + dx, c.y + dy}, tol)) ++votes;
        }
      }
      if (votes >= 2) {
        mask.set(px, y);
        painted = true;
      }
    }
  }

  if (painted) return;

  // Sub-pixel polygon: stamp the pixels under its centroid and vertices so
  // the cell still contributes to the cover.
  auto stamp = [&](Vec2 p) {
    const int x = static_cast<int>(std::floor((p.x - mask.origin.x) / h));
    const int y = static_cast<int>(std::floor((p.y - mask.origin.y) / h));
    if (x >= 0 && x < mask.width && y >= 0 && y < mask.height) mask.set(x, y);
  };
  stamp(polygon_centroid(ccw));
  for (const Vec2& v : ccw) stamp(v);
}

BinaryMask make_grid(Vec2 lo, Vec2 hi, double h, double margin,
                     int max_pixels) {
  if (!(h > 0)) throw std::invalid_argument("make_grid: pixel size must be positive");
  if (margin < 0) throw std::invalid_argument("make_grid: margin must be non-negative");
  const double wx = hi.x - lo.x + 2 * margin;
  const double wy = hi.y - lo.y + 2 * margin;
  const int width = std::max(1, static_cast<int>(std::ceil(wx / h)));
  const int height = std::max(1, static_cast<int>(std::ceil(wy / h)));
  if (width > max_pixels || height > max_pixels) {
    const double need = std::max(wx, wy) / max_pixels;
    throw std::runtime_error(
        "make_grid: " + std::to_string(width) + "x" + std::to_string(height) +
        " grid exceeds the cap of " + std::to_string(max_pixels) +
        " pixels per side; raise h to at least " + std::to_string(need));
  }
  return BinaryMask(width, height, h, {lo.x - margin, lo.y - margin});
}

BinaryMask rasterize_cover(const LabeledTree& tree, const MarkovStop& stop,
                           const OpenSetSpec& open_set, double h,
                           double margin) {
  if (!(h > 0)) throw std::invalid_argument("rasterize_cover: h must be positive");
  if (h > stop.r) {
    throw std::invalid_argument(
        "rasterize_cover: pixel size " + std::to_string(h) +
        " is coarser than the stop radius " + std::to_string(stop.r) +
        "; need h <= " + std::to_string(stop.r));
  }
  std::vector<Polygon> cells;
  cells.reserve(stop.size());
  for (const Code& code : stop.codes) {
    const int d = static_cast<int>(code.size());
    // Walk down by letters to the node index; the stop was produced from
    // this tree, so every code resolves.
    std::int32_t idx = 0;
    for (int lvl = 0; lvl < d; ++lvl) {
      idx = tree.node(lvl, idx).first_child + (code[lvl] - 1);
    }
    cells.push_back(apply_polygon(tree.map_of(d, idx), open_set.polygon));
  }

  Vec2 lo = open_set.polygon[0];
  Vec2 hi = lo;
  for (const Polygon& cell : cells) {
    for (const Vec2& v : cell) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
  }
  BinaryMask mask = make_grid(lo, hi, h, margin);
  for (const Polygon& cell : cells) paint_convex_polygon(mask, cell);
  return mask;
}

BinaryMask rasterize_cover_streamed(const TreeModel& model, std::uint64_t seed,
                                    double delta, double R,
                                    const OpenSetSpec& open_set, double h,
                                    double margin,
                                    std::vector<BinaryMask>* by_first_letter) {
  if (!(h > 0)) throw std::invalid_argument("rasterize_cover_streamed: h must be positive");
  if (h > delta) {
    throw std::invalid_argument(
        "rasterize_cover_streamed: pixel size " + std::to_string(h) +
        " is coarser than the stop radius " + std::to_string(delta) +
        "; need h <= " + std::to_string(delta));
  }
  // Every cell lies inside the open set, so the grid never depends on the
  // realization: it spans the open set plus the requested margin.
  Vec2 lo = open_set.polygon[0];
  Vec2 hi = lo;
  for (const Vec2& v : open_set.polygon) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  BinaryMask mask = make_grid(lo, hi, h, margin);
  if (by_first_letter) {
    const int root = detail::root_label(model, seed);
    by_first_letter->assign(
        model.alphabet[static_cast<std::size_t>(root)].size(),
        BinaryMask(mask.width, mask.height, mask.h, mask.origin));
  }
  for_each_stop_cell(model, seed, delta, R, [&](const StopCell& cell) {
    const Polygon poly = apply_polygon(cell.map, open_set.polygon);
    paint_convex_polygon(mask, poly);
    if (by_first_letter && cell.first_letter >= 1 &&
        cell.first_letter <= static_cast<int>(by_first_letter->size())) {
      paint_convex_polygon((*by_first_letter)[cell.first_letter - 1], poly);
    }
  });
  return mask;
}

}  // namespace fracurv
