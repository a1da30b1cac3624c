#include "fracurv/imageio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace fracurv {

namespace {

const char* kLevelPalette[] = {"#1b6ca8", "#e2793f", "#3f9e4d",
                               "#b04a98", "#c9b23a", "#5a5a5a"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void render_svg(const LabeledTree& tree, const MarkovStop& stop,
                const OpenSetSpec& open_set, const std::string& path) {
  std::vector<Polygon> cells;
  std::vector<int> depths;
  cells.reserve(stop.size());
  for (const Code& code : stop.codes) {
    const int d = static_cast<int>(code.size());
    std::int32_t idx = 0;
    for (int lvl = 0; lvl < d; ++lvl) {
      idx = tree.node(lvl, idx).first_child + (code[lvl] - 1);
    }
    cells.push_back(apply_polygon(tree.map_of(d, idx), open_set.polygon));
    depths.push_back(d);
  }

  Vec2 lo = open_set.polygon[0], hi = lo;
  for (const Vec2& v : open_set.polygon) {
    lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y);
  }
  const double pad = 0.02 * std::max(hi.x - lo.x, hi.y - lo.y);
  lo.x -= pad; lo.y -= pad; hi.x += pad; hi.y += pad;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("render_svg: cannot open " + path);

  // SVG y grows downward; flip the plane around the window's horizontal
  // midline so the drawing matches mathematical orientation.
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << fmt(lo.x) << ' ' << fmt(lo.y) << ' ' << fmt(hi.x - lo.x) << ' '
      << fmt(hi.y - lo.y) << "\" width=\"800\" height=\""
      << fmt(800.0 * (hi.y - lo.y) / (hi.x - lo.x)) << "\">\n";
  out << "<g transform=\"translate(0," << fmt(lo.y + hi.y)
      << ") scale(1,-1)\">\n";

  auto emit = [&](const Polygon& poly, const char* fill, const char* extra) {
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (i) out << ' ';
      out << fmt(poly[i].x) << ',' << fmt(poly[i].y);
    }
    out << "\" fill=\"" << fill << "\" " << extra << "/>\n";
  };

  emit(open_set.polygon, "none",
       "stroke=\"#999999\" stroke-width=\"0.004\" stroke-dasharray=\"0.02,0.01\"");
  constexpr int n_colors = static_cast<int>(std::size(kLevelPalette));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    emit(cells[i], kLevelPalette[depths[i] % n_colors],
         "fill-opacity=\"0.8\" stroke=\"#222222\" stroke-width=\"0.001\"");
  }
  out << "</g>\n</svg>\n";
  if (!out) throw std::runtime_error("render_svg: write failed for " + path);
}

void write_pgm(const BinaryMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(mask.width));
  for (int y = mask.height - 1; y >= 0; --y) {
    for (int x = 0; x < mask.width; ++x) {
      row[x] = mask.test(x, y) ? 0 : 255;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

}  // namespace fracurv
