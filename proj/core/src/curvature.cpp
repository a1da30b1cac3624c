#include "fracurv/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracurv {

namespace {

// Euler characteristic of the closed union of occupied unit squares, by
// counting vertices, edges and faces of the cubical complex in one sweep over
// the lattice corners. Each corner (x, y) owns the face of pixel (x, y), the
// horizontal edge to (x+1, y) and the vertical edge to (x, y+1), so nothing
// is counted twice.
template <class Inside>
std::int64_t euler_characteristic(int w, int h, Inside inside) {
  std::int64_t chi = 0;
  for (int y = 0; y <= h; ++y) {
    const bool row_lo = y > 0;      // pixels below this corner row exist
    const bool row_hi = y < h;      // pixels above exist
    bool left_lo = false, left_hi = false;  // pixels in column x-1
    for (int x = 0; x <= w; ++x) {
      const bool cur_lo = row_lo && x < w && inside(x, y - 1);
      const bool cur_hi = row_hi && x < w && inside(x, y);
      // vertex: any incident pixel occupied
      if (cur_lo || cur_hi || left_lo || left_hi) ++chi;
      // horizontal edge (x,y)-(x+1,y): pixels (x, y-1), (x, y)
      if (cur_lo || cur_hi) --chi;
      // vertical edge (x,y)-(x,y+1): pixels (x-1, y), (x, y)
      if (left_hi || cur_hi) --chi;
      // face: pixel (x, y)
      if (cur_hi) ++chi;
      left_lo = cur_lo;
      left_hi = cur_hi;
    }
  }
  return chi;
}

// Length of the zero level of the vertex field `value`, by marching squares
// over 2x2 blocks of pixel centers. The in/out classification comes from
// `inside` (which must agree with the sign of `value`), the crossing
// positions from linear interpolation of `value`; saddle blocks follow the
// sign of the center average. Result in pixel units.
template <class Inside, class Value>
double boundary_length(int w, int h, Inside inside, Value value) {
  auto cross = [](double ua, double ub) {
    const double d = ua - ub;
    double t = d == 0.0 ? 0.5 : ua / d;
    return std::clamp(t, 0.0, 1.0);
  };
  double total = 0.0;
  std::vector<std::uint8_t> row_in(static_cast<std::size_t>(w));
  std::vector<double> row_val(static_cast<std::size_t>(w));
  std::vector<std::uint8_t> next_in(static_cast<std::size_t>(w));
  std::vector<double> next_val(static_cast<std::size_t>(w));
  for (int x = 0; x < w; ++x) {
    row_in[x] = inside(x, 0) ? 1 : 0;
    row_val[x] = value(x, 0);
  }
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x < w; ++x) {
      next_in[x] = inside(x, y + 1) ? 1 : 0;
      next_val[x] = value(x, y + 1);
    }
    for (int x = 0; x + 1 < w; ++x) {
      const int c =
          row_in[x] | (row_in[x + 1] << 1) | (next_in[x + 1] << 2) | (next_in[x] << 3);
      if (c == 0 || c == 15) continue;
      const double usw = row_val[x], use_ = row_val[x + 1];
      const double une = next_val[x + 1], unw = next_val[x];
      // crossing points on the four block edges, in local coordinates
      const Vec2 ps{cross(usw, use_), 0.0};
      const Vec2 pe{1.0, cross(use_, une)};
      const Vec2 pn{cross(unw, une), 1.0};
      const Vec2 pw{0.0, cross(usw, unw)};
      auto seg = [&](Vec2 a, Vec2 b) {
        total += std::hypot(b.x - a.x, b.y - a.y);
      };
      switch (c) {
        case 1: case 14: seg(pw, ps); break;
        case 2: case 13: seg(ps, pe); break;
        case 4: case 11: seg(pe, pn); break;
        case 8: case 7:  seg(pw, pn); break;
        case 3: case 12: seg(pw, pe); break;
        case 6: case 9:  seg(ps, pn); break;
        case 5: {  // SW and NE inside
          const double uc = 0.25 * (usw + use_ + une + unw);
          if (uc <= 0) { seg(ps, pe); seg(pw, pn); }
          else         { seg(pw, ps); seg(pe, pn); }
          break;
        }
        case 10: {  // SE and NW inside
          const double uc = 0.25 * (usw + use_ + une + unw);
          if (uc <= 0) { seg(pw, ps); seg(pe, pn); }
          else         { seg(ps, pe); seg(pw, pn); }
          break;
        }
        default: break;
      }
    }
    row_in.swap(next_in);
    row_val.swap(next_val);
  }
  return total;
}

// A binary mask carries no sub-pixel boundary position, and inventing one
// from pixel-center distances does not work: center-to-center distances
// quantize to lattice values, so a signed nearest-center field wiggles along
// tilted edges and marching squares reads the wiggle as extra length (about
// 5% on a disk, 8% near 22.5 degrees). Filtering the indicator with a small
// binomial kernel restores the crossing: the 0.5 level of the filtered
// half-plane passes through the true edge at every orientation, and the
// profile is smooth enough for linear interpolation to stay on it. Rows are
// filtered on demand and kept in a five-row ring, so the field is never
// materialized.
class SmoothedIndicator {
 public:
  explicit SmoothedIndicator(const BinaryMask& m)
      : mask_(m), zero_(static_cast<std::size_t>(m.width), 0.0) {
    for (auto& slot : slots_) slot.assign(zero_.size(), 0.0);
  }

  // 0.5 minus the filtered indicator: negative inside the smoothed set.
  double value(int x, int y) {
    double s = 0.0;
    for (int dy = -2; dy <= 2; ++dy)
      s += kTap[dy + 2] * hrow(y + dy)[static_cast<std::size_t>(x)];
    return 0.5 - s;
  }

 private:
  static constexpr double kTap[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16,
                                     1.0 / 16};

  // Horizontally filtered row, zero outside the grid. Marching squares
  // walks rows upward, so a ring of five slots never evicts a live row;
  // out-of-order access would only recompute, not corrupt.
  const std::vector<double>& hrow(int y) {
    if (y < 0 || y >= mask_.height) return zero_;
    const std::size_t slot_ix = static_cast<std::size_t>(y % 5);
    std::vector<double>& slot = slots_[slot_ix];
    if (loaded_[slot_ix] != y) {
      const int w = mask_.width;
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int dx = -2; dx <= 2; ++dx) {
          const int xx = x + dx;
          if (xx >= 0 && xx < w && mask_.test(xx, y)) s += kTap[dx + 2];
        }
        slot[static_cast<std::size_t>(x)] = s;
      }
      loaded_[slot_ix] = y;
    }
    return slot;
  }

  const BinaryMask& mask_;
  std::vector<double> zero_;
  std::array<std::vector<double>, 5> slots_;
  std::array<int, 5> loaded_{-1, -1, -1, -1, -1};
};

template <class Inside>
void require_clear_border(int w, int h, Inside inside, const char* who) {
  bool touch = false;
  for (int x = 0; x < w && !touch; ++x) {
    touch = inside(x, 0) || inside(x, h - 1);
  }
  for (int y = 0; y < h && !touch; ++y) {
    touch = inside(0, y) || inside(w - 1, y);
  }
  if (touch) {
    throw std::runtime_error(std::string(who) +
                             ": set touches the grid border; the boundary "
                             "would be clipped, enlarge the margin");
  }
}

}  // namespace

CurvatureTriple curvature_triple(const BinaryMask& mask) {
  const int w = mask.width, h = mask.height;
  auto occ = [&](int x, int y) { return mask.test(x, y); };
  require_clear_border(w, h, occ, "curvature_triple");

  // The boundary is measured on the smoothed indicator; set membership for
  // the marching-squares cases has to follow the same field, or the case
  // pattern and the crossings disagree near the edge.
  SmoothedIndicator smooth(mask);
  auto value = [&](int x, int y) { return smooth.value(x, y); };
  auto in_smooth = [&](int x, int y) { return smooth.value(x, y) < 0.0; };

  CurvatureTriple t;
  t.c0 = static_cast<double>(euler_characteristic(w, h, occ));
  t.c1 = 0.5 * boundary_length(w, h, in_smooth, value) * mask.h;
  t.c2 = static_cast<double>(mask.count()) * mask.h * mask.h;
  return t;
}

CurvatureTriple levelset_curvature(const DistanceField& field, double eps) {
  const int w = field.width, h = field.height;
  const double thr = eps / field.h;
  const double thr2 = thr * thr;
  auto occ = [&](int x, int y) {
    return static_cast<double>(field.at(x, y)) <= thr2;
  };
  require_clear_border(w, h, occ, "levelset_curvature");
  auto value = [&](int x, int y) {
    return std::sqrt(static_cast<double>(field.at(x, y))) - thr;
  };

  CurvatureTriple t;
  t.c0 = static_cast<double>(euler_characteristic(w, h, occ));
  t.c1 = 0.5 * boundary_length(w, h, occ, value) * field.h;
  std::int64_t n = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (occ(x, y)) ++n;
    }
  }
  t.c2 = static_cast<double>(n) * field.h * field.h;
  return t;
}

}  // namespace fracurv
