#include "fracurv/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracurv {

namespace {

double seg_point_dist(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return dist(a, p);
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(a + ab * t, p);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    const double v = (q - p).cross(r - p);
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  if (o1 == 0 && on(a, b, c)) return true;
  if (o2 == 0 && on(a, b, d)) return true;
  if (o3 == 0 && on(c, d, a)) return true;
  if (o4 == 0 && on(c, d, b)) return true;
  return false;
}

double seg_seg_dist(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min(std::min(seg_point_dist(a, b, c), seg_point_dist(a, b, d)),
                  std::min(seg_point_dist(c, d, a), seg_point_dist(c, d, b)));
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  // even-odd crossing count; boundary handled separately by callers
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 pi = poly[i], pj = poly[j];
    if ((pi.y > p.y) != (pj.y > p.y)) {
      const double xint = pj.x + (pi.x - pj.x) * (p.y - pj.y) / (pi.y - pj.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

double polygon_area(const Polygon& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    s += poly[j].cross(poly[i]);
  return 0.5 * s;
}

double polygon_diameter(const Polygon& poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d = std::max(d, dist(poly[i], poly[j]));
  return d;
}

bool polygon_is_convex(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n], c = poly[(i + 2) % n];
    const double cr = (b - a).cross(c - b);
    if (cr != 0.0) {
      const int s = cr > 0.0 ? 1 : -1;
      if (sign == 0) sign = s;
      else if (s != sign) return false;
    }
  }
  return true;
}

Vec2 polygon_centroid(const Polygon& poly) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double w = poly[j].cross(poly[i]);
    a += w;
    cx += (poly[j].x + poly[i].x) * w;
    cy += (poly[j].y + poly[i].y) * w;
  }
  if (a == 0.0) return poly.empty() ? Vec2{} : poly[0];
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

OpenSetSpec OpenSetSpec::make(Polygon poly) {
  if (poly.size() < 3)
    throw std::invalid_argument("invalid open set: fewer than 3 vertices");
  const double area = polygon_area(poly);
  if (!(std::abs(area) > 0.0))
    throw std::invalid_argument("invalid open set: zero area");
  if (area < 0.0)
    throw std::invalid_argument("invalid open set: vertices must be counterclockwise");
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j],
                             poly[(j + 1) % n]))
        throw std::invalid_argument("invalid open set: self-intersecting polygon");
    }
  }
  OpenSetSpec spec;
  spec.polygon = std::move(poly);
  spec.diameter = polygon_diameter(spec.polygon);
  return spec;
}

Polygon apply_polygon(const Similarity& f, const Polygon& poly) {
  Polygon out;
  out.reserve(poly.size());
  for (Vec2 v : poly) out.push_back(f(v));
  return out;
}

double point_polygon_dist(Vec2 p, const Polygon& poly) {
  if (point_in_polygon(p, poly)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    d = std::min(d, seg_point_dist(poly[j], poly[i], p));
  return d;
}

double polygon_segment_dist(const Polygon& poly, Vec2 a, Vec2 b) {
  if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    d = std::min(d, seg_seg_dist(poly[j], poly[i], a, b));
  return d;
}

double convex_overlap_depth(const Polygon& a, const Polygon& b) {
  // Separating axis over both polygons' edge normals. The smallest interval
  // overlap across axes is the penetration depth; any axis with a gap means
  // the interiors are disjoint.
  double depth = std::numeric_limits<double>::infinity();
  const Polygon* polys[2] = {&a, &b};
  for (const Polygon* poly : polys) {
    const std::size_t n = poly->size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 e = (*poly)[i] - (*poly)[j];
      Vec2 axis{-e.y, e.x};
      const double len = axis.norm();
      if (len == 0.0) continue;
      axis = axis * (1.0 / len);
      double amin = std::numeric_limits<double>::infinity(), amax = -amin;
      for (Vec2 v : a) {
        const double t = axis.dot(v);
        amin = std::min(amin, t);
        amax = std::max(amax, t);
      }
      double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
      for (Vec2 v : b) {
        const double t = axis.dot(v);
        bmin = std::min(bmin, t);
        bmax = std::max(bmax, t);
      }
      const double overlap = std::min(amax, bmax) - std::max(amin, bmin);
      if (overlap <= 0.0) return 0.0;
      depth = std::min(depth, overlap);
    }
  }
  return depth;
}

UoscReport check_uosc(const std::vector<Similarity>& ifs, const OpenSetSpec& O,
                      double tol) {
  if (O.polygon.size() < 3 || !(polygon_area(O.polygon) > 0.0))
    throw std::invalid_argument("invalid open set");
  if (!polygon_is_convex(O.polygon))
    throw std::invalid_argument(
        "check_uosc requires a convex open set polygon");
  if (tol < 0.0) tol = 1e-9 * O.diameter;

  UoscReport rep;
  rep.contained = true;
  std::vector<Polygon> images;
  images.reserve(ifs.size());
  for (const Similarity& f : ifs) {
    Polygon img = apply_polygon(f, O.polygon);
    for (Vec2 v : img) {
      if (point_polygon_dist(v, O.polygon) > tol) {
        rep.contained = false;
        break;
      }
    }
    images.push_back(std::move(img));
  }
  rep.pairwise_disjoint = true;
  for (std::size_t i = 0; i < images.size() && rep.pairwise_disjoint; ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (convex_overlap_depth(images[i], images[j]) > tol) {
        rep.pairwise_disjoint = false;
        break;
      }
  return rep;
}

double cutoff_R(const OpenSetSpec& O, double slack) {
  if (!(slack > 0.0))
    throw std::invalid_argument(
        "cutoff_R: slack must be positive, increase to minimum 1e-6");
  return std::sqrt(2.0) * O.diameter * (1.0 + slack);
}

}  // namespace fracurv
