#pragma once

#include <string>
#include <vector>

#include "fracurv/geometry.hpp"

namespace fracurv {

using Polygon = std::vector<Vec2>;

/// Feasible open set of the construction: the interior of a simple polygon,
/// listed counterclockwise, with its diameter cached. The shipped instances
/// are convex (triangle, square) and the separation tests below require
/// convexity.
struct OpenSetSpec {
  Polygon polygon;
  double diameter = 0.0;

  /// Validates simplicity and positive area, computes the diameter.
  /// Throws std::invalid_argument on a degenerate polygon.
  static OpenSetSpec make(Polygon poly);
};

/// Image polygon under a similarity. Vertex order is mapped as-is, so
/// the orientation flips exactly when f.reflect is set.
Polygon apply_polygon(const Similarity& f, const Polygon& poly);

double polygon_area(const Polygon& poly);  // signed, positive when CCW
double polygon_diameter(const Polygon& poly);
bool polygon_is_convex(const Polygon& poly);
Vec2 polygon_centroid(const Polygon& poly);

/// Distance from a point to a closed polygonal region (0 inside).
double point_polygon_dist(Vec2 p, const Polygon& poly);

/// Distance between a closed convex polygon and a closed segment (0 on touch
/// or crossing).
double polygon_segment_dist(const Polygon& poly, Vec2 a, Vec2 b);

/// How far two convex polygons must be pushed apart before their interiors
/// separate; 0 when the interiors are already disjoint (touching allowed).
double convex_overlap_depth(const Polygon& a, const Polygon& b);

struct UoscReport {
  bool contained = false;
  bool pairwise_disjoint = false;
  bool ok() const { return contained && pairwise_disjoint; }
};

/// Open set condition check for one realized map list: every image of O stays
/// inside the closure of O, and image interiors are pairwise disjoint, both
/// up to tol. Default tol is 1e-9 * diameter(O).
UoscReport check_uosc(const std::vector<Similarity>& ifs, const OpenSetSpec& O,
                      double tol = -1.0);

/// Reference cutoff scale sqrt(2) * diameter(O) * (1 + slack); the strict
/// inequality against sqrt(2)|O| is what the slack guarantees.
/// slack <= 0 is rejected; use at least 1e-6.
double cutoff_R(const OpenSetSpec& O, double slack);

}  // namespace fracurv
