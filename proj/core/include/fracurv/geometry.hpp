#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace fracurv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Contracting planar similarity x -> ratio * L x + translation, where L is a
/// rotation, optionally preceded by a reflection across the x-axis.
/// Immutable value type.
struct Similarity {
  double ratio = 1.0;        // in (0, 1) for contractions
  double rotation = 0.0;     // radians
  bool reflect = false;
  Vec2 translation{0.0, 0.0};

  Vec2 operator()(Vec2 p) const {
    if (reflect) p.y = -p.y;
    const double c = std::cos(rotation), s = std::sin(rotation);
    return Vec2{c * p.x - s * p.y, s * p.x + c * p.y} * ratio + translation;
  }
};

/// Left-to-right composition of a path of maps: the first entry is applied
/// last (outermost), matching how a code prefixes select nested pieces.
/// An empty path yields the identity.
Similarity compose(std::span<const Similarity> path);

inline Similarity compose(const std::vector<Similarity>& path) {
  return compose(std::span<const Similarity>(path.data(), path.size()));
}

/// Composition of exactly two maps, outer applied after inner.
Similarity compose2(const Similarity& outer, const Similarity& inner);

}  // namespace fracurv
