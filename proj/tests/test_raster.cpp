#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fracurv/distance.hpp"
#include "fracurv/models.hpp"
#include "fracurv/polygon.hpp"
#include "fracurv/presets.hpp"
#include "fracurv/raster.hpp"

using namespace fracurv;

namespace {

const double kPi = std::acos(-1.0);

Polygon regular_polygon(int n, double radius, Vec2 center, double phase) {
  Polygon poly;
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2 * kPi * k / n;
    poly.push_back(center + Vec2{radius * std::cos(a), radius * std::sin(a)});
  }
  return poly;
}

// Strictly-inside test for a counterclockwise convex polygon.
bool inside_convex(Vec2 p, const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    if ((b - a).cross(p - a) < 0) return false;
  }
  return true;
}

double boundary_dist(Vec2 p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    const Vec2 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
    best = std::min(best, dist(p, a + ab * t));
  }
  return best;
}

// Quadratic-time reference distance transform, squared pixel distances.
std::vector<std::int64_t> brute_distance(const BinaryMask& mask) {
  std::vector<std::int64_t> out(
      (std::size_t)mask.width * (std::size_t)mask.height, -1);
  std::vector<std::pair<int, int>> sites;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.test(x, y)) sites.emplace_back(x, y);
  if (sites.empty()) return out;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& [sx, sy] : sites) {
        const std::int64_t dx = x - sx, dy = y - sy;
        best = std::min(best, dx * dx + dy * dy);
      }
      out[(std::size_t)y * (std::size_t)mask.width + (std::size_t)x] = best;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("painted pixels match the center rule away from the boundary") {
  std::mt19937_64 gen(2718);
  std::uniform_int_distribution<int> sides(3, 8);
  std::uniform_real_distribution<double> rad(0.05, 0.35);
  std::uniform_real_distribution<double> pos(0.4, 0.6);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  const double h = 1.0 / 128.0;

  for (int it = 0; it < 25; ++it) {
    const Polygon poly =
        regular_polygon(sides(gen), rad(gen), {pos(gen), pos(gen)}, ang(gen));
    BinaryMask mask = make_grid({0, 0}, {1, 1}, h, 0.0);
    paint_convex_polygon(mask, poly);
    int checked = 0;
    for (int y = 0; y < mask.height; ++y) {
      for (int x = 0; x < mask.width; ++x) {
        const Vec2 c = mask.center(x, y);
        if (boundary_dist(c, poly) <= 0.9 * h) continue;  // free band
        ++checked;
        CHECK(mask.test(x, y) == inside_convex(c, poly));
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("a sub-pixel polygon still lands somewhere") {
  const double h = 1.0 / 128.0;
  BinaryMask mask = make_grid({0, 0}, {1, 1}, h, 0.0);
  const Polygon tiny = regular_polygon(3, h / 10, {0.5037, 0.5071}, 0.2);
  paint_convex_polygon(mask, tiny);
  CHECK(mask.count() >= 1);
  const int px = (int)std::floor(0.5037 / h);
  const int py = (int)std::floor(0.5071 / h);
  CHECK(mask.test(px, py));
}

TEST_CASE("clockwise input is painted all the same") {
  // Compositions with a reflection flip the vertex order; the painter has to
  // cope rather than paint nothing.
  const double h = 1.0 / 64.0;
  BinaryMask ccw = make_grid({0, 0}, {1, 1}, h, 0.0);
  BinaryMask cw = make_grid({0, 0}, {1, 1}, h, 0.0);
  Polygon poly = regular_polygon(5, 0.3, {0.5, 0.5}, 0.1);
  paint_convex_polygon(ccw, poly);
  std::reverse(poly.begin(), poly.end());
  paint_convex_polygon(cw, poly);
  CHECK(ccw.bits == cw.bits);
  CHECK(ccw.count() > 0);
}

TEST_CASE("grid construction pads and respects the pixel cap") {
  const BinaryMask grid = make_grid({0, 0}, {2, 1}, 0.25, 0.5);
  CHECK(grid.width == 12);
  CHECK(grid.height == 8);
  CHECK(grid.origin.x == doctest::Approx(-0.5));
  CHECK(grid.origin.y == doctest::Approx(-0.5));
  CHECK(grid.count() == 0);

  try {
    make_grid({0, 0}, {10, 10}, 1e-5, 0.0, 4096);
    FAIL("expected the pixel cap to trip");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    CHECK(what.find("raise h") != std::string::npos);
  }
}

TEST_CASE("mask border detection") {
  BinaryMask mask(8, 8, 1.0, {0, 0});
  mask.set(3, 3);
  CHECK_FALSE(mask.touches_border());
  mask.set(0, 5);
  CHECK(mask.touches_border());
  CHECK(mask.count() == 2);
}

TEST_CASE("distance transform agrees with the quadratic reference") {
  std::mt19937_64 gen(99);
  for (int it = 0; it < 100; ++it) {
    // Sweep densities from nearly empty to nearly full.
    const double density = 0.01 + 0.97 * (it / 99.0);
    BinaryMask mask(32, 32, 1.0, {0, 0});
    std::bernoulli_distribution bit(density);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x)
        if (bit(gen)) mask.set(x, y);
    if (mask.count() == 0) mask.set(it % 32, (3 * it) % 32);

    const DistanceField field = distance_transform(mask);
    const auto want = brute_distance(mask);
    REQUIRE(field.sq.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      CHECK((std::int64_t)field.sq[i] == want[i]);
  }
}

TEST_CASE("distance transform rejects an empty mask") {
  BinaryMask empty(16, 16, 1.0, {0, 0});
  CHECK_THROWS_AS(distance_transform(empty), std::invalid_argument);
}

TEST_CASE("dilating a single point yields a disk of the right area") {
  const double h = 0.001;
  BinaryMask mask(701, 701, h, {0, 0});
  mask.set(350, 350);
  const DistanceField field = distance_transform(mask);
  const BinaryMask ball = parallel_set(field, 0.3);
  const double area = (double)ball.count() * h * h;
  CHECK(area == doctest::Approx(kPi * 0.09).epsilon(0.01));
}

TEST_CASE("parallel sets are nested in the radius") {
  std::mt19937_64 gen(7);
  BinaryMask mask(101, 101, 0.01, {0, 0});
  std::bernoulli_distribution bit(0.01);
  for (int y = 40; y < 60; ++y)
    for (int x = 40; x < 60; ++x)
      if (bit(gen)) mask.set(x, y);
  mask.set(50, 50);
  const DistanceField field = distance_transform(mask);
  const BinaryMask small = parallel_set(field, 0.05);
  const BinaryMask big = parallel_set(field, 0.15);
  CHECK(small.count() <= big.count());
  for (int y = 0; y < 101; ++y)
    for (int x = 0; x < 101; ++x)
      if (small.test(x, y)) CHECK(big.test(x, y));
}

TEST_CASE("a dilation reaching the border is refused") {
  BinaryMask mask(64, 64, 0.01, {0, 0});
  mask.set(32, 32);
  const DistanceField field = distance_transform(mask);
  CHECK_THROWS_AS(parallel_set(field, 0.40), std::runtime_error);
}

TEST_CASE("streamed cover: fixed grid, and branch masks partition the union") {
  const RunConfig cfg = preset("gasket-dependent");
  const OpenSetSpec open_set = OpenSetSpec::make(cfg.open_set);
  const double R = cutoff_R(open_set, cfg.R_slack);
  const double delta = R / 64.0;
  const double h = delta / 8.0;

  std::vector<BinaryMask> subs1, subs2;
  const BinaryMask m1 = rasterize_cover_streamed(cfg.model, 5, delta, R,
                                                 open_set, h, 0.05, &subs1);
  const BinaryMask m2 = rasterize_cover_streamed(cfg.model, 6, delta, R,
                                                 open_set, h, 0.05, &subs2);

  // The window depends on the open set alone, not on the realization.
  CHECK(m1.width == m2.width);
  CHECK(m1.height == m2.height);
  CHECK(m1.origin.x == doctest::Approx(m2.origin.x));
  CHECK(m1.origin.y == doctest::Approx(m2.origin.y));
  CHECK(m1.count() > 0);
  CHECK(m2.count() > 0);
  CHECK(m1.bits != m2.bits);  // different realizations differ somewhere

  // Every painted pixel comes from some branch, and each branch stays
  // inside the union.
  REQUIRE(!subs1.empty());
  std::vector<std::uint8_t> unioned(m1.bits.size(), 0);
  for (const BinaryMask& sub : subs1) {
    REQUIRE(sub.bits.size() == m1.bits.size());
    for (std::size_t i = 0; i < sub.bits.size(); ++i) {
      if (sub.bits[i]) {
        CHECK(m1.bits[i] != 0);
        unioned[i] = 1;
      }
    }
  }
  CHECK(unioned == m1.bits);
}

TEST_CASE("materialized cover rasterization covers the stop cells") {
  const TreeModel model = preset("gasket-recursive").model;
  const OpenSetSpec open_set =
      OpenSetSpec::make(preset("gasket-recursive").open_set);
  const double R = cutoff_R(open_set, 0.05);
  auto shared = std::make_shared<const TreeModel>(model);
  LabeledTree tree(shared, 3);
  const MarkovStop stop = markov_stop(tree, R / 16, R);
  const BinaryMask mask = rasterize_cover(tree, stop, open_set, R / 256, 0.02);
  CHECK(mask.count() > 0);
  // Every stop cell's image centroid must be painted.
  for (const Code& code : stop.codes) {
    const TreeNode* node = tree.find(code);
    REQUIRE(node != nullptr);
    std::vector<Similarity> path;
    for (std::size_t d = 0; d < code.size(); ++d) {
      path.push_back(model.alphabet[0][(std::size_t)code[d] - 1]);
    }
    const Vec2 c = polygon_centroid(apply_polygon(compose(path), open_set.polygon));
    const int px = (int)std::floor((c.x - mask.origin.x) / mask.h);
    const int py = (int)std::floor((c.y - mask.origin.y) / mask.h);
    REQUIRE(px >= 0);
    REQUIRE(py >= 0);
    REQUIRE(px < mask.width);
    REQUIRE(py < mask.height);
    CHECK(mask.test(px, py));
  }
}
