#include "fracurv/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace fracurv {

namespace {

constexpr double kHalfRoot3 = 0.86602540378443864676;  // sin(pi/3)

Polygon unit_triangle() { return {{0, 0}, {1, 0}, {0.5, kHalfRoot3}}; }
Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

Similarity scaled(double ratio, Vec2 shift, double rotation = 0.0) {
  return Similarity{ratio, rotation, false, shift};
}

/// Three half-size copies of the triangle, one per corner.
Rifs gasket_maps() {
  return {scaled(0.5, {0, 0}), scaled(0.5, {0.5, 0}),
          scaled(0.5, {0.25, kHalfRoot3 / 2})};
}

/// The gasket maps plus a fourth copy rotated by pi/3 into the middle hole.
Rifs gasket_plus_center() {
  Rifs maps = gasket_maps();
  maps.push_back(Similarity{0.5, std::acos(-1.0) / 3.0, false, {0.5, 0.0}});
  return maps;
}

RunConfig base_config() {
  RunConfig cfg;
  cfg.R_slack = 0.05;
  cfg.q = 0.05;
  cfg.h_ratio = 1.0 / 32.0;
  cfg.n_mc = 200;
  cfg.tasks = {"dimension", "stop_mass", "verify_a2", "mean_curve",
               "rk",        "limits",    "render"};
  return cfg;
}

RunConfig gasket_recursive() {
  RunConfig cfg = base_config();
  cfg.model = make_recursive({gasket_maps()}, {1.0}, {"S"});
  cfg.open_set = unit_triangle();
  cfg.eps_grid = {std::pow(2.0, -9), 0.5, 8};
  cfg.r_grid = {1.0 / 512.0, 1.0, 6};
  cfg.n_mc = 1;  // single label, the tree is deterministic
  cfg.seed = 7;
  cfg.tasks = {"dimension", "stop_mass", "mean_curve", "rk", "limits", "render"};
  cfg.out_directory = "out/gasket-recursive";
  return cfg;
}

RunConfig gasket_dependent() {
  RunConfig cfg = base_config();
  cfg.model = make_dependent_gasket({gasket_maps(), gasket_plus_center()},
                                    {0.5, 0.5}, {"G", "Gp"});
  cfg.open_set = unit_triangle();
  cfg.eps_grid = {std::pow(2.0, -6), 0.5, 8};
  cfg.r_grid = {1.0 / 256.0, 1.0, 5};
  cfg.seed = 42;
  cfg.out_directory = "out/gasket-dependent";
  return cfg;
}

RunConfig pinned_n2() {
  RunConfig cfg = base_config();
  const Rifs horizontal = {scaled(0.5, {0, 0}), scaled(0.5, {0.5, 0})};
  const Rifs vertical = {scaled(0.5, {0, 0}), scaled(0.5, {0, 0.5})};
  cfg.model = make_pinned({horizontal, vertical}, {0.5, 0.5}, {"H", "V"});
  cfg.open_set = unit_square();
  cfg.eps_grid = {std::pow(2.0, -6), 0.5, 8};
  cfg.r_grid = {1.0 / 256.0, 1.0, 5};
  cfg.seed = 11;
  cfg.out_directory = "out/pinned-n2";
  return cfg;
}

RunConfig carpet_markov() {
  RunConfig cfg = base_config();
  cfg.model = make_markov_carpet(carpet_default_transition());
  cfg.open_set = unit_square();
  cfg.eps_grid = {std::pow(2.0, -6), 0.5, 8};
  cfg.r_grid = {1.0 / 256.0, 1.0, 5};
  cfg.seed = 23;
  cfg.out_directory = "out/carpet-markov";
  return cfg;
}

RunConfig nonlattice_demo() {
  RunConfig cfg = base_config();
  const Rifs maps = {scaled(0.5, {0, 0}),
                     scaled(1.0 / 3.0, {2.0 / 3.0, 0})};
  cfg.model = make_recursive({maps}, {1.0}, {"T"});
  cfg.open_set = unit_square();
  cfg.eps_grid = {std::pow(2.0, -8), 0.5, 8};
  cfg.r_grid = {1.0 / 256.0, 1.0, 5};
  cfg.h_ratio = 1.0 / 16.0;
  cfg.n_mc = 1;  // single label
  cfg.seed = 5;
  cfg.out_directory = "out/nonlattice-demo";
  return cfg;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "gasket-recursive", "gasket-dependent", "pinned-n2", "carpet-markov",
      "nonlattice-demo"};
  return names;
}

RunConfig preset(const std::string& name) {
  if (name == "gasket-recursive") return gasket_recursive();
  if (name == "gasket-dependent") return gasket_dependent();
  if (name == "pinned-n2") return pinned_n2();
  if (name == "carpet-markov") return carpet_markov();
  if (name == "nonlattice-demo") return nonlattice_demo();
  std::string msg = "unknown preset \"" + name + "\"; available:";
  for (const std::string& n : preset_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

}  // namespace fracurv
