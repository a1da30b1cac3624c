#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracurv/models.hpp"
#include "fracurv/polygon.hpp"

namespace fracurv {

/// Geometric grid of dilation radii: per_octave points per halving, from max
/// down to min inclusive.
struct EpsGridSpec {
  double min = 0.0;
  double max = 0.0;
  int per_octave = 8;
};

/// Same, for the residual radii, expressed relative to the cutoff R so a
/// config stays valid when the open set changes.
struct RGridSpec {
  double min_over_R = 0.0;
  double max_over_R = 1.0;
  int per_octave = 6;
};

/// One complete run description. Everything influencing numbers lives here;
/// parallelism deliberately does not (it must never change results).
struct RunConfig {
  TreeModel model;
  Polygon open_set;
  double R_slack = 0.05;
  EpsGridSpec eps_grid;
  RGridSpec r_grid;
  int n_mc = 200;
  double q = 0.05;
  double h_ratio = 1.0 / 32.0;
  std::uint64_t seed = 0;
  std::string out_directory = "out";
  std::vector<std::string> tasks;
};

/// Known task names, in execution order.
const std::vector<std::string>& known_tasks();

/// Parses a JSON run description; throws std::runtime_error with a pointed
/// message on malformed input. Structural problems (unknown kind, missing
/// field) throw here; semantic problems are validate_config's business.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical serialization: sorted keys, two-space indent, one trailing
/// newline. Equal configs produce equal bytes.
std::string canonical_json(const RunConfig& cfg);

/// FNV-1a (64-bit) of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// All validation diagnostics, empty when the config is runnable. Messages
/// are one line each and self-contained.
std::vector<std::string> validate_config(const RunConfig& cfg);

std::vector<double> make_eps_grid(const EpsGridSpec& spec);
std::vector<double> make_r_grid(const RGridSpec& spec, double R);

/// Like make_r_grid, but additionally samples both sides of every radius
/// R*rho with rho a first-level contraction ratio of the model. The paired
/// difference jumps there (the branch subtraction switches off), and the
/// one-sided samples keep the log-trapezoid quadrature exact across it.
std::vector<double> make_r_grid(const RGridSpec& spec, double R,
                                const TreeModel& model);

}  // namespace fracurv
