#include "fracurv/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fracurv {

using nlohmann::json;

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks = {
      "dimension", "stop_mass", "verify_a2", "mean_curve",
      "rk",        "limits",    "render"};
  return tasks;
}

namespace {

json similarity_to_json(const Similarity& f) {
  return json{{"ratio", f.ratio},
              {"rotation", f.rotation},
              {"reflect", f.reflect},
              {"translation", {f.translation.x, f.translation.y}}};
}

Similarity similarity_from_json(const json& j) {
  Similarity f;
  f.ratio = j.at("ratio").get<double>();
  f.rotation = j.value("rotation", 0.0);
  f.reflect = j.value("reflect", false);
  const auto& t = j.at("translation");
  f.translation = {t.at(0).get<double>(), t.at(1).get<double>()};
  return f;
}

json model_to_json(const TreeModel& m) {
  json j;
  j["kind"] = to_string(m.kind);
  if (m.kind == ModelKind::markov_carpet) {
    json rows = json::array();
    for (const auto& row : m.transition) {
      rows.push_back(json(row));
    }
    j["transition"] = rows;
  } else {
    json labels = json::array();
    for (std::size_t i = 0; i < m.alphabet.size(); ++i) {
      json maps = json::array();
      for (const Similarity& f : m.alphabet[i]) maps.push_back(similarity_to_json(f));
      json lab{{"prob", m.probs[i]}, {"maps", maps}};
      if (i < m.label_names.size() && !m.label_names[i].empty()) {
        lab["name"] = m.label_names[i];
      }
      labels.push_back(lab);
    }
    j["labels"] = labels;
    if (m.kind == ModelKind::v_variable) j["v_copies"] = m.v_copies;
  }
  return j;
}

TreeModel model_from_json(const json& j) {
  const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
  if (kind == ModelKind::markov_carpet) {
    std::array<std::array<double, 4>, 5> tr{};
    const auto& rows = j.at("transition");
    if (rows.size() != 5) {
      throw std::runtime_error("model.transition must have 5 rows");
    }
    for (std::size_t r = 0; r < 5; ++r) {
      if (rows[r].size() != 4) {
        throw std::runtime_error("model.transition rows must have 4 entries");
      }
      for (std::size_t c = 0; c < 4; ++c) tr[r][c] = rows[r][c].get<double>();
    }
    return make_markov_carpet(tr);
  }

  std::vector<Rifs> alphabet;
  std::vector<double> probs;
  std::vector<std::string> names;
  for (const json& lab : j.at("labels")) {
    Rifs maps;
    for (const json& f : lab.at("maps")) maps.push_back(similarity_from_json(f));
    alphabet.push_back(std::move(maps));
    probs.push_back(lab.at("prob").get<double>());
    names.push_back(lab.value("name", ""));
  }
  switch (kind) {
    case ModelKind::recursive:
      return make_recursive(std::move(alphabet), std::move(probs), std::move(names));
    case ModelKind::homogeneous:
      return make_homogeneous(std::move(alphabet), std::move(probs), std::move(names));
    case ModelKind::v_variable:
      return make_v_variable(std::move(alphabet), std::move(probs),
                             j.at("v_copies").get<int>(), std::move(names));
    case ModelKind::dependent_gasket:
      return make_dependent_gasket(std::move(alphabet), std::move(probs),
                                   std::move(names));
    case ModelKind::pinned:
      return make_pinned(std::move(alphabet), std::move(probs), std::move(names));
    default:
      throw std::runtime_error("model.kind not recognized");
  }
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["model"] = model_to_json(cfg.model);
  json verts = json::array();
  for (const Vec2& v : cfg.open_set) verts.push_back({v.x, v.y});
  j["open_set"] = verts;
  j["R_slack"] = cfg.R_slack;
  j["eps_grid"] = {{"min", cfg.eps_grid.min},
                   {"max", cfg.eps_grid.max},
                   {"per_octave", cfg.eps_grid.per_octave}};
  j["r_grid"] = {{"min_over_R", cfg.r_grid.min_over_R},
                 {"max_over_R", cfg.r_grid.max_over_R},
                 {"per_octave", cfg.r_grid.per_octave}};
  j["n_mc"] = cfg.n_mc;
  j["q"] = cfg.q;
  j["h_ratio"] = cfg.h_ratio;
  j["seed"] = cfg.seed;
  j["outputs"] = {{"directory", cfg.out_directory}};
  j["tasks"] = cfg.tasks;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.model = model_from_json(j.at("model"));
  for (const json& v : j.at("open_set")) {
    cfg.open_set.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  }
  cfg.R_slack = j.value("R_slack", 0.05);
  const json& eg = j.at("eps_grid");
  cfg.eps_grid = {eg.at("min").get<double>(), eg.at("max").get<double>(),
                  eg.value("per_octave", 8)};
  const json& rg = j.at("r_grid");
  cfg.r_grid = {rg.at("min_over_R").get<double>(),
                rg.value("max_over_R", 1.0), rg.value("per_octave", 6)};
  cfg.n_mc = j.value("n_mc", 200);
  cfg.q = j.value("q", 0.05);
  cfg.h_ratio = j.value("h_ratio", 1.0 / 32.0);
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("outputs")) {
    cfg.out_directory = j.at("outputs").value("directory", "out");
  }
  cfg.tasks = j.value("tasks", std::vector<std::string>{});
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config structure: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_json(const RunConfig& cfg) {
  // nlohmann objects keep keys sorted, so dump() is already canonical;
  // the trailing newline makes the file a proper text file.
  return config_to_json(cfg).dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  const std::string bytes = canonical_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> make_eps_grid(const EpsGridSpec& spec) {
  std::vector<double> grid;
  if (!(spec.min > 0) || !(spec.max >= spec.min) || spec.per_octave < 1) {
    throw std::invalid_argument("make_eps_grid: need 0 < min <= max and per_octave >= 1");
  }
  const double step = std::pow(2.0, -1.0 / spec.per_octave);
  double e = spec.max;
  while (e > spec.min * (1 - 1e-12)) {
    grid.push_back(e);
    e *= step;
  }
  // Land exactly on min when the span is a whole number of steps; otherwise
  // close the grid with min itself.
  if (grid.back() > spec.min * (1 + 1e-12)) grid.push_back(spec.min);
  return grid;
}

std::vector<double> make_r_grid(const RGridSpec& spec, double R) {
  EpsGridSpec abs{spec.min_over_R * R, spec.max_over_R * R, spec.per_octave};
  return make_eps_grid(abs);
}

std::vector<double> make_r_grid(const RGridSpec& spec, double R,
                                const TreeModel& model) {
  auto grid = make_r_grid(spec, R);
  std::set<double, std::greater<double>> points(grid.begin(), grid.end());
  std::set<double> ratios;
  for (const auto& maps : model.alphabet)
    for (const auto& f : maps) ratios.insert(f.ratio);
  const double lo = grid.back();
  const double hi = grid.front();
  for (double rho : ratios) {
    for (double side : {1.0 - 1e-6, 1.0 + 1e-6}) {
      const double knot = R * rho * side;
      if (knot > lo && knot < hi) points.insert(knot);
    }
  }
  return {points.begin(), points.end()};
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> diags;
  auto flag = [&](const std::string& msg) { diags.push_back(msg); };

  try {
    cfg.model.validate();
  } catch (const std::exception& e) {
    flag(std::string("model: ") + e.what());
  }

  OpenSetSpec open_set;
  bool have_open_set = false;
  if (cfg.open_set.size() < 3) {
    flag("open_set needs at least 3 vertices");
  } else {
    try {
      open_set = OpenSetSpec::make(cfg.open_set);
      have_open_set = true;
    } catch (const std::exception& e) {
      flag(std::string("open_set: ") + e.what());
    }
  }

  if (!(cfg.R_slack >= 1e-6)) {
    flag("R_slack must be at least 1e-6");
  }

  if (have_open_set && diags.empty()) {
    for (std::size_t i = 0; i < cfg.model.alphabet.size(); ++i) {
      const UoscReport rep = check_uosc(cfg.model.alphabet[i], open_set);
      if (!rep.ok()) {
        std::string name = i < cfg.model.label_names.size() &&
                                   !cfg.model.label_names[i].empty()
                               ? cfg.model.label_names[i]
                               : "label " + std::to_string(i);
        flag(name + ": open set condition fails (" +
             (rep.contained ? "images overlap" : "image leaves the open set") +
             ")");
      }
    }
  }

  if (!(cfg.eps_grid.min > 0) || !(cfg.eps_grid.max > cfg.eps_grid.min)) {
    flag("eps_grid needs 0 < min < max");
  }
  if (cfg.eps_grid.per_octave < 1) flag("eps_grid.per_octave must be >= 1");
  if (have_open_set && cfg.R_slack >= 1e-6) {
    const double R = cutoff_R(open_set, cfg.R_slack);
    if (cfg.eps_grid.max > R) flag("eps_grid.max exceeds the cutoff R");
  }
  if (!(cfg.r_grid.min_over_R > 0) ||
      !(cfg.r_grid.max_over_R > cfg.r_grid.min_over_R) ||
      cfg.r_grid.max_over_R > 1.0) {
    flag("r_grid needs 0 < min_over_R < max_over_R <= 1");
  }
  if (cfg.r_grid.per_octave < 1) flag("r_grid.per_octave must be >= 1");

  if (cfg.n_mc < 1) flag("n_mc must be >= 1");
  if (!(cfg.q > 0) || cfg.q > 0.25) flag("q out of range (0,0.25]");
  if (!(cfg.h_ratio > 0) || cfg.h_ratio > cfg.q) {
    flag("h_ratio out of range (0, q]");
  }
  if (cfg.out_directory.empty()) flag("outputs.directory must not be empty");

  if (cfg.tasks.empty()) flag("tasks must not be empty");
  std::set<std::string> seen;
  for (const std::string& t : cfg.tasks) {
    if (std::find(known_tasks().begin(), known_tasks().end(), t) ==
        known_tasks().end()) {
      flag("unknown task \"" + t + "\"");
    } else if (!seen.insert(t).second) {
      flag("duplicate task \"" + t + "\"");
    }
  }
  auto has = [&](const char* t) { return seen.count(t) > 0; };
  if (has("limits") && !(has("mean_curve") && has("rk") && has("dimension"))) {
    flag("limits task requires dimension, mean_curve and rk");
  }

  return diags;
}

}  // namespace fracurv
