#include "fracurv/runner.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include <json.hpp>

#include "fracurv/a2test.hpp"
#include "fracurv/imageio.hpp"
#include "fracurv/limits.hpp"
#include "fracurv/meancurve.hpp"
#include "fracurv/presets.hpp"
#include "fracurv/rng.hpp"
#include "fracurv/version.hpp"
#include "csv.hpp"

namespace fracurv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

json spectrum_to_json(const SpectrumResult& s) {
  json j;
  j["D"] = s.D;
  j["eta"] = s.renewal_mean;
  j["lattice_c"] = s.lattice_spacing ? json(*s.lattice_spacing) : json(nullptr);
  j["tol_dimension"] = 1e-12;
  j["tol_lattice"] = 1e-9;
  return j;
}

}  // namespace

int run_config(RunConfig cfg, const RunOptions& options, std::ostream& log) {
  if (options.seed) cfg.seed = *options.seed;
  if (options.n_mc) cfg.n_mc = *options.n_mc;

  const auto diags = validate_config(cfg);
  if (!diags.empty()) {
    for (const std::string& d : diags) log << "config error: " << d << "\n";
    return 2;
  }

  std::string out_dir = cfg.out_directory;
  if (const char* env = std::getenv("FRACURV_OUT"); env && *env) out_dir = env;
  if (options.out_dir) out_dir = *options.out_dir;

  json manifest;
  manifest["complete"] = false;
  manifest["config_hash"] = config_hash(cfg);
  manifest["tool_version"] = kToolVersion;
  manifest["tasks"] = json::object();
  manifest["warnings"] = json::array();

  auto write_manifest = [&]() {
    std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
  };

  try {
    fs::create_directories(out_dir);
    {
      std::ofstream out(fs::path(out_dir) / "config.json", std::ios::binary);
      out << canonical_json(cfg);
      if (!out) throw std::runtime_error("cannot write config.json");
    }

    const OpenSetSpec open_set = OpenSetSpec::make(cfg.open_set);
    const double R = cutoff_R(open_set, cfg.R_slack);
    auto model = std::make_shared<const TreeModel>(cfg.model);

    PipelineParams params;
    params.q = cfg.q;
    params.h_ratio = cfg.h_ratio;
    params.jobs = std::max(1, options.jobs);

    std::optional<SpectrumResult> spectrum;
    std::optional<MeanCurve> curve;
    std::optional<RkCurve> rk;

    auto enabled = [&](const std::string& name) {
      return std::find(cfg.tasks.begin(), cfg.tasks.end(), name) !=
             cfg.tasks.end();
    };

    // Tasks run in the fixed order of known_tasks(): the spectrum feeds the
    // stop-mass check, the curves feed the limits.
    for (const std::string& task : known_tasks()) {
      if (!enabled(task)) continue;
      const auto t0 = std::chrono::steady_clock::now();
      json files = json::array();

      if (task == "dimension") {
        spectrum = analyze_spectrum(cfg.model.ratio_law());
        manifest["spectrum"] = spectrum_to_json(*spectrum);
        if (cfg.model.kind == ModelKind::homogeneous) {
          manifest["spectrum"]["as_dimension"] =
              almost_sure_dimension_homogeneous(cfg.model.ratio_law());
        }
        log << "dimension: D = " << spectrum->D
            << ", eta = " << spectrum->renewal_mean << "\n";
      } else if (task == "stop_mass") {
        detail::CsvWriter csv((fs::path(out_dir) / "stop_mass.csv").string());
        csv.row({"r_over_R", "mean", "stderr", "n_mc"});
        const int n = std::max(100, cfg.n_mc);
        for (double r : make_r_grid(cfg.r_grid, R)) {
          const StopMassEstimate est = markov_stop_mass(
              *model, r, R, n, mix_key(cfg.seed, 0x73746f70), params.jobs);
          csv.row({detail::csv_num(r / R), detail::csv_num(est.mean),
                   detail::csv_num(est.stderr_), std::to_string(est.n_mc)});
        }
        csv.close();
        files.push_back("stop_mass.csv");
      } else if (task == "verify_a2") {
        const A2Result res =
            test_a2(cfg.model, 1, 20000, 2, mix_key(cfg.seed, 0x613274));
        json j{{"p_marginal", res.p_marginal},
               {"p_independence", res.p_independence},
               {"n_effective", res.n_effective},
               {"n_samples", 20000},
               {"depth", 2},
               {"child", 1}};
        if (cfg.model.kind == ModelKind::markov_carpet) {
          const CarpetDependence dep = carpet_level_dependence(
              cfg.model, 20000, mix_key(cfg.seed, 0x773274));
          j["carpet_w"] = dep.w;
          j["carpet_w_stderr"] = dep.stderr_;
          j["carpet_w_n"] = dep.n;
        }
        std::ofstream out(fs::path(out_dir) / "a2.json", std::ios::binary);
        out << j.dump(2) << "\n";
        if (!out) throw std::runtime_error("cannot write a2.json");
        files.push_back("a2.json");
        log << "verify_a2: p_marginal = " << res.p_marginal
            << ", p_independence = " << res.p_independence << "\n";
      } else if (task == "mean_curve") {
        curve = mean_curvature_curve(cfg.model, open_set, R,
                                     make_eps_grid(cfg.eps_grid), cfg.n_mc,
                                     params, cfg.seed);
        detail::CsvWriter csv((fs::path(out_dir) / "mean_curve.csv").string());
        csv.row({"eps", "k", "mean", "stderr", "n_mc"});
        for (int k = 0; k < 3; ++k) {
          for (std::size_t j = 0; j < curve->eps.size(); ++j) {
            csv.row({detail::csv_num(curve->eps[j]), std::to_string(k),
                     detail::csv_num(curve->mean[k][j]),
                     detail::csv_num(curve->se[k][j]),
                     std::to_string(curve->n_mc)});
          }
        }
        csv.close();
        files.push_back("mean_curve.csv");
      } else if (task == "rk") {
        rk = estimate_rk(cfg.model, open_set, R,
                         make_r_grid(cfg.r_grid, R, cfg.model), cfg.n_mc,
                         params, cfg.seed);
        detail::CsvWriter csv((fs::path(out_dir) / "rk_curve.csv").string());
        csv.row({"r", "k", "rk", "stderr"});
        for (int k = 0; k < 3; ++k) {
          for (std::size_t j = 0; j < rk->r.size(); ++j) {
            csv.row({detail::csv_num(rk->r[j]), std::to_string(k),
                     detail::csv_num(rk->rk[k][j]),
                     detail::csv_num(rk->se[k][j])});
          }
        }
        csv.close();
        files.push_back("rk_curve.csv");
      } else if (task == "limits") {
        detail::CsvWriter csv((fs::path(out_dir) / "limits.csv").string());
        csv.row({"k", "method", "value", "stderr", "diagnostics"});
        std::array<std::optional<LimitReport>, 3> reports;
        for (int k = 2; k >= 1; --k) {
          const LimitReport rep = make_limit_report(*curve, *rk, k, *spectrum, R);
          reports[k] = rep;
          csv.row({std::to_string(k), "average",
                   detail::csv_num(rep.average.value),
                   detail::csv_num(rep.average.se),
                   json{{"delta", curve->eps.back()}}.dump()});
          csv.row({std::to_string(k), "renewal",
                   detail::csv_num(rep.renewal.value),
                   detail::csv_num(rep.renewal.se),
                   json{{"tail_fraction", rep.tail_fraction},
                        {"fitted_delta", rep.fitted_delta},
                        {"tail_excluded", rep.tail_excluded}}
                       .dump()});
          if (rep.lattice) {
            csv.row({std::to_string(k), "lattice",
                     detail::csv_num(rep.lattice->partial_sum[0]),
                     detail::csv_num(0.0),
                     json{{"s", 0.0},
                          {"m_max", rep.lattice->m_max},
                          {"direct", rep.lattice->direct[0]}}
                         .dump()});
          }
        }
        csv.close();
        files.push_back("limits.csv");
        const PositivityVerdict verdict =
            positivity_and_ratio(*curve, *reports[2], *reports[1], spectrum->D);
        json vj{{"positive", verdict.positive},
                {"min_rescaled", verdict.min_rescaled},
                {"ratio_checked", verdict.ratio_checked}};
        if (verdict.ratio_checked) {
          vj["ratio"] = verdict.ratio;
          vj["ratio_se"] = verdict.ratio_se;
          vj["ratio_target"] = verdict.ratio_target;
        }
        manifest["positivity"] = vj;
        log << "limits: average(2) = " << reports[2]->average.value
            << ", renewal(2) = " << reports[2]->renewal.value << "\n";
      } else if (task == "render") {
        auto tree = LabeledTree(model, cfg.seed);
        const double r_view = R * std::pow(model->max_ratio(), 3) * 0.95;
        const MarkovStop stop = markov_stop(tree, r_view, R);
        render_svg(tree, stop, open_set,
                   (fs::path(out_dir) / "cover.svg").string());
        files.push_back("cover.svg");
        // The raster image goes deeper than the SVG: aim for ~768 pixels
        // across with the stop just above the pixel scale.
        const double delta = R / 128.0;
        const double h = std::max(delta / 4.0, open_set.diameter / 768.0);
        const BinaryMask mask = rasterize_cover_streamed(
            *model, cfg.seed, delta, R, open_set, h, 4 * h);
        write_pgm(mask, (fs::path(out_dir) / "cover.pgm").string());
        files.push_back("cover.pgm");
      }

      manifest["tasks"][task] = {{"seconds", seconds_since(t0)},
                                 {"files", files}};
    }
  } catch (const std::exception& e) {
    manifest["warnings"].push_back(e.what());
    write_manifest();
    log << "run failed: " << e.what() << "\n";
    return 3;
  }

  manifest["complete"] = true;
  write_manifest();
  return 0;
}

}  // namespace fracurv
