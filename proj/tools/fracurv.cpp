// Command-line front end: run a config, run or print a preset, or validate a
// config without running it. Exit codes: 0 success, 2 bad input or failed
// validation, 3 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracurv/config.hpp"
#include "fracurv/presets.hpp"
#include "fracurv/runner.hpp"
#include "fracurv/version.hpp"

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  int n_mc = 0;
  std::string out_dir;
  int jobs = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* n_mc_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  flags.seed_opt = cmd->add_option("--seed", flags.seed, "Override the config seed");
  flags.n_mc_opt = cmd->add_option("--n-mc", flags.n_mc,
                                   "Override the replicate count")
                       ->check(CLI::PositiveNumber);
  flags.out_opt = cmd->add_option(
      "--out", flags.out_dir, "Output directory (beats FRACURV_OUT and the config)");
  cmd->add_option("--jobs", flags.jobs, "Worker threads (never affects results)")
      ->check(CLI::Range(1, 256));
}

int run_with(fracurv::RunConfig cfg, const CommonFlags& flags) {
  fracurv::RunOptions opt;
  if (flags.seed_opt->count()) opt.seed = flags.seed;
  if (flags.n_mc_opt->count()) opt.n_mc = flags.n_mc;
  if (flags.out_opt->count()) opt.out_dir = flags.out_dir;
  opt.jobs = flags.jobs;
  return fracurv::run_config(std::move(cfg), opt, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature statistics of random self-similar sets"};
  app.set_version_flag("--version", fracurv::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Execute a config file");
  run->add_option("config", config_path, "Path to a JSON run config")
      ->required();
  add_common(run, run_flags);

  std::string preset_name;
  bool emit = false;
  CommonFlags preset_flags;
  CLI::App* pre = app.add_subcommand("preset", "Run (or print) a bundled config");
  pre->add_option("name", preset_name, "Preset name")->required();
  pre->add_flag("--emit", emit, "Print the canonical config instead of running");
  add_common(pre, preset_flags);

  std::string validate_path;
  CLI::App* val = app.add_subcommand("validate", "Check a config file");
  val->add_option("config", validate_path, "Path to a JSON run config")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // A config that cannot even be read or parsed is an input problem (2),
  // not a runtime failure (3).
  auto load = [](const std::string& path) {
    try {
      return fracurv::load_config(path);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      std::exit(2);
    }
  };

  try {
    if (run->parsed()) {
      return run_with(load(config_path), run_flags);
    }
    if (pre->parsed()) {
      fracurv::RunConfig cfg = fracurv::preset(preset_name);
      if (emit) {
        std::cout << fracurv::canonical_json(cfg);
        return 0;
      }
      return run_with(std::move(cfg), preset_flags);
    }
    if (val->parsed()) {
      const fracurv::RunConfig cfg = load(validate_path);
      const auto diags = fracurv::validate_config(cfg);
      for (const std::string& d : diags) std::cout << d << "\n";
      if (diags.empty()) {
        std::cout << "ok (hash " << fracurv::config_hash(cfg) << ")\n";
        return 0;
      }
      return 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
