#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "fracurv/config.hpp"

namespace fracurv {

/// Command-line level knobs. None of these belong in the config file: seed
/// and n_mc are overrides of config fields, jobs and the output directory
/// never influence the numbers.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> n_mc;
  std::optional<std::string> out_dir;  // beats FRACURV_OUT, beats config
  int jobs = 1;
};

/// Executes the config's tasks in their fixed order, writing CSVs, images and
/// manifest.json into the output directory. Returns the process exit code:
/// 0 on success, 2 when validation fails (diagnostics go to `log`), 3 when a
/// task dies at runtime (partial manifest is flagged incomplete).
int run_config(RunConfig cfg, const RunOptions& options, std::ostream& log);

}  // namespace fracurv
