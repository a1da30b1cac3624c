#include "fracurv/meancurve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "fracurv/distance.hpp"
#include "fracurv/raster.hpp"
#include "fracurv/rng.hpp"
#include "fracurv/stats.hpp"
#include "model_detail.hpp"
#include "parallel.hpp"

namespace fracurv {

namespace {

struct Octave {
  std::vector<std::size_t> idx;  // positions in the descending radius grid
  double r_min = 0, r_max = 0;
  double h = 0, delta = 0, margin = 0;
};

std::vector<double> checked_descending_grid(std::vector<double> grid, double R,
                                            const char* who) {
  if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty radius grid");
  for (double e : grid) {
    if (!(e > 0) || e > R * (1 + 1e-12)) {
      throw std::invalid_argument(std::string(who) + ": radius " +
                                  std::to_string(e) + " outside (0, R], R = " +
                                  std::to_string(R));
    }
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());
  return grid;
}

/// Partitions a descending grid into octaves sharing one rasterization, and
/// fixes pixel size, stop radius and margin per octave.
std::vector<Octave> plan_octaves(const std::vector<double>& grid,
                                 const OpenSetSpec& open_set,
                                 const PipelineParams& p, const char* who) {
  if (p.q <= 0 || p.h_ratio <= 0 || p.max_grid < 16 || p.jobs < 1) {
    throw std::invalid_argument(std::string(who) + ": bad pipeline parameters");
  }
  Vec2 lo = open_set.polygon[0], hi = lo;
  for (const Vec2& v : open_set.polygon) {
    lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y);
  }

  std::vector<Octave> octs;
  const double top = grid.front();
  for (std::size_t i = 0; i < grid.size();) {
    Octave oc;
    const int g = static_cast<int>(std::floor(std::log2(top / grid[i]) - 1e-9));
    const double floor_eps = top * std::pow(2.0, -(g + 1));
    for (; i < grid.size() && grid[i] > floor_eps * (1 - 1e-12); ++i) {
      oc.idx.push_back(i);
    }
    oc.r_max = grid[oc.idx.front()];
    oc.r_min = grid[oc.idx.back()];

    oc.h = p.h_ratio * oc.r_min;
    oc.margin = oc.r_max + 8 * oc.h;
    const double span =
        std::max(hi.x - lo.x, hi.y - lo.y) + 2 * oc.margin;
    if (span / oc.h > p.max_grid) {
      const double clamped = span / p.max_grid;
      if (clamped > p.q * oc.r_min * (1 + 1e-9)) {
        const double feasible = clamped / p.q;
        throw std::runtime_error(
            std::string(who) + ": grid cap of " + std::to_string(p.max_grid) +
            " px forces pixels of " + std::to_string(clamped) +
            ", coarser than the stop radius; smallest feasible radius about " +
            std::to_string(feasible));
      }
      oc.h = clamped;
    }
    oc.delta = std::max(p.q * oc.r_min, oc.h);
    octs.push_back(std::move(oc));
  }
  return octs;
}

int effective_replicates(const TreeModel& model, int n_mc, const char* who,
                         bool enforce_floor) {
  if (n_mc < 1) throw std::invalid_argument(std::string(who) + ": n_mc must be >= 1");
  if (model.deterministic()) return 1;
  // Below ~30 replicates the standard errors of a stochastic model are too
  // noisy to report, so the mean estimator floors the count rather than
  // handing back error bars nobody should trust.
  if (enforce_floor && n_mc < 30) return 30;
  return n_mc;
}

}  // namespace

MeanCurve mean_curvature_curve(const TreeModel& model,
                               const OpenSetSpec& open_set, double R,
                               std::vector<double> eps_grid, int n_mc,
                               const PipelineParams& params,
                               std::uint64_t seed) {
  model.validate();
  const char* who = "mean_curvature_curve";
  MeanCurve curve;
  curve.eps = checked_descending_grid(std::move(eps_grid), R, who);
  const auto octs = plan_octaves(curve.eps, open_set, params, who);
  const int n_eff = effective_replicates(model, n_mc, who, true);
  curve.n_mc = n_eff;

  const std::size_t n_eps = curve.eps.size();
  std::vector<std::array<double, 3>> slots(
      static_cast<std::size_t>(n_eff) * n_eps);

  detail::run_indexed(n_eff, params.jobs, [&](int rep) {
    const std::uint64_t rs = replicate_seed(seed, rep);
    for (const Octave& oc : octs) {
      DistanceField field;
      {
        BinaryMask mask = rasterize_cover_streamed(model, rs, oc.delta, R,
                                                   open_set, oc.h, oc.margin);
        field = distance_transform(mask);
      }
      for (std::size_t j : oc.idx) {
        const CurvatureTriple t = levelset_curvature(field, curve.eps[j]);
        slots[static_cast<std::size_t>(rep) * n_eps + j] = {t.c0, t.c1, t.c2};
      }
    }
  });

  std::vector<double> tmp(static_cast<std::size_t>(n_eff));
  for (int k = 0; k < 3; ++k) {
    curve.mean[k].resize(n_eps);
    curve.se[k].resize(n_eps);
    for (std::size_t j = 0; j < n_eps; ++j) {
      for (int rep = 0; rep < n_eff; ++rep) {
        tmp[rep] = slots[static_cast<std::size_t>(rep) * n_eps + j][k];
      }
      const MeanStderr ms = mean_stderr(tmp);
      curve.mean[k][j] = ms.mean;
      curve.se[k][j] = ms.stderr_;
    }
  }
  return curve;
}

namespace {

/// Shared engine of the two rk estimators. X comes from the full cover of the
/// tree at seed_x; Y from the per-branch covers and realized first-level
/// ratios of the tree at seed_y (same seed = paired).
RkCurve rk_engine(const TreeModel& model, const OpenSetSpec& open_set,
                  double R, std::vector<double> r_grid, int n_mc,
                  const PipelineParams& params, std::uint64_t seed,
                  bool paired) {
  model.validate();
  const char* who = "estimate_rk";
  RkCurve curve;
  curve.r = checked_descending_grid(std::move(r_grid), R, who);
  const auto octs = plan_octaves(curve.r, open_set, params, who);
  const int n_eff = effective_replicates(model, n_mc, who, false);
  curve.n_mc = n_eff;

  int max_maps = 0;
  for (const Rifs& label : model.alphabet) {
    max_maps = std::max(max_maps, static_cast<int>(label.size()));
  }

  const std::size_t n_r = curve.r.size();
  std::vector<std::array<double, 3>> slots(
      static_cast<std::size_t>(n_eff) * n_r);

  detail::run_indexed(n_eff, params.jobs, [&](int rep) {
    const std::uint64_t sx = replicate_seed(seed, rep);
    const std::uint64_t sy =
        paired ? sx : replicate_seed(mix_key(seed, 0x9216d5d98979fb1bULL), rep);

    const int root_y = detail::root_label(model, sy);
    const Rifs& maps_y = model.alphabet[static_cast<std::size_t>(root_y)];
    const int n_branches = static_cast<int>(maps_y.size());

    for (const Octave& oc : octs) {
      // Only one distance field is alive at any moment: the branch fields
      // are consumed one by one before the full-cover field is built, which
      // caps the footprint on the largest grids.
      std::vector<std::array<double, 3>> diff(oc.idx.size(), {0.0, 0.0, 0.0});

      std::vector<BinaryMask> subs(static_cast<std::size_t>(max_maps));
      BinaryMask mask_y = rasterize_cover_streamed(model, sy, oc.delta, R,
                                                   open_set, oc.h, oc.margin,
                                                   &subs);
      for (int i = 0; i < n_branches; ++i) {
        const double reach = R * maps_y[i].ratio;
        bool any = false;
        for (std::size_t j : oc.idx) any = any || curve.r[j] <= reach;
        if (any) {
          const DistanceField field = distance_transform(subs[i]);
          for (std::size_t a = 0; a < oc.idx.size(); ++a) {
            const double r = curve.r[oc.idx[a]];
            if (r > reach) continue;
            const CurvatureTriple ty = levelset_curvature(field, r);
            diff[a][0] -= ty.c0;
            diff[a][1] -= ty.c1;
            diff[a][2] -= ty.c2;
          }
        }
        subs[i] = BinaryMask();
      }
      subs.clear();

      if (!paired) {
        mask_y = rasterize_cover_streamed(model, sx, oc.delta, R, open_set,
                                          oc.h, oc.margin);
      }
      const DistanceField field_x = distance_transform(mask_y);
      mask_y = BinaryMask();
      for (std::size_t a = 0; a < oc.idx.size(); ++a) {
        const std::size_t j = oc.idx[a];
        const CurvatureTriple tx = levelset_curvature(field_x, curve.r[j]);
        diff[a][0] += tx.c0;
        diff[a][1] += tx.c1;
        diff[a][2] += tx.c2;
        slots[static_cast<std::size_t>(rep) * n_r + j] = diff[a];
      }
    }
  });

  std::vector<double> tmp(static_cast<std::size_t>(n_eff));
  for (int k = 0; k < 3; ++k) {
    curve.rk[k].resize(n_r);
    curve.se[k].resize(n_r);
    for (std::size_t j = 0; j < n_r; ++j) {
      for (int rep = 0; rep < n_eff; ++rep) {
        tmp[rep] = slots[static_cast<std::size_t>(rep) * n_r + j][k];
      }
      const MeanStderr ms = mean_stderr(tmp);
      curve.rk[k][j] = ms.mean;
      curve.se[k][j] = ms.stderr_;
    }
  }
  return curve;
}

}  // namespace

RkCurve estimate_rk(const TreeModel& model, const OpenSetSpec& open_set,
                    double R, std::vector<double> r_grid, int n_mc,
                    const PipelineParams& params, std::uint64_t seed) {
  return rk_engine(model, open_set, R, std::move(r_grid), n_mc, params, seed,
                   true);
}

RkCurve estimate_rk_unpaired(const TreeModel& model,
                             const OpenSetSpec& open_set, double R,
                             std::vector<double> r_grid, int n_mc,
                             const PipelineParams& params,
                             std::uint64_t seed) {
  return rk_engine(model, open_set, R, std::move(r_grid), n_mc, params, seed,
                   false);
}

}  // namespace fracurv
