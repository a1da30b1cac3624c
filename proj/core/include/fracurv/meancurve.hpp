#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fracurv/curvature.hpp"
#include "fracurv/models.hpp"
#include "fracurv/polygon.hpp"

namespace fracurv {

/// Shared knobs of the raster pipeline. The stop radius of a rasterization
/// serving dilation radius eps is q * eps (floored at the pixel size); the
/// pixel size is h_ratio * eps, clamped so no grid side exceeds max_grid.
struct PipelineParams {
  double q = 0.05;
  double h_ratio = 1.0 / 32.0;
  int max_grid = 20000;
  int jobs = 1;
};

/// Monte-Carlo means of the curvature triple of F(eps) over a descending
/// radius grid. mean[k] / se[k] are indexed like eps; n_mc is the replicate
/// count actually used: deterministic models collapse to one replicate and
/// zero error, stochastic means are floored at 30 replicates.
struct MeanCurve {
  std::vector<double> eps;
  std::array<std::vector<double>, 3> mean;
  std::array<std::vector<double>, 3> se;
  int n_mc = 0;
};

/// Paired means of C_k(F(r)) - sum_i 1{r <= R r_i} C_k(F_i(r)) over a
/// descending grid of r, for all three k at once (the rasterizations are
/// shared). F_i(r) dilates the rasterized cover of branch i alone.
struct RkCurve {
  std::vector<double> r;
  std::array<std::vector<double>, 3> rk;
  std::array<std::vector<double>, 3> se;
  int n_mc = 0;
};

/// Estimates E C_k(F(eps)) over the grid by rasterizing each replicate once
/// per octave of radii, distance-transforming once, and thresholding per
/// radius. Pass R = cutoff_R(open_set, slack). Radii must lie in (0, R] and
/// be given in any order; the curve comes back descending.
/// Throws when the grid cap forces a pixel size coarser than the stop radius
/// of some octave (the message names the smallest feasible eps).
MeanCurve mean_curvature_curve(const TreeModel& model,
                               const OpenSetSpec& open_set, double R,
                               std::vector<double> eps_grid, int n_mc,
                               const PipelineParams& params,
                               std::uint64_t seed);

/// Paired estimator of the renewal-equation residual: X and Y come from the
/// same replicate tree, with the branch indicator evaluated on the realized
/// first-level ratios. Grid handling matches mean_curvature_curve.
RkCurve estimate_rk(const TreeModel& model, const OpenSetSpec& open_set,
                    double R, std::vector<double> r_grid, int n_mc,
                    const PipelineParams& params, std::uint64_t seed);

/// Unpaired variant (fresh replicates for the subtracted term), kept for the
/// variance comparison in the diagnostics; same estimand as estimate_rk.
RkCurve estimate_rk_unpaired(const TreeModel& model,
                             const OpenSetSpec& open_set, double R,
                             std::vector<double> r_grid, int n_mc,
                             const PipelineParams& params, std::uint64_t seed);

}  // namespace fracurv
