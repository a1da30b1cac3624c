#pragma once

#include <optional>
#include <vector>

#include "fracurv/meancurve.hpp"
#include "fracurv/spectrum.hpp"

namespace fracurv {

struct ValueWithError {
  double value = 0.0;
  double se = 0.0;
};

/// Logarithmic average (1/|ln delta|) * integral over (delta, 1] of
/// eps^{D-k} * mean_k(eps) d ln eps, with the integrand held at its value at
/// the largest grid radius above the grid ("plateau" extension) and linearly
/// interpolated in ln eps between grid points. delta = 1 returns 0 by the
/// empty-interval convention. The error is a conservative (fully correlated)
/// propagation of the per-radius standard errors.
/// Throws when delta < min(eps) or the grid is sparser than 8 points per
/// decade.
ValueWithError average_limit(const MeanCurve& curve, int k, double D,
                             double delta);

/// The renewal-equation value (1/eta) * integral over (0, R] of
/// r^{D-k-1} rk(r) dr. The grid part is a trapezoid rule in ln r; below the
/// smallest grid radius the integrand follows a power law fitted to |rk| on
/// the small-r half of the grid. A non-integrable fit (fitted_delta <= 0)
/// excludes the tail and raises the warning flag instead of throwing.
struct RenewalResult {
  double value = 0.0;
  double se = 0.0;
  double tail_fraction = 0.0;  // |tail| / |value * eta|
  double fitted_delta = 0.0;   // exponent excess over k - D in the fit
  bool tail_excluded = false;
};
RenewalResult renewal_integral(const RkCurve& rk, int k, double D, double eta,
                               double R);

/// Lattice-case partial sums (c/eta) * sum_m e^{(k-D)(s+mc)} rk(e^{-(s+mc)})
/// against the directly rescaled means e^{(k-D)(s+nc)} mean_k(e^{-(s+nc)}),
/// whose limit along the lattice subsequence they are (the weight c/eta is
/// the lattice renewal theorem's mass per step). rk values are interpolated
/// linearly in ln r; direct entries fall back to NaN where the mean curve
/// does not cover the radius. Throws when a lattice point needed by the sum
/// lies outside the rk grid.
struct LatticeSums {
  std::vector<double> s;
  std::vector<double> partial_sum;          // per s, summed to m_max
  std::vector<std::vector<double>> direct;  // per s, entries n = 0..m_max
  int m_max = 0;
};
LatticeSums lattice_sums(const RkCurve& rk, const MeanCurve& curve, int k,
                         double D, double eta, double c,
                         const std::vector<double>& s_grid, int m_max);

/// Bundle of the limit estimates for one curvature index.
struct LimitReport {
  int k = 0;
  ValueWithError renewal;
  ValueWithError average;
  double tail_fraction = 0.0;
  double fitted_delta = 0.0;
  bool tail_excluded = false;
  std::optional<LatticeSums> lattice;
};

/// Assembles the report at delta = min(curve.eps); lattice sums are filled
/// when `spectrum` carries a lattice constant, on the s-grid {0}.
LimitReport make_limit_report(const MeanCurve& curve, const RkCurve& rk, int k,
                              const SpectrumResult& spectrum, double R);

/// Positivity of the rescaled volume and the volume-to-surface ratio.
/// rescaled[j] = eps_j^{d-D} * mean_d(eps_j) with d = 2; `positive` states
/// that every grid point clears zero by three standard errors. The ratio
/// clause compares average(d) / average(d-1) against 2 / (d-D) and is skipped
/// (ratio_checked = false) when D >= d.
struct PositivityVerdict {
  std::vector<double> eps;
  std::vector<double> rescaled;
  std::vector<double> rescaled_se;
  double min_rescaled = 0.0;
  bool positive = false;
  bool ratio_checked = false;
  double ratio = 0.0;
  double ratio_se = 0.0;
  double ratio_target = 0.0;
};
PositivityVerdict positivity_and_ratio(const MeanCurve& curve,
                                       const LimitReport& report_d,
                                       const LimitReport& report_dm1,
                                       double D);

}  // namespace fracurv
