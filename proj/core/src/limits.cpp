#include "fracurv/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracurv/stats.hpp"

namespace fracurv {

namespace {

// Trapezoid weights for integration in t = ln r over ascending t knots.
std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double half = 0.5 * (t[i + 1] - t[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

}  // namespace

ValueWithError average_limit(const MeanCurve& curve, int k, double D,
                             double delta) {
  if (k < 0 || k > 2) throw std::invalid_argument("average_limit: k must be 0, 1 or 2");
  const std::size_t n = curve.eps.size();
  if (n < 2) throw std::invalid_argument("average_limit: need at least two radii");
  const double eps_min = curve.eps.back();
  const double eps_max = curve.eps.front();
  if (delta < eps_min * (1 - 1e-12)) {
    throw std::invalid_argument("average_limit: delta below the radius grid");
  }
  const double decades = std::log10(eps_max / eps_min);
  if (decades > 0 && static_cast<double>(n - 1) / decades < 8.0) {
    throw std::invalid_argument(
        "average_limit: grid too sparse, need at least 8 points per decade");
  }
  if (delta >= 1.0) return {0.0, 0.0};

  // Ascending knots in t = ln eps; integrand g = eps^{D-k} * mean_k.
  std::vector<double> t(n), g(n), ge(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;  // curve is descending in eps
    t[i] = std::log(curve.eps[j]);
    const double scale = std::pow(curve.eps[j], D - k);
    g[i] = scale * curve.mean[k][j];
    ge[i] = scale * curve.se[k][j];
  }

  const double t_lo = std::log(delta);
  double integral = 0.0, err = 0.0;

  auto lerp = [&](double tt, const std::vector<double>& ys) {
    const auto it = std::lower_bound(t.begin(), t.end(), tt);
    if (it == t.begin()) return ys.front();
    if (it == t.end()) return ys.back();
    const std::size_t i1 = static_cast<std::size_t>(it - t.begin());
    const std::size_t i0 = i1 - 1;
    const double u = (tt - t[i0]) / (t[i1] - t[i0]);
    return ys[i0] + u * (ys[i1] - ys[i0]);
  };

  // Grid part over [max(t_lo, t.front()), t.back()].
  const double g_lo = lerp(t_lo, g);
  const double ge_lo = lerp(t_lo, ge);
  double prev_t = std::max(t_lo, t.front());
  double prev_g = t_lo > t.front() ? g_lo : g.front();
  double prev_e = t_lo > t.front() ? ge_lo : ge.front();
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i] <= prev_t) continue;
    const double half = 0.5 * (t[i] - prev_t);
    integral += half * (prev_g + g[i]);
    err += half * (std::abs(prev_e) + std::abs(ge[i]));
    prev_t = t[i];
    prev_g = g[i];
    prev_e = ge[i];
  }
  // Plateau from the largest grid radius up to eps = 1.
  if (t.back() < 0.0) {
    const double len = 0.0 - std::max(t_lo, t.back());
    if (len > 0) {
      integral += len * g.back();
      err += len * std::abs(ge.back());
    }
  }

  const double norm = -t_lo;  // |ln delta|
  return {integral / norm, err / norm};
}

RenewalResult renewal_integral(const RkCurve& rk, int k, double D, double eta,
                               double R) {
  if (k < 0 || k > 2) throw std::invalid_argument("renewal_integral: k must be 0, 1 or 2");
  if (!(eta > 0)) throw std::invalid_argument("renewal_integral: eta must be positive");
  const std::size_t n = rk.r.size();
  if (n < 4) throw std::invalid_argument("renewal_integral: need at least four radii");
  const double r_lo = rk.r.back();
  if (r_lo > R / 256 * (1 + 1e-9)) {
    throw std::invalid_argument(
        "renewal_integral: grid must reach down to R/256, has " +
        std::to_string(r_lo) + " > " + std::to_string(R / 256));
  }

  // Ascending knots; integrand in t = ln r is r^{D-k} * rk(r).
  std::vector<double> t(n), g(n), ge(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    t[i] = std::log(rk.r[j]);
    const double scale = std::pow(rk.r[j], D - k);
    g[i] = scale * rk.rk[k][j];
    ge[i] = scale * rk.se[k][j];
  }
  const auto w = trapezoid_weights(t);
  double main = 0.0, err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    main += w[i] * g[i];
    err += w[i] * std::abs(ge[i]);
  }

  // Power-law fit of |rk| on the small-r half of the grid: log|rk| against
  // log r. Points indistinguishable from zero are skipped.
  const double t_mid = 0.5 * (t.front() + t.back());
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    if (t[i] > t_mid) break;
    const double a = std::abs(rk.rk[k][j]);
    if (a < 1e-14) continue;
    fx.push_back(t[i]);
    fy.push_back(std::log(a));
  }

  RenewalResult out;
  out.fitted_delta = 0.0;
  double tail = 0.0;
  if (fx.size() >= 3) {
    const OlsFit fit = ols_fit(fx, fy);
    const double p = fit.slope;
    out.fitted_delta = p - (k - D);
    if (out.fitted_delta > 0) {
      // |rk(r)| ~ amp * r^p below r_lo, continued with the sign of the
      // smallest-radius value. The tail integral
      //   integral_0^{r_lo} r^{D-k-1} * amp * r^p dr = amp * r_lo^{D-k+p} / (D-k+p)
      // converges exactly when fitted_delta = D-k+p is positive.
      const double amp = std::exp(fit.intercept);
      const double sign = rk.rk[k].back() < 0 ? -1.0 : 1.0;
      tail = sign * amp * std::pow(r_lo, D - k + p) / (D - k + p);
    } else {
      out.tail_excluded = true;
    }
  } else {
    out.tail_excluded = true;
  }

  const double total = main + tail;
  out.value = total / eta;
  out.se = err / eta;
  out.tail_fraction =
      std::abs(total) > 0 ? std::abs(tail) / std::abs(total) : 0.0;
  return out;
}

LatticeSums lattice_sums(const RkCurve& rk, const MeanCurve& curve, int k,
                         double D, double eta, double c,
                         const std::vector<double>& s_grid, int m_max) {
  if (!(c > 0)) throw std::invalid_argument("lattice_sums: lattice constant must be positive");
  if (!(eta > 0)) throw std::invalid_argument("lattice_sums: eta must be positive");
  if (m_max < 0) throw std::invalid_argument("lattice_sums: m_max must be >= 0");
  const std::size_t n = rk.r.size();
  if (n < 2) throw std::invalid_argument("lattice_sums: rk grid too short");

  std::vector<double> t(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    t[i] = std::log(rk.r[j]);
    v[i] = rk.rk[k][j];
  }
  auto rk_at = [&](double r) {
    const double tt = std::log(r);
    if (tt < t.front() - 1e-9 || tt > t.back() + 1e-9) {
      throw std::invalid_argument(
          "lattice_sums: lattice point r = " + std::to_string(r) +
          " outside the rk grid [" + std::to_string(rk.r.back()) + ", " +
          std::to_string(rk.r.front()) + "]");
    }
    const auto it = std::lower_bound(t.begin(), t.end(), tt);
    if (it == t.begin()) return v.front();
    if (it == t.end()) return v.back();
    const std::size_t i1 = static_cast<std::size_t>(it - t.begin());
    const double u = (tt - t[i1 - 1]) / (t[i1] - t[i1 - 1]);
    return v[i1 - 1] + u * (v[i1] - v[i1 - 1]);
  };

  std::vector<double> te(curve.eps.size()), me(curve.eps.size());
  for (std::size_t i = 0; i < curve.eps.size(); ++i) {
    const std::size_t j = curve.eps.size() - 1 - i;
    te[i] = std::log(curve.eps[j]);
    me[i] = curve.mean[k][j];
  }
  auto mean_at = [&](double eps) -> double {
    const double tt = std::log(eps);
    if (te.empty() || tt < te.front() - 1e-9 || tt > te.back() + 1e-9) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const auto it = std::lower_bound(te.begin(), te.end(), tt);
    if (it == te.begin()) return me.front();
    if (it == te.end()) return me.back();
    const std::size_t i1 = static_cast<std::size_t>(it - te.begin());
    const double u = (tt - te[i1 - 1]) / (te[i1] - te[i1 - 1]);
    return me[i1 - 1] + u * (me[i1] - me[i1 - 1]);
  };

  // The direct sequence only needs the mean curve, which usually reaches
  // further down than the rk grid; report it as far as the curve allows.
  int n_dir = m_max;
  if (!curve.eps.empty()) {
    n_dir = std::max(
        n_dir, static_cast<int>(std::floor(-std::log(curve.eps.back()) / c + 1e-9)));
  }

  LatticeSums out;
  out.s = s_grid;
  out.m_max = m_max;
  for (double s : s_grid) {
    if (s < 0 || s >= c) {
      throw std::invalid_argument("lattice_sums: s must lie in [0, c)");
    }
    double sum = 0.0;
    std::vector<double> direct(static_cast<std::size_t>(n_dir) + 1);
    for (int m = 0; m <= n_dir; ++m) {
      const double u = s + m * c;
      if (m <= m_max) sum += std::exp((k - D) * u) * rk_at(std::exp(-u));
      direct[m] = std::exp((k - D) * u) * mean_at(std::exp(-u));
    }
    // The lattice renewal theorem weighs each lattice point with c/eta (the
    // renewal measure converges to c/eta per step, not 1/eta); dropping the
    // span factor would leave the sum off from the direct sequence by
    // exactly c, which the deterministic models expose immediately.
    out.partial_sum.push_back(sum * c / eta);
    out.direct.push_back(std::move(direct));
  }
  return out;
}

LimitReport make_limit_report(const MeanCurve& curve, const RkCurve& rk, int k,
                              const SpectrumResult& spectrum, double R) {
  LimitReport rep;
  rep.k = k;
  rep.average = average_limit(curve, k, spectrum.D, curve.eps.back());
  const RenewalResult ren =
      renewal_integral(rk, k, spectrum.D, spectrum.renewal_mean, R);
  rep.renewal = {ren.value, ren.se};
  rep.tail_fraction = ren.tail_fraction;
  rep.fitted_delta = ren.fitted_delta;
  rep.tail_excluded = ren.tail_excluded;
  if (spectrum.lattice_spacing) {
    const double c = *spectrum.lattice_spacing;
    const int m_max = std::max(
        0, static_cast<int>(std::floor(-std::log(rk.r.back()) / c)));
    rep.lattice = lattice_sums(rk, curve, k, spectrum.D, spectrum.renewal_mean,
                               c, {0.0}, m_max);
  }
  return rep;
}

PositivityVerdict positivity_and_ratio(const MeanCurve& curve,
                                       const LimitReport& report_d,
                                       const LimitReport& report_dm1,
                                       double D) {
  constexpr int d = 2;
  PositivityVerdict v;
  v.eps = curve.eps;
  v.positive = true;
  v.min_rescaled = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < curve.eps.size(); ++j) {
    // Volume scales like eps^(d-D); dividing by that makes the sequence
    // level off at the fractal volume constant.
    const double scale = std::pow(curve.eps[j], D - d);
    const double val = scale * curve.mean[d][j];
    const double se = scale * curve.se[d][j];
    v.rescaled.push_back(val);
    v.rescaled_se.push_back(se);
    v.min_rescaled = std::min(v.min_rescaled, val);
    if (!(val - 3 * se > 0)) v.positive = false;
  }
  if (D < d) {
    v.ratio_checked = true;
    v.ratio_target = 2.0 / (d - D);
    const double a2 = report_d.average.value;
    const double a1 = report_dm1.average.value;
    v.ratio = a2 / a1;
    const double rel2 = a2 != 0 ? report_d.average.se / std::abs(a2) : 0.0;
    const double rel1 = a1 != 0 ? report_dm1.average.se / std::abs(a1) : 0.0;
    v.ratio_se = std::abs(v.ratio) * (rel1 + rel2);
  }
  return v;
}

}  // namespace fracurv
