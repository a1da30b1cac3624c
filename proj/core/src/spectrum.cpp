#include "fracurv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracurv/models.hpp"
#include "fracurv/rng.hpp"
#include "fracurv/stats.hpp"
#include "parallel.hpp"

namespace fracurv {

void RatioLaw::validate() const {
  if (atoms.empty()) throw std::invalid_argument("ratio law: no atoms");
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob))
      throw std::invalid_argument("ratio law: atom probabilities must be >= 0");
    sum += a.prob;
    for (double r : a.ratios)
      if (!(r > 0.0) || !(r < 1.0))
        throw std::invalid_argument("ratio law: ratios must lie in (0,1)");
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("ratio law: atom probabilities must sum to 1");
}

double RatioLaw::mean_map_count() const {
  double n = 0.0;
  for (const Atom& a : atoms) n += a.prob * static_cast<double>(a.ratios.size());
  return n;
}

namespace {

// phi(s) = E sum_i r_i^s - 1, strictly decreasing in s.
double phi(const RatioLaw& law, double s) {
  double v = -1.0;
  for (const RatioLaw::Atom& a : law.atoms)
    for (double r : a.ratios) v += a.prob * std::pow(r, s);
  return v;
}

double phi_prime(const RatioLaw& law, double s) {
  double v = 0.0;
  for (const RatioLaw::Atom& a : law.atoms)
    for (double r : a.ratios) v += a.prob * std::log(r) * std::pow(r, s);
  return v;
}

// psi(s) = E ln(sum_i r_i^s), also strictly decreasing.
double psi(const RatioLaw& law, double s) {
  double v = 0.0;
  for (const RatioLaw::Atom& a : law.atoms) {
    double inner = 0.0;
    for (double r : a.ratios) inner += std::pow(r, s);
    v += a.prob * std::log(inner);
  }
  return v;
}

double psi_prime(const RatioLaw& law, double s) {
  double v = 0.0;
  for (const RatioLaw::Atom& a : law.atoms) {
    double inner = 0.0, dinner = 0.0;
    for (double r : a.ratios) {
      const double p = std::pow(r, s);
      inner += p;
      dinner += std::log(r) * p;
    }
    v += a.prob * dinner / inner;
  }
  return v;
}

template <class F, class DF>
double solve_decreasing(F f, DF df, double f0, double tol, const char* what) {
  if (!(f0 > 0.0))
    throw std::invalid_argument(std::string(what) +
                                ": value at 0 must be positive (supercritical law)");
  double lo = 0.0, hi = 1.0;
  double fhi = f(hi);
  while (fhi > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4)
      throw std::invalid_argument(std::string(what) + ": no root below 1e4");
    fhi = f(hi);
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  // Two Newton steps sharpen the bisection estimate well past tol.
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 2; ++it) {
    const double d = df(s);
    if (d >= 0.0) break;
    const double step = f(s) / d;
    const double next = s - step;
    if (next < lo || next > hi) break;
    s = next;
  }
  return s;
}

}  // namespace

double solve_dimension(const RatioLaw& law, double tol) {
  law.validate();
  return solve_decreasing([&](double s) { return phi(law, s); },
                          [&](double s) { return phi_prime(law, s); },
                          law.mean_map_count() - 1.0, tol, "solve_dimension");
}

double renewal_mean(const RatioLaw& law, double D) {
  law.validate();
  double v = 0.0;
  for (const RatioLaw::Atom& a : law.atoms)
    for (double r : a.ratios) v += a.prob * (-std::log(r)) * std::pow(r, D);
  return v;
}

std::optional<double> lattice_spacing(const RatioLaw& law, double tol) {
  law.validate();
  std::vector<double> logs;
  for (const RatioLaw::Atom& a : law.atoms) {
    if (a.prob <= 0.0) continue;
    for (double r : a.ratios) logs.push_back(-std::log(r));
  }
  if (logs.empty()) return std::nullopt;
  const double lmax = *std::max_element(logs.begin(), logs.end());
  const double cutoff = tol * lmax;
  // Real Euclidean algorithm: fold the support into a candidate spacing.
  double g = logs[0];
  for (std::size_t i = 1; i < logs.size(); ++i) {
    double a = std::max(g, logs[i]);
    double b = std::min(g, logs[i]);
    while (b > cutoff) {
      double r = std::fmod(a, b);
      if (r > b - cutoff) r = 0.0;  // divides within tolerance
      a = b;
      b = r;
    }
    g = a;
  }
  if (g <= cutoff) return std::nullopt;
  for (double v : logs) {
    const double k = std::round(v / g);
    if (std::abs(v - k * g) > cutoff) return std::nullopt;
  }
  return g;
}

double almost_sure_dimension_homogeneous(const RatioLaw& law, double tol) {
  law.validate();
  for (const RatioLaw::Atom& a : law.atoms)
    if (a.prob > 0.0 && a.ratios.empty())
      throw std::invalid_argument(
          "almost_sure_dimension_homogeneous: empty labels would extinguish "
          "the tree");
  return solve_decreasing([&](double s) { return psi(law, s); },
                          [&](double s) { return psi_prime(law, s); },
                          psi(law, 0.0), tol,
                          "almost_sure_dimension_homogeneous");
}

SpectrumResult analyze_spectrum(const RatioLaw& law, double tol) {
  SpectrumResult out;
  out.D = solve_dimension(law, tol);
  out.renewal_mean = renewal_mean(law, out.D);
  out.lattice_spacing = lattice_spacing(law);
  return out;
}

StopMassEstimate markov_stop_mass(const TreeModel& model, double r, double R,
                                  int n_mc, std::uint64_t seed, int jobs) {
  if (n_mc < 1) throw std::invalid_argument("markov_stop_mass: n_mc must be >= 1");
  const double D = solve_dimension(model.ratio_law());
  const int reps = model.deterministic() ? 1 : n_mc;
  std::vector<double> sums(static_cast<std::size_t>(reps));
  detail::run_indexed(reps, jobs, [&](int rep) {
    const std::uint64_t rep_seed = replicate_seed(seed, static_cast<std::uint64_t>(rep));
    sums[static_cast<std::size_t>(rep)] = stop_mass_sum(model, rep_seed, r, R, D);
  });
  const MeanStderr ms = mean_stderr(sums);
  return StopMassEstimate{ms.mean, ms.stderr_, reps};
}

}  // namespace fracurv
