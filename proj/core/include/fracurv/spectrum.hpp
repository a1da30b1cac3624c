#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fracurv {

struct TreeModel;

/// Distribution of the contraction-ratio multiset of one random map list.
/// Each atom is the ratio list of one possible label together with its
/// probability. Probabilities must sum to 1 and every ratio must lie in (0,1).
struct RatioLaw {
  struct Atom {
    std::vector<double> ratios;
    double prob = 0.0;
  };
  std::vector<Atom> atoms;

  void validate() const;  // throws std::invalid_argument
  double mean_map_count() const;
};

struct SpectrumResult {
  double D = 0.0;                  // root of  E sum_i r_i^D = 1
  double renewal_mean = 0.0;       // E sum_i |ln r_i| r_i^D
  std::optional<double> lattice_spacing;  // common spacing of |ln r_i|, if any
};

/// Scaling exponent: the unique root of phi(s) = E sum_i r_i^s - 1.
/// Requires E N > 1 (phi(0) > 0) and at least one atom with a map.
/// Bisection bracketing by doubling, then two Newton polish steps.
double solve_dimension(const RatioLaw& law, double tol = 1e-12);

/// Mean of the renewal measure: E sum_i |ln r_i| * r_i^D, in nats.
double renewal_mean(const RatioLaw& law, double D);

/// Largest c > 0 such that every |ln r| in the support is an integer multiple
/// of c up to tol * max|ln r|; nullopt when the support generates a dense
/// subgroup. Real-valued Euclidean gcd with that cutoff.
std::optional<double> lattice_spacing(const RatioLaw& law, double tol = 1e-9);

/// Exponent governing almost-sure box dimension for level-homogeneous trees:
/// the root of psi(s) = E ln(sum_i r_i^s). By Jensen it never exceeds the
/// mean exponent from solve_dimension.
double almost_sure_dimension_homogeneous(const RatioLaw& law,
                                         double tol = 1e-12);

SpectrumResult analyze_spectrum(const RatioLaw& law, double tol = 1e-12);

struct StopMassEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int n_mc = 0;
};

/// Monte Carlo check that the stopped-code mass sum_{sigma in Sigma(r)} of
/// (ratio product)^D averages to 1. r >= R returns exactly 1 with zero
/// variance because the stop is the root alone.
StopMassEstimate markov_stop_mass(const TreeModel& model, double r, double R,
                                  int n_mc, std::uint64_t seed, int jobs = 1);

}  // namespace fracurv
