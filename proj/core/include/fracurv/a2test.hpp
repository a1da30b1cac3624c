#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "fracurv/tree.hpp"

namespace fracurv {

/// Outcome of the back-path independence check for one child position.
/// p_marginal compares the law of the shifted subtree at that position with
/// the law of a fresh tree (two-sample chi-square over truncated-subtree
/// serializations). p_independence tests the subtree against the realized
/// root map at the position (contingency chi-square). Under a correctly
/// coupled model both p-values are uniform-ish; small values flag a fault.
struct A2Result {
  double p_marginal = 1.0;
  double p_independence = 1.0;
  int n_effective = 0;  // trees whose root actually had this child
};

/// Serialization of the first `depth` levels: one letter per label in level
/// order, levels separated by '|'. Child counts are label-determined, so this
/// pins down the truncated labeled tree exactly.
std::string serialize_truncated(const LabeledTree& tree, int depth);

using TreeSampler = std::function<LabeledTree(std::uint64_t rep_seed, int depth)>;

/// Core of the test, parameterized over samplers so fault-injected variants
/// can be driven through the same statistics. `sample_deep` must produce
/// trees of depth `depth`+1 (the subtree at `child` is then `depth` deep),
/// `sample_fresh` trees of depth `depth`.
A2Result test_a2_sampled(const TreeSampler& sample_deep,
                         const TreeSampler& sample_fresh, int child,
                         int n_samples, int depth, std::uint64_t seed);

A2Result test_a2(const TreeModel& model, int child, int n_samples, int depth,
                 std::uint64_t seed);

/// Carpet diagnostic: conditional probability that the three retained
/// subsquares of the root, in row order, carry labels (G1, G2, G3), split by
/// the root label. The left-neighbor chains make these differ across root
/// labels, which is exactly the level dependence a per-node independent model
/// cannot show.
struct CarpetDependence {
  std::array<double, 4> w{};
  std::array<double, 4> stderr_{};
  std::array<int, 4> n{};
};

CarpetDependence carpet_level_dependence(const TreeModel& model, int n_samples,
                                         std::uint64_t seed);

/// One retained subsquare of a carpet realization at a fixed level:
/// 1-based lattice coordinates (i rightward, j upward) and the label.
struct CarpetCell {
  int i = 0;
  int j = 0;
  int label = 0;
};

/// All retained subsquares of one carpet realization at `level`, recovered
/// from the composed maps. Lets a test re-derive row adjacency on its own
/// instead of trusting the generator's bookkeeping.
std::vector<CarpetCell> carpet_level_cells(const TreeModel& model,
                                           std::uint64_t seed, int level);

}  // namespace fracurv
