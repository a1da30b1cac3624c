#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "fracurv/models.hpp"
#include "fracurv/polygon.hpp"

namespace fracurv {

struct TreeNode {
  std::int32_t parent = -1;       // index into the previous level
  std::int32_t first_child = -1;  // index into the next level, -1 until built
  std::int32_t letter = 0;        // 1-based position among siblings; 0 at root
  std::int32_t label = 0;         // index into the model alphabet
  double rprod = 1.0;             // ratio product along the path from the root
  std::uint64_t pkey = 0;         // path key driving all draws at this node
};

/// A sampled labeled code tree, stored level by level. Trees that still hold
/// their model can be deepened in place; the extension is consistent with the
/// original draw because every random choice is a pure function of seed and
/// path.
class LabeledTree {
 public:
  LabeledTree(std::shared_ptr<const TreeModel> model, std::uint64_t seed);

  const TreeModel* model() const { return model_.get(); }
  std::uint64_t seed() const { return seed_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<TreeNode>& level(int d) const { return levels_.at(d); }
  std::size_t node_count() const;

  const TreeNode& node(int d, std::int32_t idx) const {
    return levels_.at(d).at(static_cast<std::size_t>(idx));
  }
  const Rifs& label_of(int d, std::int32_t idx) const {
    return model_->alphabet[static_cast<std::size_t>(node(d, idx).label)];
  }
  Code code_of(int d, std::int32_t idx) const;
  /// Node at the given code, or nullptr when the code leaves the tree (either
  /// a position beyond a node's child count or deeper than generated levels).
  const TreeNode* find(const Code& code) const;
  /// Composed similarity of the code prefix ending at (d, idx).
  Similarity map_of(int d, std::int32_t idx) const;

  /// Extends the tree with full levels up to `target_depth`. Throws when the
  /// tree has no model handle (shifted trees) or the node budget would burst.
  void deepen(int target_depth);

  /// Fault-injection hook for the independence diagnostics: forcibly replaces
  /// the label at (d, idx). Only labels with the same map count are accepted;
  /// anything else would desynchronize child counts from labels.
  void override_label(int d, std::int32_t idx, int label);

  /// The subtree rooted at `code`, detached from the model: its labels are
  /// those realized here, so it cannot be deepened further.
  LabeledTree shift(const Code& code) const;

  static LabeledTree sample_to_depth(std::shared_ptr<const TreeModel> model,
                                     int depth, std::uint64_t seed);

 private:
  LabeledTree() = default;
  void build_next_level();

  std::shared_ptr<const TreeModel> model_;
  std::uint64_t seed_ = 0;
  bool frozen_ = false;  // shifted trees keep realized labels only
  std::vector<std::vector<TreeNode>> levels_;
  // markov_carpet only: lattice coordinates of each node's subsquare, kept so
  // deeper levels can resume the row chains.
  std::vector<std::vector<std::array<std::int32_t, 2>>> cells_;
  friend struct TreeBuilder;
};

/// The stop Sigma(r): all codes whose ratio product first drops to r/R.
struct MarkovStop {
  std::vector<Code> codes;
  std::vector<double> ratios;  // rprod per code, same order
  double r = 0;
  double R = 0;
  std::size_t size() const { return codes.size(); }
};

/// Computes Sigma(r), deepening `tree` as required. Throws when the tree is
/// model-less and too shallow (the message names the depth that would be
/// needed) or when the stop would exceed the node budget.
MarkovStop markov_stop(LabeledTree& tree, double r, double R);

/// Indices into `stop.codes` of the cells within 2r of the complement of the
/// union of the root label's map images of O. These are the cells whose
/// parallel neighborhoods can poke outside the first-level cover.
std::vector<std::size_t> boundary_codes(const LabeledTree& tree,
                                        const MarkovStop& stop,
                                        const OpenSetSpec& open_set);

}  // namespace fracurv
