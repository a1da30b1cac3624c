#include "fracurv/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "fracurv/rng.hpp"
#include "model_detail.hpp"

namespace fracurv {

namespace {

// Materialized trees are a tool for inspection and tests; the raster pipeline
// streams instead. Cap the node count so a runaway depth request fails with
// advice rather than an OOM kill.
constexpr std::size_t kNodeBudget = 40'000'000;

}  // namespace

LabeledTree::LabeledTree(std::shared_ptr<const TreeModel> model,
                         std::uint64_t seed)
    : model_(std::move(model)), seed_(seed) {
  if (!model_) throw std::invalid_argument("LabeledTree: null model");
  model_->validate();
  TreeNode root;
  root.pkey = detail::root_pkey(seed_);
  root.label = detail::root_label(*model_, seed_);
  levels_.push_back({root});
  if (model_->kind == ModelKind::markov_carpet) cells_.push_back({{{1, 1}}});
}

std::size_t LabeledTree::node_count() const {
  std::size_t n = 0;
  for (const auto& lvl : levels_) n += lvl.size();
  return n;
}

Code LabeledTree::code_of(int d, std::int32_t idx) const {
  Code code(static_cast<std::size_t>(d));
  for (int lvl = d; lvl > 0; --lvl) {
    const TreeNode& n = node(lvl, idx);
    code[static_cast<std::size_t>(lvl - 1)] = n.letter;
    idx = n.parent;
  }
  return code;
}

const TreeNode* LabeledTree::find(const Code& code) const {
  if (static_cast<int>(code.size()) > depth()) return nullptr;
  std::int32_t idx = 0;
  int d = 0;
  for (int letter : code) {
    const TreeNode& n = node(d, idx);
    const auto map_count =
        static_cast<int>(model_->alphabet[static_cast<std::size_t>(n.label)].size());
    if (letter < 1 || letter > map_count) return nullptr;
    if (n.first_child < 0) return nullptr;
    idx = n.first_child + letter - 1;
    ++d;
  }
  return &node(d, idx);
}

Similarity LabeledTree::map_of(int d, std::int32_t idx) const {
  // Collect (parent label, letter) pairs up the path, then fold down.
  std::vector<std::pair<std::int32_t, std::int32_t>> chain;
  chain.reserve(static_cast<std::size_t>(d));
  std::int32_t at = idx;
  for (int lvl = d; lvl > 0; --lvl) {
    const TreeNode& n = node(lvl, at);
    chain.emplace_back(node(lvl - 1, n.parent).label, n.letter);
    at = n.parent;
  }
  Similarity f{1.0, 0.0, false, {0.0, 0.0}};
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    f = compose2(f, model_->alphabet[static_cast<std::size_t>(it->first)]
                                    [static_cast<std::size_t>(it->second - 1)]);
  return f;
}

void LabeledTree::build_next_level() {
  const int d = depth();
  const std::vector<TreeNode>& cur = levels_[static_cast<std::size_t>(d)];
  std::size_t child_total = 0;
  for (const TreeNode& n : cur)
    child_total += model_->alphabet[static_cast<std::size_t>(n.label)].size();
  if (node_count() + child_total > kNodeBudget)
    throw std::length_error(
        "tree node budget exceeded at depth " + std::to_string(d + 1) +
        "; use the streaming stop enumeration for this scale");

  std::vector<TreeNode> next;
  next.reserve(child_total);

  if (model_->kind == ModelKind::markov_carpet) {
    std::vector<std::int32_t> parent_labels(cur.size());
    for (std::size_t p = 0; p < cur.size(); ++p) parent_labels[p] = cur[p].label;
    auto children = detail::carpet_next_level(
        *model_, seed_, d + 1, parent_labels, cells_[static_cast<std::size_t>(d)]);
    // Traversal order is row-major; regroup by parent so siblings sit
    // contiguously after first_child.
    std::stable_sort(children.begin(), children.end(),
                     [](const detail::CarpetChild& a, const detail::CarpetChild& b) {
                       if (a.parent != b.parent) return a.parent < b.parent;
                       return a.letter < b.letter;
                     });
    std::vector<std::array<std::int32_t, 2>> child_cells;
    child_cells.reserve(children.size());
    for (const detail::CarpetChild& c : children) {
      const TreeNode& par = cur[static_cast<std::size_t>(c.parent)];
      TreeNode n;
      n.parent = c.parent;
      n.letter = c.letter;
      n.label = c.label;
      n.rprod = par.rprod * 0.5;
      n.pkey = path_key(par.pkey, c.letter);
      if (levels_[static_cast<std::size_t>(d)][static_cast<std::size_t>(c.parent)]
              .first_child < 0)
        levels_[static_cast<std::size_t>(d)][static_cast<std::size_t>(c.parent)]
            .first_child = static_cast<std::int32_t>(next.size());
      next.push_back(n);
      child_cells.push_back({c.i, c.j});
    }
    levels_.push_back(std::move(next));
    cells_.push_back(std::move(child_cells));
    return;
  }

  Code path;
  for (std::size_t p = 0; p < cur.size(); ++p) {
    const TreeNode& par = cur[p];
    path = code_of(d, static_cast<std::int32_t>(p));
    path.push_back(0);
    const Rifs& maps = model_->alphabet[static_cast<std::size_t>(par.label)];
    levels_[static_cast<std::size_t>(d)][p].first_child =
        static_cast<std::int32_t>(next.size());
    for (int letter = 1; letter <= static_cast<int>(maps.size()); ++letter) {
      path.back() = letter;
      TreeNode n;
      n.parent = static_cast<std::int32_t>(p);
      n.letter = letter;
      n.rprod = par.rprod * maps[static_cast<std::size_t>(letter - 1)].ratio;
      n.pkey = path_key(par.pkey, letter);
      n.label = detail::child_label(*model_, seed_, path, n.pkey, par.pkey);
      next.push_back(n);
    }
  }
  levels_.push_back(std::move(next));
}

void LabeledTree::override_label(int d, std::int32_t idx, int label) {
  if (label < 0 || label >= model_->label_count())
    throw std::out_of_range("override_label: no such label");
  TreeNode& n = levels_.at(static_cast<std::size_t>(d))
                    .at(static_cast<std::size_t>(idx));
  const std::size_t old_width =
      model_->alphabet[static_cast<std::size_t>(n.label)].size();
  const std::size_t new_width =
      model_->alphabet[static_cast<std::size_t>(label)].size();
  if (old_width != new_width)
    throw std::invalid_argument(
        "override_label: replacement must keep the map count");
  n.label = static_cast<std::int32_t>(label);
}

void LabeledTree::deepen(int target_depth) {
  if (target_depth <= depth()) return;
  if (frozen_)
    throw std::runtime_error(
        "deepen: this tree was shifted off its model and holds realized "
        "labels only");
  while (depth() < target_depth) build_next_level();
}

LabeledTree LabeledTree::sample_to_depth(std::shared_ptr<const TreeModel> model,
                                         int depth, std::uint64_t seed) {
  if (depth < 0) throw std::invalid_argument("sample_to_depth: negative depth");
  LabeledTree t(std::move(model), seed);
  t.deepen(depth);
  return t;
}

LabeledTree LabeledTree::shift(const Code& code) const {
  const TreeNode* base = find(code);
  if (!base)
    throw std::out_of_range("shift: code is not a node of this tree");
  LabeledTree out;
  out.model_ = model_;
  out.seed_ = seed_;
  out.frozen_ = true;

  const int base_depth = static_cast<int>(code.size());
  TreeNode root = *base;
  root.parent = -1;
  root.letter = 0;
  root.first_child = -1;
  const double base_rprod = base->rprod;
  root.rprod = 1.0;
  out.levels_.push_back({root});

  // Copy level slices below the base node, remapping parent indices.
  std::int32_t lo = 0, hi = 0;  // index range of the copied slice, inclusive
  {
    std::int32_t base_idx = 0;
    // find() walked by first_child; recover the index by walking again.
    std::int32_t idx = 0;
    int d = 0;
    for (int letter : code) {
      idx = node(d, idx).first_child + letter - 1;
      ++d;
    }
    base_idx = idx;
    lo = hi = base_idx;
  }
  for (int d = base_depth; d < depth(); ++d) {
    const auto& src = levels_[static_cast<std::size_t>(d)];
    std::int32_t child_lo = -1, child_hi = -1;
    for (std::int32_t i = lo; i <= hi; ++i) {
      const TreeNode& n = src[static_cast<std::size_t>(i)];
      if (n.first_child < 0) continue;
      const auto width = static_cast<std::int32_t>(
          model_->alphabet[static_cast<std::size_t>(n.label)].size());
      if (child_lo < 0) child_lo = n.first_child;
      child_hi = n.first_child + width - 1;
    }
    if (child_lo < 0) break;
    const auto& child_src = levels_[static_cast<std::size_t>(d + 1)];
    std::vector<TreeNode> lvl;
    lvl.reserve(static_cast<std::size_t>(child_hi - child_lo + 1));
    for (std::int32_t i = child_lo; i <= child_hi; ++i) {
      TreeNode n = child_src[static_cast<std::size_t>(i)];
      n.parent -= lo;
      if (n.first_child >= 0) n.first_child = -1;  // fixed up next pass
      n.rprod /= base_rprod;
      lvl.push_back(n);
    }
    // Recompute first_child offsets within the copied slices.
    std::vector<TreeNode>& parents = out.levels_.back();
    std::int32_t next_child = 0;
    for (TreeNode& p : parents) {
      const auto width = static_cast<std::int32_t>(
          model_->alphabet[static_cast<std::size_t>(p.label)].size());
      const TreeNode& orig =
          levels_[static_cast<std::size_t>(d)]
                 [static_cast<std::size_t>(lo + (&p - parents.data()))];
      if (orig.first_child >= 0) {
        p.first_child = next_child;
        next_child += width;
      } else {
        p.first_child = -1;
      }
    }
    out.levels_.push_back(std::move(lvl));
    lo = child_lo;
    hi = child_hi;
  }
  return out;
}

MarkovStop markov_stop(LabeledTree& tree, double r, double R) {
  if (!(r > 0.0) || !(R > 0.0))
    throw std::invalid_argument("markov_stop: r and R must be positive");
  MarkovStop stop;
  stop.r = r;
  stop.R = R;
  if (r >= R) {
    stop.codes.push_back({});
    stop.ratios.push_back(1.0);
    return stop;
  }
  const int need = required_stop_depth(*tree.model(), r, R);
  const std::function<void(int, std::int32_t)> walk = [&](int d, std::int32_t idx) {
    const TreeNode& n = tree.node(d, idx);
    if (d > 0 && R * n.rprod <= r) {
      stop.codes.push_back(tree.code_of(d, idx));
      stop.ratios.push_back(n.rprod);
      return;
    }
    if (n.first_child < 0) {
      if (d < tree.depth())
        throw std::logic_error("markov_stop: ragged tree level");
      // Deepen on demand; shifted trees cannot, so report what would be needed.
      try {
        tree.deepen(d + 1);
      } catch (const std::runtime_error&) {
        throw std::runtime_error(
            "markov_stop: tree is frozen at depth " + std::to_string(tree.depth()) +
            " but r/R = " + std::to_string(r / R) + " may need depth " +
            std::to_string(need));
      }
    }
    const TreeNode& fresh = tree.node(d, idx);
    const auto width = static_cast<std::int32_t>(tree.label_of(d, idx).size());
    for (std::int32_t c = 0; c < width; ++c) walk(d + 1, fresh.first_child + c);
  };
  walk(0, 0);
  return stop;
}

std::vector<std::size_t> boundary_codes(const LabeledTree& tree,
                                        const MarkovStop& stop,
                                        const OpenSetSpec& open_set) {
  const Rifs& root_maps = tree.label_of(0, 0);
  std::vector<Polygon> images;
  images.reserve(root_maps.size());
  for (const Similarity& f : root_maps)
    images.push_back(apply_polygon(f, open_set.polygon));

  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < stop.codes.size(); ++k) {
    const TreeNode* n = tree.find(stop.codes[k]);
    if (!n)
      throw std::out_of_range("boundary_codes: stop code not present in tree");
    // Recover (level, index) of the code to compose its map.
    std::int32_t idx = 0;
    int d = 0;
    for (int letter : stop.codes[k]) {
      idx = tree.node(d, idx).first_child + letter - 1;
      ++d;
    }
    const Polygon cell = apply_polygon(tree.map_of(d, idx), open_set.polygon);
    double dist = std::numeric_limits<double>::infinity();
    for (const Polygon& img : images) {
      for (std::size_t e = 0; e < img.size() && dist > 0.0; ++e) {
        const Vec2 a = img[e];
        const Vec2 b = img[(e + 1) % img.size()];
        dist = std::min(dist, polygon_segment_dist(cell, a, b));
      }
      if (dist <= 0.0) break;
    }
    if (dist <= 2.0 * stop.r) out.push_back(k);
  }
  return out;
}

}  // namespace fracurv
