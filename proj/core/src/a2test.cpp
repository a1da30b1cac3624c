#include "fracurv/a2test.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

#include "fracurv/rng.hpp"
#include "fracurv/stats.hpp"

namespace fracurv {

namespace {

constexpr std::uint64_t kSaltFreshBatch = 0x1f83d9abfb41bd6bull;

std::string map_value_key(const Similarity& f) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g/%.17g/%d/%.17g/%.17g", f.ratio,
                f.rotation, f.reflect ? 1 : 0, f.translation.x,
                f.translation.y);
  return buf;
}

}  // namespace

std::string serialize_truncated(const LabeledTree& tree, int depth) {
  std::string out;
  const int top = std::min(depth, tree.depth());
  for (int d = 0; d <= top; ++d) {
    if (d > 0) out.push_back('|');
    for (const TreeNode& n : tree.level(d))
      out.push_back(static_cast<char>('A' + n.label));
  }
  return out;
}

A2Result test_a2_sampled(const TreeSampler& sample_deep,
                         const TreeSampler& sample_fresh, int child,
                         int n_samples, int depth, std::uint64_t seed) {
  if (child < 1) throw std::invalid_argument("test_a2: child must be >= 1");
  if (depth < 1) throw std::invalid_argument("test_a2: depth must be >= 1");
  if (n_samples < 1) throw std::invalid_argument("test_a2: n_samples must be >= 1");

  std::map<std::string, std::size_t> map_rows;
  auto row_of = [&](const std::string& s) {
    return map_rows.emplace(s, map_rows.size()).first->second;
  };

  std::vector<std::string> deep_str, fresh_str;
  std::vector<std::size_t> deep_row;
  deep_str.reserve(static_cast<std::size_t>(n_samples));
  fresh_str.reserve(static_cast<std::size_t>(n_samples));
  A2Result out;
  for (int rep = 0; rep < n_samples; ++rep) {
    LabeledTree t = sample_deep(replicate_seed(seed, static_cast<std::uint64_t>(rep)),
                                depth + 1);
    const Rifs& root_maps = t.label_of(0, 0);
    if (child > static_cast<int>(root_maps.size())) continue;
    ++out.n_effective;
    const LabeledTree sub = t.shift({child});
    deep_str.push_back(serialize_truncated(sub, depth));
    deep_row.push_back(row_of(map_value_key(root_maps[static_cast<std::size_t>(child - 1)])));
  }
  const std::uint64_t fresh_seed = mix_key(seed, kSaltFreshBatch);
  for (int rep = 0; rep < n_samples; ++rep) {
    LabeledTree t = sample_fresh(
        replicate_seed(fresh_seed, static_cast<std::uint64_t>(rep)), depth);
    fresh_str.push_back(serialize_truncated(t, depth));
  }

  // Column indices must not encode which batch a serialization was first
  // seen in: contingency_test pools sparse columns in column order, and
  // with mostly-unique serializations a discovery-order index would pool
  // deep-batch bins with each other and fabricate a marginal difference.
  // Lexicographic order is blind to the batch.
  std::map<std::string, std::size_t> bins;
  for (const std::string& s : deep_str) bins.emplace(s, 0);
  for (const std::string& s : fresh_str) bins.emplace(s, 0);
  std::size_t next_bin = 0;
  for (auto& kv : bins) kv.second = next_bin++;

  const std::size_t cols = bins.size();
  {
    std::vector<std::vector<std::int64_t>> table(
        2, std::vector<std::int64_t>(cols, 0));
    for (const std::string& s : deep_str) ++table[0][bins.at(s)];
    for (const std::string& s : fresh_str) ++table[1][bins.at(s)];
    out.p_marginal = contingency_test(std::move(table)).p;
  }
  {
    std::vector<std::vector<std::int64_t>> table(
        map_rows.size(), std::vector<std::int64_t>(cols, 0));
    for (std::size_t k = 0; k < deep_str.size(); ++k)
      ++table[deep_row[k]][bins.at(deep_str[k])];
    out.p_independence = contingency_test(std::move(table)).p;
  }
  return out;
}

A2Result test_a2(const TreeModel& model, int child, int n_samples, int depth,
                 std::uint64_t seed) {
  auto ptr = std::make_shared<const TreeModel>(model);
  const TreeSampler sampler = [ptr](std::uint64_t rep_seed, int d) {
    return LabeledTree::sample_to_depth(ptr, d, rep_seed);
  };
  return test_a2_sampled(sampler, sampler, child, n_samples, depth, seed);
}

CarpetDependence carpet_level_dependence(const TreeModel& model, int n_samples,
                                         std::uint64_t seed) {
  if (model.kind != ModelKind::markov_carpet)
    throw std::invalid_argument("carpet_level_dependence: carpet models only");
  auto ptr = std::make_shared<const TreeModel>(model);
  std::array<int, 4> hits{};
  CarpetDependence out;
  for (int rep = 0; rep < n_samples; ++rep) {
    LabeledTree t = LabeledTree::sample_to_depth(
        ptr, 1, replicate_seed(seed, static_cast<std::uint64_t>(rep)));
    const int root = t.node(0, 0).label;
    ++out.n[static_cast<std::size_t>(root)];
    const auto& lvl = t.level(1);
    // Letter order coincides with row order for a single 2x2 block.
    if (lvl.size() == 3 && lvl[0].label == 0 && lvl[1].label == 1 &&
        lvl[2].label == 2)
      ++hits[static_cast<std::size_t>(root)];
  }
  for (std::size_t k = 0; k < 4; ++k) {
    if (out.n[k] == 0) continue;
    const double p = static_cast<double>(hits[k]) / out.n[k];
    out.w[k] = p;
    out.stderr_[k] = std::sqrt(p * (1.0 - p) / out.n[k]);
  }
  return out;
}

std::vector<CarpetCell> carpet_level_cells(const TreeModel& model,
                                           std::uint64_t seed, int level) {
  if (model.kind != ModelKind::markov_carpet)
    throw std::invalid_argument("carpet_level_cells: carpet models only");
  if (level < 0) throw std::invalid_argument("carpet_level_cells: level >= 0");
  auto ptr = std::make_shared<const TreeModel>(model);
  LabeledTree t = LabeledTree::sample_to_depth(ptr, level, seed);
  const double scale = std::ldexp(1.0, level);  // 2^level
  std::vector<CarpetCell> cells;
  cells.reserve(t.level(level).size());
  for (std::int32_t idx = 0;
       idx < static_cast<std::int32_t>(t.level(level).size()); ++idx) {
    // Composed carpet maps are pure dyadic shrinks: the translation encodes
    // the lattice cell.
    const Similarity f = t.map_of(level, idx);
    CarpetCell c;
    c.i = static_cast<int>(std::lround(f.translation.x * scale)) + 1;
    c.j = static_cast<int>(std::lround(f.translation.y * scale)) + 1;
    c.label = t.node(level, idx).label;
    cells.push_back(c);
  }
  return cells;
}

}  // namespace fracurv
