#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "fracurv/a2test.hpp"
#include "fracurv/models.hpp"
#include "fracurv/presets.hpp"
#include "fracurv/tree.hpp"

using namespace fracurv;

namespace {

const double kHalfRoot3 = std::sqrt(3.0) / 2.0;

Rifs corner_maps() {
  return {Similarity{0.5, 0, false, {0.0, 0.0}},
          Similarity{0.5, 0, false, {0.5, 0.0}},
          Similarity{0.5, 0, false, {0.25, kHalfRoot3 / 2}}};
}

Rifs rotated_corner_maps() {
  Rifs maps = corner_maps();
  maps[2] = Similarity{0.5, std::acos(-1.0) / 3, false, {0.5, 0.0}};
  return maps;
}

}  // namespace

TEST_CASE("independence diagnostics pass on every bundled model") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const TreeModel model = preset(name).model;
    const A2Result res = test_a2(model, 1, 20000, 2, 515);
    CAPTURE(res.p_marginal);
    CAPTURE(res.p_independence);
    CHECK(res.p_marginal > 0.01);
    CHECK(res.p_independence > 0.01);
    CHECK(res.n_effective > 0);
  }
}

TEST_CASE("a planted root-copy fault is caught") {
  // Two labels, equal map count, picked at random per node. The sabotage
  // copies the root label onto a child, so the subtree there remembers the
  // root and the independence table skews hard. The two label alphabets
  // share maps 1 and 2 and differ only in map 3, so the fault has to sit at
  // child 3: the independence table keys its rows on the realized map at
  // the tested position, and identical maps would collapse it to one row.
  const TreeModel model = make_recursive(
      {corner_maps(), rotated_corner_maps()}, {0.5, 0.5}, {"A", "B"});
  auto shared = std::make_shared<const TreeModel>(model);

  const int child = 3;
  const TreeSampler sabotage = [&](std::uint64_t rep_seed, int depth) {
    LabeledTree tree = LabeledTree::sample_to_depth(shared, depth, rep_seed);
    tree.override_label(1, child - 1, tree.node(0, 0).label);
    return tree;
  };
  const TreeSampler fresh = [&](std::uint64_t rep_seed, int depth) {
    return LabeledTree::sample_to_depth(shared, depth, rep_seed);
  };

  const A2Result res = test_a2_sampled(sabotage, fresh, child, 20000, 2, 99);
  CHECK(res.p_independence < 0.01);

  // Control: the same harness without the override stays clean.
  const A2Result clean = test_a2_sampled(fresh, fresh, child, 20000, 2, 99);
  CHECK(clean.p_independence > 0.01);
  CHECK(clean.p_marginal > 0.01);
}

TEST_CASE("carpet rows follow the left-neighbor chain") {
  const TreeModel model = preset("carpet-markov").model;
  const auto transition = carpet_default_transition();

  // Walk many level-2 realizations and tally label transitions between
  // horizontally adjacent retained cells, plus the no-left-neighbor starts.
  std::array<std::array<std::int64_t, 4>, 5> counts{};
  const int n_samples = 100000;
  for (int rep = 0; rep < n_samples; ++rep) {
    const auto cells = carpet_level_cells(model, 40000 + (std::uint64_t)rep, 2);
    std::map<std::pair<int, int>, int> by_pos;
    for (std::size_t i = 0; i < cells.size(); ++i)
      by_pos[{cells[i].i, cells[i].j}] = (int)i;
    for (const CarpetCell& cell : cells) {
      const auto left = by_pos.find({cell.i - 1, cell.j});
      const int row = left == by_pos.end() ? 0 : cells[(std::size_t)left->second].label + 1;
      counts[(std::size_t)row][(std::size_t)cell.label] += 1;
    }
  }

  for (int row = 0; row < 5; ++row) {
    std::int64_t total = 0;
    for (std::int64_t c : counts[(std::size_t)row]) total += c;
    REQUIRE(total > 1000);
    for (int label = 0; label < 4; ++label) {
      const double want = transition[(std::size_t)row][(std::size_t)label];
      const double got = (double)counts[(std::size_t)row][(std::size_t)label] / (double)total;
      const double se = std::sqrt(std::max(want * (1 - want), 1e-12) / (double)total);
      CAPTURE(row);
      CAPTURE(label);
      // Forbidden transitions must never occur, the rest sit within four
      // standard deviations of the table entry (twenty cells are checked).
      if (want == 0.0) {
        CHECK(counts[(std::size_t)row][(std::size_t)label] == 0);
      } else {
        CHECK(std::abs(got - want) <= 4 * se);
      }
    }
  }
}

TEST_CASE("carpet level dependence splits by the root label") {
  const TreeModel model = preset("carpet-markov").model;
  const CarpetDependence dep = carpet_level_dependence(model, 100000, 2024);

  // Roots 1 and 2 remove a top quadrant or the top-right one; either way the
  // row pattern (1,2,3) would need the forbidden 2 -> 3 step, so it never
  // shows. Roots 3 and 4 leave the pattern reachable with probability
  // (1/4)^3: two unconstrained starts and one uniform follow-up.
  for (int root : {0, 1}) {
    REQUIRE(dep.n[(std::size_t)root] > 1000);
    CHECK(dep.w[(std::size_t)root] == 0.0);
  }
  for (int root : {2, 3}) {
    REQUIRE(dep.n[(std::size_t)root] > 1000);
    const double want = 1.0 / 64.0;
    CHECK(std::abs(dep.w[(std::size_t)root] - want) <=
          4 * dep.stderr_[(std::size_t)root]);
  }
}
