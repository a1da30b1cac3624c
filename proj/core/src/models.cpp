#include "fracurv/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fracurv/rng.hpp"
#include "model_detail.hpp"

namespace fracurv {

namespace {

constexpr double kProbTol = 1e-9;

void check_prob_vector(std::span<const double> p, const std::string& what) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument(what + ": probabilities must be >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw std::invalid_argument(what + ": probabilities must sum to 1");
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

/// The four half-square maps of the carpet, quadrant order 1..4.
Rifs carpet_quadrant_maps() {
  return {
      Similarity{0.5, 0.0, false, {0.0, 0.5}},  // 1: top-left
      Similarity{0.5, 0.0, false, {0.5, 0.5}},  // 2: top-right
      Similarity{0.5, 0.0, false, {0.0, 0.0}},  // 3: bottom-left
      Similarity{0.5, 0.0, false, {0.5, 0.0}},  // 4: bottom-right
  };
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::recursive: return "recursive";
    case ModelKind::homogeneous: return "homogeneous";
    case ModelKind::v_variable: return "v_variable";
    case ModelKind::dependent_gasket: return "dependent_gasket";
    case ModelKind::pinned: return "pinned";
    case ModelKind::markov_carpet: return "markov_carpet";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "recursive") return ModelKind::recursive;
  if (s == "homogeneous") return ModelKind::homogeneous;
  if (s == "v_variable") return ModelKind::v_variable;
  if (s == "dependent_gasket") return ModelKind::dependent_gasket;
  if (s == "pinned") return ModelKind::pinned;
  if (s == "markov_carpet") return ModelKind::markov_carpet;
  throw std::invalid_argument("unknown model kind: " + s);
}

int carpet_quadrant(const Similarity& map) {
  const bool right = map.translation.x > 0.25;
  const bool top = map.translation.y > 0.25;
  if (top) return right ? 2 : 1;
  return right ? 4 : 3;
}

void TreeModel::validate() const {
  if (alphabet.empty())
    throw std::invalid_argument("model: alphabet must not be empty");
  for (std::size_t a = 0; a < alphabet.size(); ++a) {
    if (alphabet[a].empty())
      throw std::invalid_argument("model: label " + std::to_string(a) +
                                  " has no maps");
    for (const Similarity& f : alphabet[a]) {
      if (!(f.ratio > 0.0) || !(f.ratio < 1.0))
        throw std::invalid_argument("model: contraction ratios must lie in (0,1)");
      if (!std::isfinite(f.rotation) || !std::isfinite(f.translation.x) ||
          !std::isfinite(f.translation.y))
        throw std::invalid_argument("model: map parameters must be finite");
    }
  }
  if (probs.size() != alphabet.size())
    throw std::invalid_argument("model: probs must match the alphabet size");
  check_prob_vector(probs, "model");
  if (!label_names.empty() && label_names.size() != alphabet.size())
    throw std::invalid_argument("model: label_names must match the alphabet size");

  switch (kind) {
    case ModelKind::recursive:
    case ModelKind::homogeneous:
      break;
    case ModelKind::v_variable:
      if (v_copies < 1)
        throw std::invalid_argument("v_variable: v_copies must be >= 1");
      break;
    case ModelKind::dependent_gasket:
      if (alphabet.size() != 2)
        throw std::invalid_argument(
            "dependent_gasket: exactly two labels are required (a draw and "
            "its complement)");
      break;
    case ModelKind::pinned:
      for (const Rifs& g : alphabet)
        if (g.size() != 2)
          throw std::invalid_argument("pinned: every label must have exactly 2 maps");
      break;
    case ModelKind::markov_carpet: {
      if (alphabet.size() != 4)
        throw std::invalid_argument("markov_carpet: exactly four labels are required");
      const Rifs quad = carpet_quadrant_maps();
      for (int lab = 0; lab < 4; ++lab) {
        const Rifs& g = alphabet[static_cast<std::size_t>(lab)];
        if (g.size() != 3)
          throw std::invalid_argument("markov_carpet: every label keeps 3 maps");
        int expect = 0;
        for (const Similarity& f : g) {
          ++expect;
          if (expect - 1 == lab) ++expect;  // skip the discarded quadrant
          const Similarity& q = quad[static_cast<std::size_t>(expect - 1)];
          if (!near(f.ratio, q.ratio) || !near(f.rotation, q.rotation) ||
              f.reflect || !near(f.translation.x, q.translation.x) ||
              !near(f.translation.y, q.translation.y))
            throw std::invalid_argument(
                "markov_carpet: label " + std::to_string(lab + 1) +
                " must keep the three half-square maps other than quadrant " +
                std::to_string(lab + 1) + ", in quadrant order");
        }
      }
      for (const auto& row : transition) check_prob_vector(row, "markov_carpet row");
      break;
    }
  }
}

RatioLaw TreeModel::ratio_law() const {
  RatioLaw law;
  law.atoms.reserve(alphabet.size());
  for (std::size_t a = 0; a < alphabet.size(); ++a) {
    RatioLaw::Atom atom;
    atom.prob = probs[a];
    atom.ratios.reserve(alphabet[a].size());
    for (const Similarity& f : alphabet[a]) atom.ratios.push_back(f.ratio);
    law.atoms.push_back(std::move(atom));
  }
  return law;
}

double TreeModel::min_ratio() const {
  double m = 1.0;
  for (const Rifs& g : alphabet)
    for (const Similarity& f : g) m = std::min(m, f.ratio);
  return m;
}

double TreeModel::max_ratio() const {
  double m = 0.0;
  for (const Rifs& g : alphabet)
    for (const Similarity& f : g) m = std::max(m, f.ratio);
  return m;
}

TreeModel make_recursive(std::vector<Rifs> alphabet, std::vector<double> probs,
                         std::vector<std::string> names) {
  TreeModel m;
  m.kind = ModelKind::recursive;
  m.alphabet = std::move(alphabet);
  m.probs = std::move(probs);
  m.label_names = std::move(names);
  m.validate();
  return m;
}

TreeModel make_homogeneous(std::vector<Rifs> alphabet, std::vector<double> probs,
                           std::vector<std::string> names) {
  TreeModel m;
  m.kind = ModelKind::homogeneous;
  m.alphabet = std::move(alphabet);
  m.probs = std::move(probs);
  m.label_names = std::move(names);
  m.validate();
  return m;
}

TreeModel make_v_variable(std::vector<Rifs> alphabet, std::vector<double> probs,
                          int v_copies, std::vector<std::string> names) {
  TreeModel m;
  m.kind = ModelKind::v_variable;
  m.alphabet = std::move(alphabet);
  m.probs = std::move(probs);
  m.v_copies = v_copies;
  m.label_names = std::move(names);
  m.validate();
  return m;
}

TreeModel make_dependent_gasket(std::vector<Rifs> alphabet,
                                std::vector<double> probs,
                                std::vector<std::string> names) {
  TreeModel m;
  m.kind = ModelKind::dependent_gasket;
  m.alphabet = std::move(alphabet);
  m.probs = std::move(probs);
  m.label_names = std::move(names);
  m.validate();
  return m;
}

TreeModel make_pinned(std::vector<Rifs> alphabet, std::vector<double> probs,
                      std::vector<std::string> names) {
  TreeModel m;
  m.kind = ModelKind::pinned;
  m.alphabet = std::move(alphabet);
  m.probs = std::move(probs);
  m.label_names = std::move(names);
  m.validate();
  return m;
}

std::array<std::array<double, 4>, 5> carpet_default_transition() {
  const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
  return {uniform,
          uniform,
          {0.5, 0.25, 0.0, 0.25},
          uniform,
          {0.0, 0.25, 0.5, 0.25}};
}

TreeModel make_markov_carpet(
    const std::array<std::array<double, 4>, 5>& transition) {
  TreeModel m;
  m.kind = ModelKind::markov_carpet;
  const Rifs quad = carpet_quadrant_maps();
  m.alphabet.resize(4);
  m.label_names = {"G1", "G2", "G3", "G4"};
  for (int lab = 0; lab < 4; ++lab)
    for (int q = 0; q < 4; ++q)
      if (q != lab) m.alphabet[static_cast<std::size_t>(lab)].push_back(quad[static_cast<std::size_t>(q)]);
  m.probs.assign(4, 0.25);
  m.transition = transition;
  m.validate();
  return m;
}

int required_stop_depth(const TreeModel& model, double r, double R) {
  if (!(r > 0.0) || !(R > 0.0))
    throw std::invalid_argument("required_stop_depth: r and R must be positive");
  if (r >= R) return 0;
  return static_cast<int>(std::ceil(std::log(r / R) / std::log(model.max_ratio())));
}

namespace detail {

int draw_index(std::span<const double> probs, std::uint64_t key) {
  const double u = key_uniform(key);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

int carpet_root_label(const TreeModel& m, std::uint64_t seed) {
  const std::uint64_t key =
      mix_key(mix_key(mix_key(seed, kSaltCarpet), 0), 0);
  return draw_index(m.transition[0], key);
}

int root_label(const TreeModel& m, std::uint64_t seed) {
  const std::uint64_t pk = root_pkey(seed);
  switch (m.kind) {
    case ModelKind::recursive:
      return draw_index(m.probs, mix_key(pk, kSaltLabel));
    case ModelKind::homogeneous:
      return draw_index(m.probs, mix_key(mix_key(seed, kSaltLevel), 0));
    case ModelKind::v_variable: {
      const int v = key_index(mix_key(pk, kSaltType), m.v_copies);
      const std::uint64_t copy_key =
          mix_key(mix_key(mix_key(seed, kSaltCopy), 0), static_cast<std::uint64_t>(v));
      return draw_index(m.probs, copy_key);
    }
    case ModelKind::dependent_gasket:
      // Not kSaltFresh: the level-1 sibling groups key their shared fresh
      // draw off the root pkey with that salt, and reusing it here would
      // weld the root label to the level-1 coin (a 2% stop-mass bias).
      return draw_index(m.probs, mix_key(pk, kSaltLabel));
    case ModelKind::pinned:
      return draw_index(m.probs, mix_key(pk, kSaltLabel));
    case ModelKind::markov_carpet:
      return carpet_root_label(m, seed);
  }
  throw std::logic_error("root_label: unreachable");
}

namespace {

// pinned: labels at codes ending "21" repeat the label one level up at the
// code with the same prefix and final letter 1, applied transitively.
int pinned_resolve(const TreeModel& m, std::uint64_t seed, std::vector<int> path) {
  while (path.size() >= 2 && path[path.size() - 2] == 2 && path.back() == 1) {
    path.pop_back();
    path.back() = 1;
  }
  std::uint64_t k = root_pkey(seed);
  for (int letter : path) k = path_key(k, letter);
  return draw_index(m.probs, mix_key(k, kSaltLabel));
}

int gasket_exceptional_position(const TreeModel& m, std::uint64_t seed, int level) {
  std::size_t min_n = m.alphabet[0].size();
  for (const Rifs& g : m.alphabet) min_n = std::min(min_n, g.size());
  const std::uint64_t key =
      mix_key(mix_key(seed, kSaltExceptional), static_cast<std::uint64_t>(level));
  return 1 + key_index(key, static_cast<int>(min_n));
}

}  // namespace

int child_label(const TreeModel& m, std::uint64_t seed,
                std::span<const int> path, std::uint64_t pkey,
                std::uint64_t parent_pkey) {
  const int level = static_cast<int>(path.size());
  switch (m.kind) {
    case ModelKind::recursive:
      return draw_index(m.probs, mix_key(pkey, kSaltLabel));
    case ModelKind::homogeneous:
      return draw_index(m.probs, mix_key(mix_key(seed, kSaltLevel),
                                         static_cast<std::uint64_t>(level)));
    case ModelKind::v_variable: {
      const int v = key_index(mix_key(pkey, kSaltType), m.v_copies);
      const std::uint64_t copy_key =
          mix_key(mix_key(mix_key(seed, kSaltCopy), static_cast<std::uint64_t>(level)),
                  static_cast<std::uint64_t>(v));
      return draw_index(m.probs, copy_key);
    }
    case ModelKind::dependent_gasket: {
      const int exceptional = gasket_exceptional_position(m, seed, level);
      const int fresh = draw_index(m.probs, mix_key(parent_pkey, kSaltFresh));
      return (path.back() == exceptional) ? fresh : 1 - fresh;
    }
    case ModelKind::pinned:
      return pinned_resolve(m, seed, std::vector<int>(path.begin(), path.end()));
    case ModelKind::markov_carpet:
      throw std::logic_error("markov_carpet labels are level-sequential");
  }
  throw std::logic_error("child_label: unreachable");
}

std::vector<CarpetChild> carpet_next_level(
    const TreeModel& m, std::uint64_t seed, int child_level,
    std::span<const std::int32_t> parent_labels,
    std::span<const std::array<std::int32_t, 2>> parent_cells) {
  std::vector<CarpetChild> out;
  out.reserve(parent_labels.size() * 3);
  for (std::size_t p = 0; p < parent_labels.size(); ++p) {
    const std::int32_t pi = parent_cells[p][0];
    const std::int32_t pj = parent_cells[p][1];
    const int discarded = parent_labels[p] + 1;  // labels are 0-based indices
    std::int32_t letter = 0;
    for (int q = 1; q <= 4; ++q) {
      if (q == discarded) continue;
      ++letter;
      CarpetChild c;
      c.parent = static_cast<std::int32_t>(p);
      c.letter = letter;
      // quadrants: 1 top-left, 2 top-right, 3 bottom-left, 4 bottom-right
      c.i = 2 * pi - 1 + ((q == 2 || q == 4) ? 1 : 0);
      c.j = 2 * pj - 1 + ((q == 1 || q == 2) ? 1 : 0);
      out.push_back(c);
    }
  }
  // Traverse rows top to bottom, cells left to right; each cell draws from
  // the transition row of its retained left neighbor.
  std::sort(out.begin(), out.end(), [](const CarpetChild& a, const CarpetChild& b) {
    if (a.j != b.j) return a.j > b.j;
    return a.i < b.i;
  });
  const std::uint64_t level_key =
      mix_key(mix_key(seed, kSaltCarpet), static_cast<std::uint64_t>(child_level));
  for (std::size_t rank = 0; rank < out.size(); ++rank) {
    CarpetChild& c = out[rank];
    int row = 0;
    if (rank > 0) {
      const CarpetChild& prev = out[rank - 1];
      if (prev.j == c.j && prev.i == c.i - 1) row = prev.label + 1;
    }
    c.label = draw_index(m.transition[static_cast<std::size_t>(row)],
                         mix_key(level_key, static_cast<std::uint64_t>(rank)));
  }
  return out;
}

}  // namespace detail

namespace {

struct DfsEnumerator {
  const TreeModel& m;
  std::uint64_t seed;
  double r, R;
  const std::function<void(const StopCell&)>& fn;
  std::vector<int> path;

  void walk(int label, std::uint64_t pkey, const Similarity& map, double rprod,
            int level, int first_letter) {
    const Rifs& maps = m.alphabet[static_cast<std::size_t>(label)];
    for (int letter = 1; letter <= static_cast<int>(maps.size()); ++letter) {
      const Similarity& f = maps[static_cast<std::size_t>(letter - 1)];
      const double child_r = rprod * f.ratio;
      const Similarity child_map = compose2(map, f);
      const std::uint64_t child_pkey = path_key(pkey, letter);
      const int child_first = (level == 0) ? letter : first_letter;
      path.push_back(letter);
      if (R * child_r <= r) {
        fn(StopCell{child_map, child_r, child_first, level + 1});
      } else {
        const int child_lab = detail::child_label(m, seed, path, child_pkey, pkey);
        walk(child_lab, child_pkey, child_map, child_r, level + 1, child_first);
      }
      path.pop_back();
    }
  }
};

void carpet_stop_cells(const TreeModel& m, std::uint64_t seed, double r,
                       double R, const std::function<void(const StopCell&)>& fn) {
  // Constant ratio 1/2, so the whole stop sits at one level; stream levels
  // keeping only (coords, label, first letter) per cell.
  std::vector<std::int32_t> labels{detail::carpet_root_label(m, seed)};
  std::vector<std::array<std::int32_t, 2>> cells{{1, 1}};
  std::vector<std::int32_t> firsts{0};
  int level = 0;
  double rprod = 1.0;
  while (R * rprod * 0.5 > r) {
    auto next = detail::carpet_next_level(m, seed, level + 1, labels, cells);
    std::vector<std::int32_t> nl(next.size());
    std::vector<std::array<std::int32_t, 2>> nc(next.size());
    std::vector<std::int32_t> nf(next.size());
    for (std::size_t k = 0; k < next.size(); ++k) {
      nl[k] = next[k].label;
      nc[k] = {next[k].i, next[k].j};
      nf[k] = (level == 0) ? next[k].letter
                           : firsts[static_cast<std::size_t>(next[k].parent)];
    }
    labels = std::move(nl);
    cells = std::move(nc);
    firsts = std::move(nf);
    ++level;
    rprod *= 0.5;
  }
  // Emit the children of the current level: they are the stopped cells.
  auto next = detail::carpet_next_level(m, seed, level + 1, labels, cells);
  const double child_r = rprod * 0.5;
  const double cell = child_r;  // subsquare side length at the child level
  for (const auto& c : next) {
    StopCell sc;
    sc.map = Similarity{child_r, 0.0, false,
                        {(c.i - 1) * cell, (c.j - 1) * cell}};
    sc.rprod = child_r;
    sc.first_letter = (level == 0) ? c.letter
                                   : firsts[static_cast<std::size_t>(c.parent)];
    sc.level = level + 1;
    fn(sc);
  }
}

}  // namespace

void for_each_stop_cell(const TreeModel& model, std::uint64_t seed, double r,
                        double R,
                        const std::function<void(const StopCell&)>& fn) {
  if (!(r > 0.0) || !(R > 0.0))
    throw std::invalid_argument("for_each_stop_cell: r and R must be positive");
  if (r >= R) {
    fn(StopCell{Similarity{1.0, 0.0, false, {0.0, 0.0}}, 1.0, 0, 0});
    return;
  }
  if (model.kind == ModelKind::markov_carpet) {
    carpet_stop_cells(model, seed, r, R, fn);
    return;
  }
  DfsEnumerator e{model, seed, r, R, fn, {}};
  e.path.reserve(static_cast<std::size_t>(required_stop_depth(model, r, R)) + 4);
  e.walk(detail::root_label(model, seed), detail::root_pkey(seed),
         Similarity{1.0, 0.0, false, {0.0, 0.0}}, 1.0, 0, 0);
}

double stop_mass_sum(const TreeModel& model, std::uint64_t seed, double r,
                     double R, double s) {
  double sum = 0.0;
  for_each_stop_cell(model, seed, r, R, [&](const StopCell& c) {
    sum += std::pow(c.rprod, s);
  });
  return sum;
}

}  // namespace fracurv
