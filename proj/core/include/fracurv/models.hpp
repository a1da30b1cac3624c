#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracurv/geometry.hpp"
#include "fracurv/spectrum.hpp"

namespace fracurv {

/// Address of a node: the 1-based child positions along the path from the
/// root. The empty code is the root.
using Code = std::vector<int>;

/// One realized label: a finite list of contracting similarities.
using Rifs = std::vector<Similarity>;

enum class ModelKind {
  recursive,        // labels i.i.d. across nodes
  homogeneous,      // one label per level, shared by the whole level
  v_variable,       // V i.i.d. label copies per level, nodes pick a copy
  dependent_gasket, // per level: one exceptional child position, shared
                    // level-wide; siblings split into one fresh draw and its
                    // complementary label
  pinned,           // constant N=2; the label at ...21 repeats the one at ...1
  markov_carpet     // labels along each horizontal row of retained half-size
                    // squares form a left-to-right Markov chain
};

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// Distribution over labeled code trees. The alphabet lists every label value
/// the model can realize; `probs` is the marginal label law (which the joint
/// constructions below are built to preserve).
struct TreeModel {
  ModelKind kind = ModelKind::recursive;
  std::vector<Rifs> alphabet;
  std::vector<std::string> label_names;
  std::vector<double> probs;
  int v_copies = 0;  // v_variable only
  // markov_carpet: transition rows indexed by the left neighbor's label
  // (row 0 = no retained left neighbor, rows 1..4 = neighbor label)
  std::array<std::array<double, 4>, 5> transition{};

  void validate() const;  // throws std::invalid_argument
  RatioLaw ratio_law() const;
  double min_ratio() const;
  double max_ratio() const;
  int label_count() const { return static_cast<int>(alphabet.size()); }
  /// Single-label models realize one fixed tree; Monte Carlo loops collapse
  /// to a single replicate for them.
  bool deterministic() const { return alphabet.size() == 1; }
};

TreeModel make_recursive(std::vector<Rifs> alphabet, std::vector<double> probs,
                         std::vector<std::string> names = {});
TreeModel make_homogeneous(std::vector<Rifs> alphabet, std::vector<double> probs,
                           std::vector<std::string> names = {});
TreeModel make_v_variable(std::vector<Rifs> alphabet, std::vector<double> probs,
                          int v_copies, std::vector<std::string> names = {});
TreeModel make_dependent_gasket(std::vector<Rifs> alphabet,
                                std::vector<double> probs,
                                std::vector<std::string> names = {});
TreeModel make_pinned(std::vector<Rifs> alphabet, std::vector<double> probs,
                      std::vector<std::string> names = {});
/// The four-subsquare carpet with a configurable left-neighbor transition
/// table. Label k keeps the three half-size images of the unit square other
/// than quadrant k (1 = top-left, 2 = top-right, 3 = bottom-left,
/// 4 = bottom-right).
TreeModel make_markov_carpet(
    const std::array<std::array<double, 4>, 5>& transition);

std::array<std::array<double, 4>, 5> carpet_default_transition();

/// Quadrant (1..4) of subsquare map j of a carpet label, derived from its
/// translation.
int carpet_quadrant(const Similarity& map);

/// One cell of a stopped cover: the composed map of a code whose ratio
/// product has just crossed the stop threshold.
struct StopCell {
  Similarity map;     // composed similarity of the code
  double rprod = 1.0; // product of ratios along the code
  int first_letter = 0;  // 1-based; 0 only for the root cell (r >= R)
  int level = 0;
};

/// Enumerates the stopped antichain Sigma(r) of one realized tree without
/// materializing the tree: every code with R * rprod <= r < R * rprod(parent).
/// For r >= R the single root cell is emitted. Generation is streamed
/// (depth-first where the model allows, level-buffered for the carpet), so
/// memory stays proportional to one level of the tree at most.
void for_each_stop_cell(const TreeModel& model, std::uint64_t seed, double r,
                        double R,
                        const std::function<void(const StopCell&)>& fn);

/// Sum over the stopped antichain of rprod^s, streamed like above.
double stop_mass_sum(const TreeModel& model, std::uint64_t seed, double r,
                     double R, double s);

/// Depth that surely contains Sigma(r): ceil(ln(r/R) / ln(max ratio)).
int required_stop_depth(const TreeModel& model, double r, double R);

}  // namespace fracurv
