#pragma once

// Shared label-resolution internals used by both the streaming enumerators in
// models.cpp and the materialized trees in tree.cpp. Every draw is a pure
// function of (seed, path), so the two consumers realize identical trees.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fracurv/models.hpp"
#include "fracurv/rng.hpp"

namespace fracurv::detail {

inline constexpr std::uint64_t kSaltTree = 0x7c15ea4f3f1b67d1ull;
inline constexpr std::uint64_t kSaltLabel = 0x9d8f2a6b4ce31157ull;
inline constexpr std::uint64_t kSaltLevel = 0x3a5dc1f08e947b0bull;
inline constexpr std::uint64_t kSaltType = 0xb2e9c40d71f6a38dull;
inline constexpr std::uint64_t kSaltCopy = 0x51c7ba92e06d4f25ull;
inline constexpr std::uint64_t kSaltExceptional = 0xe48a03d5b97c162full;
inline constexpr std::uint64_t kSaltFresh = 0x06f3d98a25b4c7e1ull;
inline constexpr std::uint64_t kSaltCarpet = 0xc85b17f46a920d3bull;

inline std::uint64_t root_pkey(std::uint64_t seed) {
  return mix_key(seed, kSaltTree);
}

int draw_index(std::span<const double> probs, std::uint64_t key);

/// Label of the root node.
int root_label(const TreeModel& m, std::uint64_t seed);

/// Label of a non-root node for the depth-first kinds (all but the carpet).
/// `path` is the full code of the node, `pkey` its chained path key and
/// `parent_pkey` the key one level up.
int child_label(const TreeModel& m, std::uint64_t seed,
                std::span<const int> path, std::uint64_t pkey,
                std::uint64_t parent_pkey);

/// One prospective node of a carpet level. `parent` indexes the caller's
/// parent array; `letter` is the 1-based rank of the kept map.
struct CarpetChild {
  std::int32_t parent = 0;
  std::int32_t letter = 0;
  std::int32_t i = 0;  // column, 1-based, growing rightward
  std::int32_t j = 0;  // row, 1-based, growing upward
  std::int32_t label = -1;
};

/// Expands one carpet level and assigns labels by the left-neighbor chains:
/// rows are visited top to bottom and left to right, each cell drawing from
/// the transition row of its retained left neighbor (row 0 when the neighbor
/// square was discarded). Output order is the traversal order.
std::vector<CarpetChild> carpet_next_level(
    const TreeModel& m, std::uint64_t seed, int child_level,
    std::span<const std::int32_t> parent_labels,
    std::span<const std::array<std::int32_t, 2>> parent_cells);

int carpet_root_label(const TreeModel& m, std::uint64_t seed);

}  // namespace fracurv::detail
