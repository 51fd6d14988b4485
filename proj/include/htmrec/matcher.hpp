#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "htmrec/spatial_pooler.hpp"
#include "htmrec/temporal_memory.hpp"

namespace htmrec {

struct ScoreEntry {
  int class_id = 0;
  std::size_t score = 0;  // mismatching bit count

  bool operator==(const ScoreEntry&) const = default;
};

// One entry per trained class, in the order the class maps were given.
using ScoreVector = std::vector<ScoreEntry>;

// Number of positions where the class map and the feature map disagree.
std::size_t xor_score(const BinaryClassMap& map, const FeatureMap& fm);

// Scores fm against every class map and returns the minimum-score class
// together with the full vector. Ties break toward the lowest class id.
// Throws EmptyModelError when no class maps are given.
std::pair<int, ScoreVector> classify(const FeatureMap& fm,
                                     std::span<const BinaryClassMap> maps);

// Number of entries sharing the minimum score (>= 2 signals a tie).
std::size_t count_at_minimum(const ScoreVector& scores);

}  // namespace htmrec
