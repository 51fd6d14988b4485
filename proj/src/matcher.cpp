#include "htmrec/matcher.hpp"

#include <string>

namespace htmrec {

std::size_t xor_score(const BinaryClassMap& map, const FeatureMap& fm) {
  return hamming_distance(map.bits, fm);
}

std::pair<int, ScoreVector> classify(const FeatureMap& fm,
                                     std::span<const BinaryClassMap> maps) {
  if (maps.empty()) throw EmptyModelError("classify: no class maps to score against");
  ScoreVector scores;
  scores.reserve(maps.size());
  int best_class = maps.front().class_id;
  std::size_t best_score = 0;
  bool first = true;
  for (const BinaryClassMap& map : maps) {
    const std::size_t score = xor_score(map, fm);
    scores.push_back({map.class_id, score});
    if (first || score < best_score ||
        (score == best_score && map.class_id < best_class)) {
      best_class = map.class_id;
      best_score = score;
      first = false;
    }
  }
  return {best_class, std::move(scores)};
}

std::size_t count_at_minimum(const ScoreVector& scores) {
  if (scores.empty()) return 0;
  std::size_t min_score = scores.front().score;
  for (const ScoreEntry& e : scores) min_score = std::min(min_score, e.score);
  std::size_t n = 0;
  for (const ScoreEntry& e : scores)
    if (e.score == min_score) ++n;
  return n;
}

}  // namespace htmrec
