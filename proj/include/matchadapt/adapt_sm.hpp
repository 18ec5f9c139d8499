#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "matchadapt/adapt_sr.hpp"
#include "matchadapt/core.hpp"

namespace matchadapt {

/// Integer weight per acceptable pair; absent pairs weigh 0.
using PairWeights = std::map<Pair, std::int64_t>;

/// Classical marriage rotation: man cycle[i].first leaves cycle[i].second and
/// moves to cycle[i+1].second.
struct MarriageRotation {
  std::vector<std::pair<AgentId, AgentId>> cycle;
};

/// Rotation poset of a strict marriage instance, built from the man-optimal
/// matching by a maximal elimination chain. Rotation ids follow chain order,
/// which is a linear extension of the precedence relation.
struct MarriagePoset {
  Matching man_optimal;
  std::vector<MarriageRotation> rotations;
  std::vector<std::vector<bool>> precedes;  // transitive
};

/// Proposal algorithm with the given side proposing (0 = left, 1 = right).
Matching gale_shapley(const Instance& instance, int proposing_side = 0);

MarriagePoset build_marriage_poset(const Instance& instance);

/// Matching obtained from the man-optimal one by eliminating a closed set of
/// rotations (ids into poset.rotations). Throws NotClosedComplete when the set
/// is not closed.
Matching apply_rotations(const MarriagePoset& poset, std::span<const int> closed);

/// Per-pair weights encoding forced, forbidden and M1 membership so that the
/// minimum-weight stable matching answers the adaptation query.
/// n is the larger side size. Throws ForcedForbiddenOverlap.
PairWeights adaptation_weights(const Instance& instance, const Matching& m1,
                               std::span<const Pair> forced, std::span<const Pair> forbidden);

std::int64_t matching_weight(const PairWeights& weights, const Matching& matching);

struct WeightedMatching {
  Matching matching;
  std::int64_t weight = 0;
};

/// Minimum-weight stable matching via maximum-weight closure on the rotation
/// poset (one minimum cut). Strict marriage instances only.
WeightedMatching min_weight_stable_marriage(const Instance& instance, const PairWeights& weights);

/// Adaptation of a strict marriage instance through the weight reduction.
/// Throws ForcedForbiddenOverlap, NotStable.
std::optional<AdaptResult> adapt_sm(const Instance& instance, const AdaptQuery& query);

}  // namespace matchadapt
