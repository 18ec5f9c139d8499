#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "matchadapt/core.hpp"
#include "matchadapt/rotations.hpp"

namespace matchadapt {

/// Result of an adaptation. For the roommates algorithm, guess holds, for
/// every forbidden pair of P ∩ M1 (in ascending pair order), the endpoint that
/// strictly improves over its M1 partner in the returned matching.
struct AdaptResult {
  Matching matching;
  std::size_t delta = 0;
  std::vector<Pair> guessed_pairs;
  std::vector<AgentId> guess;
  /// Rotations forced into Z by the winning run (ids of the poset built on the
  /// dummy-completed instance).
  std::vector<RotationId> integrated;
};

/// Which endpoint of a forced pair drives the forced-pair step when both have
/// a strictly worse stable partner.
enum class EndpointRule { lower_id, higher_id };

struct AdaptOptions {
  PosetOptions poset;
  unsigned threads = 1;
  EndpointRule endpoint_rule = EndpointRule::lower_id;
};

struct AdaptStats {
  std::size_t guesses = 0;  // candidate evaluations, 2^|P ∩ M1|
  std::size_t forbidden_in_m1 = 0;
  std::size_t rotations = 0;
  std::size_t tables = 0;
};

/// Adds phi and its predecessors to z and removes the dual of phi together with
/// the dual's successors. z must be closed and complete (NotClosedComplete);
/// phi must be nonsingular (SingularRotation).
RotationSet integrate(const RotationPoset& poset, const RotationSet& z, RotationId phi);

/// Closest stable matching to query.m1 containing every forced pair and no
/// forbidden pair, or nullopt when none exists within query.k. Strict
/// preferences only; m1 must be stable (NotStable otherwise).
std::optional<AdaptResult> adapt(const Instance& instance, const AdaptQuery& query,
                                 const AdaptOptions& options = {}, AdaptStats* stats = nullptr);

/// Bounds on how agent is matched: upper ≻ M2(agent) ≻ lower. Either bound may
/// be absent.
struct RankWindow {
  AgentId agent = kNoAgent;
  std::optional<AgentId> upper;
  std::optional<AgentId> lower;
};

/// Closest stable matching to m1 respecting every window, or nullopt when the
/// windows cannot be met together within k. Throws WindowUnsatisfiable when a
/// single window contains none of the agent's stable partners.
std::optional<AdaptResult> adapt_with_rank_windows(const Instance& instance, const Matching& m1,
                                                   std::span<const RankWindow> windows, long long k,
                                                   const AdaptOptions& options = {});

/// True iff the window admits partner (kNoAgent = unmatched, ranked below every
/// acceptable agent).
bool window_admits(const Instance& instance, const RankWindow& window, AgentId partner);

}  // namespace matchadapt
