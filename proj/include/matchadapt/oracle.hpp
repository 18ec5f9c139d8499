#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "matchadapt/adapt_sr.hpp"
#include "matchadapt/core.hpp"
#include "matchadapt/rotations.hpp"

namespace matchadapt {

/// Exhaustive reference solvers. Exact, and therefore size-capped.
struct OracleOptions {
  /// Largest instance (agent count) the enumerators accept.
  int cap = 12;
  /// Largest number of nonsingular rotations for subset enumeration.
  std::size_t rotation_cap = 24;
};

/// Every matching over acceptable pairs with no blocking pair under notion,
/// ascending. Throws InstanceTooLarge, InvalidNotion (strict on ties).
std::vector<Matching> enumerate_stable_matchings(const Instance& instance, Notion notion,
                                                 const OracleOptions& options = {});

/// Minimum-distance stable matching containing Q and avoiding P, or nullopt
/// when the minimum exceeds k. Ties between optimal matchings go to the
/// smallest in matching order.
std::optional<AdaptResult> oracle_adapt(const Instance& instance, const AdaptQuery& query, Notion notion,
                                        const OracleOptions& options = {});

/// Enumeration counterpart of adapt_with_rank_windows.
std::optional<AdaptResult> oracle_adapt_with_rank_windows(const Instance& instance, const Matching& m1,
                                                          std::span<const RankWindow> windows, long long k,
                                                          Notion notion, const OracleOptions& options = {});

/// All closed complete rotation sets, ascending. Throws InstanceTooLarge.
std::vector<RotationSet> enumerate_closed_complete_subsets(const RotationPoset& poset,
                                                           const OracleOptions& options = {});

}  // namespace matchadapt
