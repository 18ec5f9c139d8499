#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matchadapt/core.hpp"
#include "matchadapt/gen.hpp"
#include "matchadapt/io.hpp"
#include "matchadapt/oracle.hpp"

namespace matchadapt::testing {

inline Instance example1() {
  return parse_instance(R"(kind sm
left m1 m2 m3
right w1 w2 w3
m1 : w1 w2 w3
m2 : w2 w3 w1
m3 : w3 w1 w2
w1 : m2 m3 m1
w2 : m3 m1 m2
w3 : m1 m2 m3
)");
}

using NamedPairs = std::vector<std::pair<std::string, std::string>>;

inline std::vector<Pair> pairs_of(const Instance& instance, const NamedPairs& named) {
  std::vector<Pair> out;
  for (const auto& [a, b] : named) out.push_back(pair_by_name(instance, a, b));
  return out;
}

inline Matching matching_of(const Instance& instance, const NamedPairs& named) {
  return Matching::on(instance, pairs_of(instance, named));
}

/// Example 1's three stable matchings.
inline Matching example1_identity(const Instance& i) { return matching_of(i, {{"m1", "w1"}, {"m2", "w2"}, {"m3", "w3"}}); }
inline Matching example1_shift(const Instance& i) { return matching_of(i, {{"m1", "w2"}, {"m2", "w3"}, {"m3", "w1"}}); }
inline Matching example1_back(const Instance& i) { return matching_of(i, {{"m1", "w3"}, {"m2", "w1"}, {"m3", "w2"}}); }

/// Random strict instance that has at least one stable matching, found by
/// advancing the seed. The oracle decides existence.
inline Instance solvable_random(int n, Kind kind, double density, std::uint64_t& seed) {
  for (;; ++seed) {
    Instance instance = random_instance(n, kind, 0.0, density, seed);
    if (!enumerate_stable_matchings(instance, Notion::strict).empty()) return instance;
  }
}

/// Size of a maximum independent set, by brute force over vertex subsets.
inline int max_independent_set(const Graph& g) {
  int best = 0;
  for (unsigned mask = 0; mask < (1u << g.vertices); ++mask) {
    bool independent = true;
    for (auto [u, v] : g.edges)
      if ((mask >> u & 1) && (mask >> v & 1)) independent = false;
    if (independent) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

struct LocalSearchBase {
  Instance instance;
  Matching n;  // weakly stable, one man and one woman unmatched
};

/// Tiny marriage instance with ties among the men's lists only, together with
/// the first weakly stable matching that leaves exactly one man and one woman
/// single. nullopt when the drawn instance has no such matching.
inline std::optional<LocalSearchBase> local_search_base(int per_side, double density, std::uint64_t seed) {
  RawInstance raw = random_instance(2 * per_side, Kind::marriage, 0.0, density, seed).to_raw();
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t a = 0; a < raw.prefs.size(); ++a) {
    if (raw.side[a] != 0) continue;
    PreferenceList merged;
    for (auto& group : raw.prefs[a]) {
      if (!merged.empty() && rng.chance(0.4))
        merged.back().insert(merged.back().end(), group.begin(), group.end());
      else
        merged.push_back(group);
    }
    raw.prefs[a] = std::move(merged);
  }
  Instance instance = validate_instance(raw);
  for (const Matching& m : enumerate_stable_matchings(instance, Notion::weak)) {
    int single[2] = {0, 0};
    for (AgentId a = 0; a < instance.size(); ++a)
      if (!m.matched(a)) ++single[instance.side(a)];
    if (single[0] == 1 && single[1] == 1) return LocalSearchBase{instance, m};
  }
  return std::nullopt;
}

/// Whether some weakly stable matching of the base matches everyone and lies
/// within distance ell of n.
inline bool has_close_complete_matching(const LocalSearchBase& base, int ell) {
  for (const Matching& m : enumerate_stable_matchings(base.instance, Notion::weak))
    if (2 * static_cast<int>(m.size()) == base.instance.size() && distance(m, base.n) <= static_cast<std::size_t>(ell))
      return true;
  return false;
}

}  // namespace matchadapt::testing
