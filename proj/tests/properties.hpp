#pragma once

// Property checks over a strict instance, each comparing the rotation
// machinery against exhaustive enumeration. Every check returns a list of
// human readable failures; an empty list means the property holds.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "matchadapt/adapt_sr.hpp"
#include "matchadapt/oracle.hpp"
#include "matchadapt/rotations.hpp"

namespace matchadapt::testing {

struct PosetContext {
  const Instance* instance = nullptr;
  std::vector<Matching> stable;  // oracle
  std::optional<RotationPoset> poset;
  std::vector<RotationSet> subsets;
};

using Failures = std::vector<std::string>;

inline PosetContext make_context(const Instance& instance, const OracleOptions& oracle = {}) {
  PosetContext ctx;
  ctx.instance = &instance;
  ctx.stable = enumerate_stable_matchings(instance, Notion::strict, oracle);
  if (!ctx.stable.empty()) {
    ctx.poset.emplace(build_rotation_poset(instance));
    ctx.subsets = enumerate_closed_complete_subsets(*ctx.poset, oracle);
  }
  return ctx;
}

// Closed complete subsets and stable matchings are in bijection.
inline Failures check_bijection(const PosetContext& ctx) {
  Failures out;
  if (ctx.stable.empty()) {
    try {
      build_rotation_poset(*ctx.instance);
      out.push_back("poset built for an instance without stable matchings");
    } catch (const NoStableMatching&) {
    }
    return out;
  }
  const RotationPoset& poset = *ctx.poset;
  if (ctx.subsets.size() != ctx.stable.size())
    out.push_back(std::to_string(ctx.subsets.size()) + " closed complete subsets vs " +
                  std::to_string(ctx.stable.size()) + " stable matchings");
  std::set<Matching> images;
  for (const RotationSet& z : ctx.subsets) {
    const Matching m = closed_set_to_matching(poset, z);
    images.insert(m);
    if (!std::binary_search(ctx.stable.begin(), ctx.stable.end(), m))
      out.push_back("closed complete subset maps to a matching the oracle does not list");
    if (matching_to_closed_set(poset, m) != z) out.push_back("matching_to_closed_set is not the inverse map");
  }
  if (images.size() != ctx.subsets.size()) out.push_back("map from subsets to matchings is not injective");
  for (const Matching& m : ctx.stable) {
    const RotationSet z = matching_to_closed_set(poset, m);
    if (!is_closed(poset, z) || !is_complete(poset, z)) out.push_back("inverse image is not closed and complete");
    if (closed_set_to_matching(poset, z) != m) out.push_back("round trip through a rotation set changed a matching");
  }

  std::set<Pair> union_pairs;
  std::set<Pair> intersection(ctx.stable.front().pairs().begin(), ctx.stable.front().pairs().end());
  for (const Matching& m : ctx.stable) {
    union_pairs.insert(m.pairs().begin(), m.pairs().end());
    std::set<Pair> kept;
    for (Pair p : intersection)
      if (m.contains(p)) kept.insert(p);
    intersection = std::move(kept);
  }
  if (std::vector<Pair>(union_pairs.begin(), union_pairs.end()) != poset.stable_pairs())
    out.push_back("stable pairs differ from the union of stable matchings");
  if (std::vector<Pair>(intersection.begin(), intersection.end()) != poset.fixed_pairs())
    out.push_back("fixed pairs differ from the intersection of stable matchings");

  for (const Rotation& r : poset.rotations()) {
    if (r.singular != !r.dual_id.has_value()) out.push_back("singular flag disagrees with the dual link");
    if (r.dual_id) {
      const Rotation& d = poset.rotation(*r.dual_id);
      if (d.dual_id != r.id) out.push_back("dual is not an involution");
      if (d.cycle != dual_cycle(r.cycle)) out.push_back("dual cycle does not follow the dual formula");
    }
    if (canonicalize(r.cycle) != r.cycle) out.push_back("rotation cycle is not canonical");
  }
  return out;
}

namespace detail {

inline RotationId id_of(const RotationPoset& poset, const Rotation& exposed) {
  auto id = poset.find(exposed.cycle);
  return id ? *id : -1;
}

// Eliminates z from P0 choosing the lowest or highest exposed member each
// time. Calls visit(table_before, rotation_id) for every elimination.
template <typename Visit>
StableTable walk(const RotationPoset& poset, const RotationSet& z, bool lowest, Visit visit) {
  StableTable table = poset.p0();
  for (;;) {
    std::vector<std::pair<RotationId, Rotation>> candidates;
    for (const Rotation& r : exposed_rotations(table)) {
      const RotationId id = id_of(poset, r);
      if (id >= 0 && z.contains(id)) candidates.emplace_back(id, r);
    }
    if (candidates.empty()) return table;
    const auto& [id, r] = lowest ? candidates.front() : candidates.back();
    visit(table, id);
    table = eliminate(table, poset.rotation(id));
  }
}

}  // namespace detail

// Exposure invariants on every table along the elimination of every closed
// complete subset, order independence, and the rho^{a,b} characterizations.
inline Failures check_invariants(const PosetContext& ctx) {
  Failures out;
  if (ctx.stable.empty()) return out;
  const Instance& instance = *ctx.instance;
  const RotationPoset& poset = *ctx.poset;

  for (const RotationSet& z : ctx.subsets) {
    const StableTable low = detail::walk(poset, z, true, [&](const StableTable& table, RotationId id) {
      const RotationCycle& cycle = poset.rotation(id).cycle;
      const std::size_t r = cycle.size();
      for (std::size_t s = 0; s < r; ++s) {
        const auto [ai, aj] = cycle[s];
        const AgentId next_j = cycle[(s + 1) % r].second;
        if (table.first(ai) != aj || table.second(ai) != next_j)
          out.push_back("exposed rotation does not rank a_j first and a_{j+1} second");
        if (table.last(aj) != ai) out.push_back("a_i is not last in the list of a_j");
      }
      const StableTable after = eliminate(table, poset.rotation(id));
      for (auto [ai, aj] : cycle)
        if (after.contains(ai, aj)) out.push_back("elimination kept a pair of the rotation");
      // Eliminating rho = rho^{a,b} makes b last for a.
      const Rotation& rho = poset.rotation(id);
      if (rho.dual_id) {
        for (auto [a, b] : poset.rotation(*rho.dual_id).cycle)
          if (after.last(a) != b) out.push_back("eliminating rho^{a,b} did not make b last for a");
      }
    });
    const StableTable high = detail::walk(poset, z, false, [](const StableTable&, RotationId) {});
    if (!(low == high)) out.push_back("two exposure orders reach different tables");
    if (!low.terminal() || low.matching() != closed_set_to_matching(poset, z))
      out.push_back("eliminating a closed complete subset does not reach its matching");
  }

  // rho^{a,b} in Z keeps a at b or better; with no better such rotation in Z,
  // a is matched to b exactly.
  for (const RotationSet& z : ctx.subsets) {
    const Matching m = closed_set_to_matching(poset, z);
    for (Pair p : poset.stable_pairs()) {
      for (auto [a, b] : {std::pair{p.first, p.second}, std::pair{p.second, p.first}}) {
        const auto rho = rho_of(poset, a, b);
        if (rho && z.contains(*rho) && m.partner(a) != b && !instance.prefers(a, m.partner(a), b))
          out.push_back("rho^{a,b} in Z but a ends up worse than b");

        const auto& partners = poset.stable_partners(a);
        if (partners.empty() || partners.back() == b) continue;  // needs a worse stable partner
        bool better_in = false;
        for (AgentId bs : partners) {
          if (bs == b) break;
          auto r = rho_of(poset, a, bs);
          if (r && z.contains(*r)) better_in = true;
        }
        const bool predicted = rho && z.contains(*rho) && !better_in;
        if (!rho) out.push_back("rho^{a,b} missing for a pair with a worse stable partner");
        if (predicted != m.contains(Pair::of(a, b))) out.push_back("membership characterization fails");
      }
    }
  }

  // A stable pair outside a stable matching N is preferred by exactly one side.
  for (Pair e : poset.stable_pairs()) {
    const AgentId a = e.first;
    const AgentId b = e.second;
    for (const Matching& n : ctx.stable) {
      if (n.contains(e)) continue;
      const AgentId na = n.partner(a);
      const AgentId nb = n.partner(b);
      const bool first = instance.prefers(a, na, b) && instance.prefers(b, a, nb);
      const bool second = instance.prefers(a, b, na) && instance.prefers(b, nb, a);
      if (first == second) out.push_back("not exactly one orientation holds");
    }
  }
  return out;
}

}  // namespace matchadapt::testing
