#include "matchadapt/adapt_sm.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "matchadapt/maxflow.hpp"

namespace matchadapt {

namespace {

void require_strict_marriage(const Instance& instance) {
  if (instance.kind() != Kind::marriage) throw std::invalid_argument("marriage instance required");
  if (!instance.is_strict()) throw InvalidNotion("strict preferences required");
}

}  // namespace

Matching gale_shapley(const Instance& instance, int proposing_side) {
  require_strict_marriage(instance);
  const int n = instance.size();
  std::vector<std::size_t> next_choice(n, 0);
  std::vector<AgentId> held(n, kNoAgent);
  std::deque<AgentId> free;
  for (AgentId a = 0; a < n; ++a)
    if (instance.side(a) == proposing_side) free.push_back(a);

  while (!free.empty()) {
    const AgentId a = free.front();
    free.pop_front();
    const auto& order = instance.order(a);
    while (next_choice[a] < order.size()) {
      const AgentId b = order[next_choice[a]++];
      const AgentId current = held[b];
      if (current == kNoAgent || instance.prefers(b, a, current)) {
        held[b] = a;
        if (current != kNoAgent) free.push_back(current);
        break;
      }
    }
  }
  std::vector<Pair> pairs;
  for (AgentId b = 0; b < n; ++b)
    if (held[b] != kNoAgent) pairs.push_back(Pair::of(held[b], b));
  return Matching(n, pairs);
}

MarriagePoset build_marriage_poset(const Instance& instance) {
  require_strict_marriage(instance);
  const int n = instance.size();
  MarriagePoset poset;
  poset.man_optimal = gale_shapley(instance, 0);

  std::vector<AgentId> partner(n);
  for (AgentId a = 0; a < n; ++a) partner[a] = poset.man_optimal.partner(a);

  // Walk a maximal chain from the man-optimal matching; each rotation of the
  // instance is eliminated exactly once along it.
  for (;;) {
    std::vector<AgentId> next(n, kNoAgent);
    std::vector<AgentId> target(n, kNoAgent);
    for (AgentId m = 0; m < n; ++m) {
      if (instance.side(m) != 0 || partner[m] == kNoAgent) continue;
      const auto& order = instance.order(m);
      auto it = std::find(order.begin(), order.end(), partner[m]);
      for (++it; it != order.end(); ++it) {
        const AgentId w = *it;
        // A single woman stays single in every stable matching, so m cannot
        // move past her.
        if (partner[w] == kNoAgent) break;
        if (instance.prefers(w, m, partner[w])) {
          target[m] = w;
          next[m] = partner[w];
          break;
        }
      }
    }
    std::optional<std::vector<AgentId>> cycle;
    std::vector<int> state(n, 0);
    for (AgentId start = 0; start < n && !cycle; ++start) {
      if (next[start] == kNoAgent || state[start] != 0) continue;
      std::vector<AgentId> walk;
      AgentId x = start;
      while (x != kNoAgent && state[x] == 0) {
        state[x] = 1;
        walk.push_back(x);
        x = next[x];
      }
      if (x != kNoAgent && state[x] == 1) cycle.emplace(std::find(walk.begin(), walk.end(), x), walk.end());
      for (AgentId y : walk) state[y] = 2;
    }
    if (!cycle) break;

    MarriageRotation rot;
    for (AgentId m : *cycle) rot.cycle.emplace_back(m, partner[m]);
    for (AgentId m : *cycle) {
      const AgentId w = target[m];
      partner[m] = w;
      partner[w] = m;
    }
    poset.rotations.push_back(std::move(rot));
  }

  const std::size_t count = poset.rotations.size();
  // moved_to[(m,w)]: the rotation that moves m to w.
  std::map<std::pair<AgentId, AgentId>, int> moved_to;
  struct Move {
    int rotation;
    AgentId from;
    AgentId to;
  };
  std::vector<std::vector<Move>> woman_moves(n);
  for (std::size_t r = 0; r < count; ++r) {
    const auto& cyc = poset.rotations[r].cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const auto [m, w] = cyc[i];
      const auto [m_next, w_next] = cyc[(i + 1) % cyc.size()];
      moved_to[{m, w_next}] = static_cast<int>(r);
      woman_moves[w_next].push_back({static_cast<int>(r), m_next, m});
    }
  }

  poset.precedes.assign(count, std::vector<bool>(count, false));
  for (std::size_t r = 0; r < count; ++r) {
    const auto& cyc = poset.rotations[r].cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const auto [m, w] = cyc[i];
      const AgentId w_next = cyc[(i + 1) % cyc.size()].second;
      // The rotation bringing m to w must come first.
      if (auto it = moved_to.find({m, w}); it != moved_to.end()) poset.precedes[it->second][r] = true;
      // Every woman strictly between w and w_next on m's list must already
      // hold someone she prefers to m.
      const int lo = instance.rank_unchecked(m, w);
      const int hi = instance.rank_unchecked(m, w_next);
      for (AgentId between : instance.order(m)) {
        const int rk = instance.rank_unchecked(m, between);
        if (rk <= lo || rk >= hi) continue;
        const int rank_m = instance.rank_unchecked(between, m);
        for (const Move& mv : woman_moves[between]) {
          if (instance.rank_unchecked(between, mv.from) > rank_m &&
              instance.rank_unchecked(between, mv.to) < rank_m)
            poset.precedes[mv.rotation][r] = true;
        }
      }
    }
  }
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t i = 0; i < count; ++i)
      if (poset.precedes[i][k])
        for (std::size_t j = 0; j < count; ++j)
          if (poset.precedes[k][j]) poset.precedes[i][j] = true;
  return poset;
}

Matching apply_rotations(const MarriagePoset& poset, std::span<const int> closed) {
  const std::size_t count = poset.rotations.size();
  std::vector<bool> in(count, false);
  for (int r : closed) {
    if (r < 0 || static_cast<std::size_t>(r) >= count) throw std::invalid_argument("unknown rotation id");
    in[r] = true;
  }
  for (std::size_t r = 0; r < count; ++r)
    if (in[r])
      for (std::size_t p = 0; p < count; ++p)
        if (poset.precedes[p][r] && !in[p]) throw NotClosedComplete("rotation set is not closed");

  const int n = poset.man_optimal.num_agents();
  std::vector<AgentId> partner(n);
  for (AgentId a = 0; a < n; ++a) partner[a] = poset.man_optimal.partner(a);
  for (std::size_t r = 0; r < count; ++r) {
    if (!in[r]) continue;
    const auto& cyc = poset.rotations[r].cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const AgentId m = cyc[i].first;
      const AgentId w = cyc[(i + 1) % cyc.size()].second;
      partner[m] = w;
      partner[w] = m;
    }
  }
  std::vector<Pair> pairs;
  for (AgentId a = 0; a < n; ++a)
    if (partner[a] != kNoAgent && a < partner[a]) pairs.push_back({a, partner[a]});
  return Matching(n, pairs);
}

PairWeights adaptation_weights(const Instance& instance, const Matching& m1,
                               std::span<const Pair> forced, std::span<const Pair> forbidden) {
  std::set<Pair> q(forced.begin(), forced.end());
  std::set<Pair> p(forbidden.begin(), forbidden.end());
  for (Pair e : q)
    if (p.count(e)) throw ForcedForbiddenOverlap();

  std::int64_t left = 0;
  for (AgentId a = 0; a < instance.size(); ++a) left += instance.side(a) == 0 ? 1 : 0;
  const std::int64_t n = std::max<std::int64_t>(left, instance.size() - left);

  PairWeights weights;
  for (Pair e : instance.pairs()) {
    std::int64_t w;
    if (p.count(e)) {
      w = 3 * n;
    } else if (q.count(e)) {
      w = m1.contains(e) ? -3 * n : 2 - 3 * n;
    } else {
      w = m1.contains(e) ? 0 : 2;
    }
    weights.emplace(e, w);
  }
  return weights;
}

std::int64_t matching_weight(const PairWeights& weights, const Matching& matching) {
  std::int64_t total = 0;
  for (Pair e : matching.pairs()) {
    auto it = weights.find(e);
    if (it != weights.end()) total += it->second;
  }
  return total;
}

WeightedMatching min_weight_stable_marriage(const Instance& instance, const PairWeights& weights) {
  const MarriagePoset poset = build_marriage_poset(instance);
  const std::size_t count = poset.rotations.size();
  auto weight_of = [&](AgentId a, AgentId b) -> std::int64_t {
    auto it = weights.find(Pair::of(a, b));
    return it == weights.end() ? 0 : it->second;
  };

  // Eliminating a rotation changes the matching weight by delta; selecting a
  // closed set with maximum total -delta is a maximum-weight closure.
  const int source = static_cast<int>(count);
  const int sink = source + 1;
  MaxFlow flow(static_cast<int>(count) + 2);
  for (std::size_t r = 0; r < count; ++r) {
    const auto& cyc = poset.rotations[r].cycle;
    std::int64_t delta = 0;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      delta += weight_of(cyc[i].first, cyc[(i + 1) % cyc.size()].second);
      delta -= weight_of(cyc[i].first, cyc[i].second);
    }
    const std::int64_t profit = -delta;
    if (profit > 0) flow.add_edge(source, static_cast<int>(r), profit);
    if (profit < 0) flow.add_edge(static_cast<int>(r), sink, -profit);
    for (std::size_t p = 0; p < count; ++p)
      if (poset.precedes[p][r]) flow.add_edge(static_cast<int>(r), static_cast<int>(p), MaxFlow::kInfinity);
  }
  flow.run(source, sink);
  const std::vector<bool> side = flow.source_side();
  std::vector<int> chosen;
  for (std::size_t r = 0; r < count; ++r)
    if (side[r]) chosen.push_back(static_cast<int>(r));

  WeightedMatching out;
  out.matching = apply_rotations(poset, chosen);
  out.weight = matching_weight(weights, out.matching);
  return out;
}

std::optional<AdaptResult> adapt_sm(const Instance& instance, const AdaptQuery& query) {
  require_strict_marriage(instance);
  if (query.m1.num_agents() != instance.size()) throw std::invalid_argument("m1 is over a different agent set");
  if (query.k < 0) throw std::invalid_argument("budget k must be non-negative");
  if (!is_stable(instance, query.m1, Notion::strict)) throw NotStable("m1 is not stable");

  std::set<Pair> forced(query.forced.begin(), query.forced.end());
  std::vector<Pair> forced_list(forced.begin(), forced.end());
  const PairWeights weights = adaptation_weights(instance, query.m1, forced_list, query.forbidden);
  for (Pair e : forced)
    if (!instance.acceptable(e.first, e.second)) return std::nullopt;

  std::int64_t left = 0;
  for (AgentId a = 0; a < instance.size(); ++a) left += instance.side(a) == 0 ? 1 : 0;
  const std::int64_t n = std::max<std::int64_t>(left, instance.size() - left);

  // Every stable matching has |M1| pairs, so no distance exceeds 2|M1|. Capping
  // k there keeps the budget below 3n, which the threshold test relies on.
  const std::int64_t budget = std::min<std::int64_t>(query.k, 2 * static_cast<std::int64_t>(query.m1.size()));
  WeightedMatching best = min_weight_stable_marriage(instance, weights);
  const std::int64_t threshold = -3 * n * static_cast<std::int64_t>(forced.size()) + budget;
  if (best.weight > threshold) return std::nullopt;
  AdaptResult result;
  result.delta = distance(query.m1, best.matching);
  result.matching = std::move(best.matching);
  return result;
}

}  // namespace matchadapt
