#include "matchadapt/rotations.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <unordered_map>

namespace matchadapt {

RotationCycle canonicalize(RotationCycle cycle) {
  if (cycle.empty()) return cycle;
  auto lead = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), lead, cycle.end());
  return cycle;
}

RotationCycle dual_cycle(const RotationCycle& cycle) {
  const std::size_t r = cycle.size();
  RotationCycle dual;
  dual.reserve(r);
  for (std::size_t s = 0; s < r; ++s)
    dual.emplace_back(cycle[s].second, cycle[(s + r - 1) % r].first);
  return canonicalize(std::move(dual));
}

// StableTable ---------------------------------------------------------------

StableTable::StableTable(const Instance& instance) {
  if (!instance.is_strict())
    throw InvalidNotion("stable tables require strict preferences");
  instance_ = std::make_shared<const Instance>(instance);
  const int n = instance.size();
  words_ = (static_cast<std::size_t>(n) + 63) / 64;
  bits_.assign(static_cast<std::size_t>(n) * words_, 0);
  auto active = std::make_shared<std::vector<bool>>(n, false);
  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b : instance.order(a)) bits_[index(a, b)] |= bit(b);
    (*active)[a] = !instance.order(a).empty();
  }
  active_ = std::move(active);
}

std::vector<AgentId> StableTable::list(AgentId a) const {
  std::vector<AgentId> out;
  for (AgentId b : instance_->order(a))
    if (contains(a, b)) out.push_back(b);
  return out;
}

std::size_t StableTable::length(AgentId a) const {
  std::size_t count = 0;
  for (std::size_t w = 0; w < words_; ++w)
    count += static_cast<std::size_t>(__builtin_popcountll(bits_[a * words_ + w]));
  return count;
}

AgentId StableTable::first(AgentId a) const {
  for (AgentId b : instance_->order(a))
    if (contains(a, b)) return b;
  return kNoAgent;
}

AgentId StableTable::second(AgentId a) const {
  bool seen = false;
  for (AgentId b : instance_->order(a)) {
    if (!contains(a, b)) continue;
    if (seen) return b;
    seen = true;
  }
  return kNoAgent;
}

AgentId StableTable::last(AgentId a) const {
  const auto& order = instance_->order(a);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (contains(a, *it)) return *it;
  return kNoAgent;
}

void StableTable::remove(AgentId a, AgentId b) {
  bits_[index(a, b)] &= ~bit(b);
  bits_[index(b, a)] &= ~bit(a);
}

bool StableTable::infeasible() const {
  for (AgentId a = 0; a < size(); ++a)
    if (active(a) && length(a) == 0) return true;
  return false;
}

bool StableTable::terminal() const {
  for (AgentId a = 0; a < size(); ++a)
    if (active(a) && length(a) != 1) return false;
  return true;
}

Matching StableTable::matching() const {
  std::vector<Pair> pairs;
  for (AgentId a = 0; a < size(); ++a) {
    if (!active(a)) continue;
    AgentId b = first(a);
    if (b > a) pairs.push_back({a, b});
  }
  return Matching(size(), pairs);
}

StableTable phase1(const Instance& instance) {
  StableTable table(instance);
  const int n = instance.size();
  std::vector<AgentId> holds(n, kNoAgent);
  std::deque<AgentId> free;
  for (AgentId a = 0; a < n; ++a)
    if (!instance.order(a).empty()) free.push_back(a);

  while (!free.empty()) {
    const AgentId a = free.front();
    free.pop_front();
    const AgentId b = table.first(a);
    if (b == kNoAgent) continue;
    // b's list still contains a, so b prefers a to whoever it holds.
    const AgentId previous = holds[b];
    holds[b] = a;
    const auto& order = instance.order(b);
    auto pos = std::find(order.begin(), order.end(), a);
    for (auto it = std::next(pos); it != order.end(); ++it)
      if (table.contains(b, *it)) table.remove(b, *it);
    if (previous != kNoAgent && previous != a) free.push_back(previous);
  }

  auto active = std::make_shared<std::vector<bool>>(n, false);
  int remaining = 0;
  for (AgentId a = 0; a < n; ++a) {
    (*active)[a] = table.length(a) > 0;
    remaining += (*active)[a] ? 1 : 0;
  }
  table.active_ = std::move(active);
  if (remaining % 2 != 0) throw NoStableMatching();
  return table;
}

std::vector<Rotation> exposed_rotations(const StableTable& table) {
  const int n = table.size();
  // next(x) = last(second(x)) for every agent with at least two entries.
  std::vector<AgentId> next(n, kNoAgent);
  for (AgentId x = 0; x < n; ++x) {
    AgentId s = table.second(x);
    if (s != kNoAgent) next[x] = table.last(s);
  }

  std::vector<Rotation> out;
  std::vector<int> state(n, 0);  // 0 unseen, 1 on current walk, 2 done
  for (AgentId start = 0; start < n; ++start) {
    if (next[start] == kNoAgent || state[start] != 0) continue;
    std::vector<AgentId> walk;
    AgentId x = start;
    while (x != kNoAgent && next[x] != kNoAgent && state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = next[x];
    }
    if (x != kNoAgent && state[x] == 1) {
      Rotation rot;
      auto it = std::find(walk.begin(), walk.end(), x);
      for (; it != walk.end(); ++it) rot.cycle.emplace_back(*it, table.first(*it));
      rot.cycle = canonicalize(std::move(rot.cycle));
      out.push_back(std::move(rot));
    }
    for (AgentId y : walk) state[y] = 2;
  }
  std::sort(out.begin(), out.end(), [](const Rotation& a, const Rotation& b) { return a.cycle < b.cycle; });
  return out;
}

StableTable eliminate(const StableTable& table, const Rotation& rotation) {
  const RotationCycle& cycle = rotation.cycle;
  const std::size_t r = cycle.size();
  if (r == 0) throw RotationNotExposed("empty rotation");
  for (std::size_t s = 0; s < r; ++s) {
    const auto [i, j] = cycle[s];
    if (i < 0 || i >= table.size() || table.first(i) != j ||
        table.second(i) != cycle[(s + 1) % r].second)
      throw RotationNotExposed("rotation is not exposed in the table");
  }

  const Instance& inst = table.instance();
  std::vector<Pair> deletions;
  for (std::size_t s = 0; s < r; ++s) {
    const AgentId j = cycle[s].second;
    const AgentId keep = cycle[(s + r - 1) % r].first;
    const int threshold = inst.rank_unchecked(j, keep);
    for (AgentId c : inst.order(j))
      if (inst.rank_unchecked(j, c) > threshold && table.contains(j, c)) deletions.push_back({j, c});
  }
  StableTable out = table;
  for (Pair d : deletions) out.remove(d.first, d.second);
  if (rotation.id >= 0) out.eliminated_.push_back(rotation.id);
  return out;
}

// RotationSet ---------------------------------------------------------------

std::size_t RotationSet::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<RotationId> RotationSet::ids() const {
  std::vector<RotationId> out;
  for (std::size_t r = 0; r < bits_.size(); ++r)
    if (bits_[r]) out.push_back(static_cast<RotationId>(r));
  return out;
}

// Poset construction --------------------------------------------------------

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : key) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Sorted rotation-id list; intersection keeps the "eliminated on every path" set.
using IdList = std::vector<int>;

IdList intersect(const IdList& x, const IdList& y) {
  IdList out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

IdList with(IdList x, int id) {
  auto pos = std::lower_bound(x.begin(), x.end(), id);
  if (pos == x.end() || *pos != id) x.insert(pos, id);
  return x;
}

struct Node {
  StableTable table;
  IdList must;
  std::vector<std::pair<int, int>> children;  // (temporary rotation id, node)
  bool expanded = false;
};

}  // namespace

RotationPoset build_rotation_poset(const Instance& instance, const PosetOptions& options) {
  StableTable p0 = phase1(instance);
  const int n = instance.size();

  std::vector<Node> nodes;
  std::unordered_map<std::vector<std::uint64_t>, int, KeyHash> index;
  std::map<RotationCycle, int> discovered;
  std::vector<RotationCycle> cycles;
  std::vector<std::optional<IdList>> before;  // per temporary id
  std::set<Matching> terminal_matchings;

  nodes.push_back({p0, {}, {}, false});
  index.emplace(p0.bits(), 0);
  std::vector<int> work{0};

  while (!work.empty()) {
    const int id = work.back();
    work.pop_back();

    if (!nodes[id].expanded) {
      nodes[id].expanded = true;
      const StableTable& table = nodes[id].table;
      if (table.infeasible()) throw NoStableMatching();
      if (table.terminal()) {
        terminal_matchings.insert(table.matching());
        continue;
      }
      std::vector<Rotation> exposed = exposed_rotations(table);
      if (exposed.empty()) throw NoStableMatching();
      for (Rotation& rot : exposed) {
        auto [it, inserted] = discovered.emplace(rot.cycle, static_cast<int>(cycles.size()));
        if (inserted) {
          cycles.push_back(rot.cycle);
          before.emplace_back();
        }
        StableTable child = eliminate(nodes[id].table, rot);
        auto found = index.find(child.bits());
        int child_id;
        if (found == index.end()) {
          if (nodes.size() >= options.table_cap)
            throw ResourceExhausted("rotation exploration exceeded " +
                                    std::to_string(options.table_cap) + " stable tables");
          child_id = static_cast<int>(nodes.size());
          index.emplace(child.bits(), child_id);
          nodes.push_back({std::move(child), {}, {}, false});
          nodes[child_id].must = with(nodes[id].must, it->second);
          work.push_back(child_id);
        } else {
          child_id = found->second;
        }
        nodes[id].children.emplace_back(it->second, child_id);
      }
    }

    // Record exposures and push the eliminated-on-every-path set downwards.
    const IdList must = nodes[id].must;
    for (auto [rot, child] : nodes[id].children) {
      auto& b = before[rot];
      b = b ? intersect(*b, must) : must;
      IdList candidate = with(must, rot);
      Node& c = nodes[child];
      if (!c.expanded) {
        // Still queued for its first expansion; only shrink its set.
        c.must = intersect(c.must, candidate);
        continue;
      }
      IdList shrunk = intersect(c.must, candidate);
      if (shrunk != c.must) {
        c.must = std::move(shrunk);
        work.push_back(child);
      }
    }
  }

  RotationPoset poset;
  poset.p0_ = std::make_shared<const StableTable>(std::move(p0));
  poset.tables_explored_ = nodes.size();

  // Renumber rotations by canonical cycle so ids do not depend on search order.
  const std::size_t count = cycles.size();
  std::vector<int> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return cycles[x] < cycles[y]; });
  std::vector<int> rename(count);
  for (std::size_t k = 0; k < count; ++k) rename[order[k]] = static_cast<int>(k);

  poset.rotations_.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    poset.rotations_[k].id = static_cast<RotationId>(k);
    poset.rotations_[k].cycle = cycles[order[k]];
    poset.by_cycle_.emplace(poset.rotations_[k].cycle, static_cast<RotationId>(k));
  }
  for (Rotation& rot : poset.rotations_) {
    auto dual = poset.by_cycle_.find(dual_cycle(rot.cycle));
    if (dual != poset.by_cycle_.end()) {
      rot.dual_id = dual->second;
    } else {
      rot.singular = true;
    }
    for (const RotationPair& p : rot.cycle) {
      auto [it, inserted] = poset.pair_index_.emplace(p, rot.id);
      if (!inserted)
        throw std::logic_error("ordered pair contained in two rotations");
    }
  }

  poset.precedes_.assign(count, std::vector<bool>(count, false));
  poset.predecessors_.assign(count, {});
  poset.successors_.assign(count, {});
  for (std::size_t t = 0; t < count; ++t) {
    const int rho = rename[t];
    for (int phi_tmp : *before[t]) {
      const int phi = rename[phi_tmp];
      poset.precedes_[phi][rho] = true;
    }
  }
  for (std::size_t x = 0; x < count; ++x) {
    if (poset.precedes_[x][x]) throw std::logic_error("rotation precedes itself");
    for (std::size_t y = 0; y < count; ++y) {
      if (poset.precedes_[x][y]) {
        poset.predecessors_[y].push_back(static_cast<RotationId>(x));
        poset.successors_[x].push_back(static_cast<RotationId>(y));
      }
    }
  }

  // Every terminal table is a stable matching; exploration reaches all of them.
  std::set<Pair> stable;
  std::optional<std::set<Pair>> fixed;
  for (const Matching& m : terminal_matchings) {
    stable.insert(m.pairs().begin(), m.pairs().end());
    std::set<Pair> here(m.pairs().begin(), m.pairs().end());
    if (!fixed) {
      fixed = here;
    } else {
      std::set<Pair> kept;
      std::set_intersection(fixed->begin(), fixed->end(), here.begin(), here.end(),
                            std::inserter(kept, kept.begin()));
      fixed = std::move(kept);
    }
  }
  poset.stable_pairs_.assign(stable.begin(), stable.end());
  if (fixed) poset.fixed_pairs_.assign(fixed->begin(), fixed->end());
  poset.stable_partners_.assign(n, {});
  for (Pair p : poset.stable_pairs_) {
    poset.stable_partners_[p.first].push_back(p.second);
    poset.stable_partners_[p.second].push_back(p.first);
  }
  for (AgentId a = 0; a < n; ++a) {
    auto& partners = poset.stable_partners_[a];
    std::sort(partners.begin(), partners.end(), [&](AgentId x, AgentId y) {
      return instance.rank_unchecked(a, x) < instance.rank_unchecked(a, y);
    });
  }
  return poset;
}

std::optional<RotationId> RotationPoset::find(const RotationCycle& cycle) const {
  auto it = by_cycle_.find(canonicalize(cycle));
  if (it == by_cycle_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<RotationId, RotationId>> RotationPoset::precedence_edges() const {
  std::vector<std::pair<RotationId, RotationId>> out;
  for (RotationId x = 0; x < static_cast<RotationId>(size()); ++x)
    for (RotationId y : successors_[x]) out.emplace_back(x, y);
  return out;
}

std::vector<RotationId> RotationPoset::singular() const {
  std::vector<RotationId> out;
  for (const Rotation& r : rotations_)
    if (r.singular) out.push_back(r.id);
  return out;
}

std::vector<std::pair<RotationId, RotationId>> RotationPoset::dual_pairs() const {
  std::vector<std::pair<RotationId, RotationId>> out;
  for (const Rotation& r : rotations_)
    if (r.dual_id && r.id < *r.dual_id) out.emplace_back(r.id, *r.dual_id);
  return out;
}

std::optional<RotationId> RotationPoset::containing(AgentId a, AgentId b) const {
  auto it = pair_index_.find({a, b});
  if (it == pair_index_.end()) return std::nullopt;
  return it->second;
}

bool RotationPoset::is_stable_pair(Pair p) const {
  return std::binary_search(stable_pairs_.begin(), stable_pairs_.end(), p);
}

bool RotationPoset::is_fixed_pair(Pair p) const {
  return std::binary_search(fixed_pairs_.begin(), fixed_pairs_.end(), p);
}

bool is_closed(const RotationPoset& poset, const RotationSet& z) {
  for (RotationId r : z.ids())
    for (RotationId p : poset.predecessors(r))
      if (!z.contains(p)) return false;
  return true;
}

bool is_complete(const RotationPoset& poset, const RotationSet& z) {
  for (const Rotation& r : poset.rotations()) {
    if (r.singular) {
      if (!z.contains(r.id)) return false;
    } else if (z.contains(r.id) == z.contains(*r.dual_id)) {
      return false;
    }
  }
  return true;
}

namespace {

void check_closed_complete(const RotationPoset& poset, const RotationSet& z) {
  if (z.universe() != poset.size())
    throw NotClosedComplete("rotation set belongs to a different poset");
  if (!is_closed(poset, z)) throw NotClosedComplete("rotation set is not closed");
  if (!is_complete(poset, z)) throw NotClosedComplete("rotation set is not complete");
}

StableTable run_eliminations(const RotationPoset& poset, const RotationSet& z,
                             std::vector<RotationId>* order) {
  check_closed_complete(poset, z);
  StableTable table = poset.p0();
  RotationSet done(poset.size());
  while (!table.terminal()) {
    bool progressed = false;
    for (Rotation rot : exposed_rotations(table)) {
      auto id = poset.find(rot.cycle);
      if (!id || !z.contains(*id) || done.contains(*id)) continue;
      rot.id = *id;
      table = eliminate(table, rot);
      done.insert(*id);
      if (order) order->push_back(*id);
      progressed = true;
      break;
    }
    if (!progressed) throw NotClosedComplete("no rotation of the set is exposed");
  }
  if (done != z) throw NotClosedComplete("terminal table reached before the set was exhausted");
  return table;
}

}  // namespace

std::vector<RotationId> elimination_order(const RotationPoset& poset, const RotationSet& z) {
  std::vector<RotationId> order;
  run_eliminations(poset, z, &order);
  return order;
}

Matching closed_set_to_matching(const RotationPoset& poset, const RotationSet& z) {
  return run_eliminations(poset, z, nullptr).matching();
}

RotationSet matching_to_closed_set(const RotationPoset& poset, const Matching& m) {
  const Instance& inst = poset.instance();
  if (m.num_agents() != inst.size()) throw NotStable("matching is over a different agent set");
  for (Pair p : m.pairs())
    if (!inst.acceptable(p.first, p.second)) throw NotStable("matching has an unacceptable pair");
  if (!is_stable(inst, m, Notion::strict)) throw NotStable("matching is not stable");

  StableTable table = poset.p0();
  auto keeps = [&](const StableTable& t) {
    for (Pair p : m.pairs())
      if (!t.contains(p.first, p.second)) return false;
    for (AgentId a = 0; a < inst.size(); ++a)
      if (t.active(a) != m.matched(a)) return false;
    return true;
  };
  if (!keeps(table)) throw NotStable("matching is not contained in the phase-1 table");

  RotationSet z(poset.size());
  while (!table.terminal()) {
    bool progressed = false;
    for (Rotation rot : exposed_rotations(table)) {
      StableTable next = eliminate(table, rot);
      if (!keeps(next)) continue;
      auto id = poset.find(rot.cycle);
      if (!id) throw std::logic_error("exposed rotation missing from poset");
      z.insert(*id);
      table = std::move(next);
      progressed = true;
      break;
    }
    if (!progressed) throw NotStable("no elimination preserves the matching");
  }
  if (table.matching() != m) throw NotStable("matching is not reachable by eliminations");
  return z;
}

const std::vector<Pair>& stable_pairs(const RotationPoset& poset) { return poset.stable_pairs(); }
const std::vector<Pair>& fixed_pairs(const RotationPoset& poset) { return poset.fixed_pairs(); }

std::optional<RotationId> rho_of(const RotationPoset& poset, AgentId a, AgentId b) {
  auto r = poset.containing(a, b);
  if (!r) return std::nullopt;
  return poset.rotation(*r).dual_id;
}

}  // namespace matchadapt
