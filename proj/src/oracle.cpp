#include "matchadapt/oracle.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <string>

namespace matchadapt {

namespace {

class Enumerator {
 public:
  Enumerator(const Instance& instance, Notion notion)
      : instance_(instance),
        notion_(notion),
        partner_(instance.size(), kNoAgent),
        decided_(instance.size(), false) {}

  std::vector<Matching> run() {
    search(0);
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  int current_rank(AgentId a) const {
    return partner_[a] == kNoAgent ? INT_MAX : instance_.rank_unchecked(a, partner_[a]);
  }

  bool blocks(AgentId a, AgentId x) const {
    if (partner_[a] == x) return false;
    const int ra = instance_.rank_unchecked(a, x);
    const int rx = instance_.rank_unchecked(x, a);
    const int ca = current_rank(a);
    const int cx = current_rank(x);
    if (notion_ == Notion::strong) return (ra < ca && rx <= cx) || (ra <= ca && rx < cx);
    return ra < ca && rx < cx;
  }

  // Every pair between a and an already decided agent is now fully determined.
  bool consistent(AgentId a) const {
    for (AgentId x : instance_.order(a))
      if (decided_[x] && blocks(a, x)) return false;
    return true;
  }

  void search(AgentId from) {
    AgentId a = from;
    while (a < instance_.size() && decided_[a]) ++a;
    if (a == instance_.size()) {
      std::vector<Pair> pairs;
      for (AgentId x = 0; x < instance_.size(); ++x)
        if (partner_[x] > x) pairs.push_back({x, partner_[x]});
      found_.emplace_back(instance_.size(), pairs);
      return;
    }

    decided_[a] = true;
    if (consistent(a)) search(a + 1);

    for (AgentId b : instance_.order(a)) {
      if (decided_[b]) continue;
      partner_[a] = b;
      partner_[b] = a;
      decided_[b] = true;
      if (consistent(a) && consistent(b)) search(a + 1);
      decided_[b] = false;
      partner_[b] = kNoAgent;
      partner_[a] = kNoAgent;
    }
    decided_[a] = false;
  }

  const Instance& instance_;
  Notion notion_;
  std::vector<AgentId> partner_;
  std::vector<bool> decided_;
  std::vector<Matching> found_;
};

void check_cap(const Instance& instance, const OracleOptions& options) {
  if (instance.size() > options.cap)
    throw InstanceTooLarge("instance has " + std::to_string(instance.size()) + " agents, oracle cap is " +
                           std::to_string(options.cap));
}

template <typename Accept>
std::optional<AdaptResult> closest(const std::vector<Matching>& candidates, const Matching& m1, long long k,
                                   Accept accept) {
  std::optional<AdaptResult> best;
  for (const Matching& m : candidates) {
    if (!accept(m)) continue;
    const std::size_t d = distance(m1, m);
    if (!best || d < best->delta) {
      best.emplace();
      best->matching = m;
      best->delta = d;
    }
  }
  if (!best || k < 0 || best->delta > static_cast<std::size_t>(k)) return std::nullopt;
  return best;
}

}  // namespace

std::vector<Matching> enumerate_stable_matchings(const Instance& instance, Notion notion,
                                                 const OracleOptions& options) {
  check_cap(instance, options);
  if (notion == Notion::strict && !instance.is_strict())
    throw InvalidNotion("strict stability is undefined for preferences with ties");
  return Enumerator(instance, notion).run();
}

std::optional<AdaptResult> oracle_adapt(const Instance& instance, const AdaptQuery& query, Notion notion,
                                        const OracleOptions& options) {
  if (query.m1.num_agents() != instance.size()) throw std::invalid_argument("m1 is over a different agent set");
  const auto all = enumerate_stable_matchings(instance, notion, options);
  return closest(all, query.m1, query.k, [&](const Matching& m) {
    for (Pair e : query.forced)
      if (!m.contains(e)) return false;
    for (Pair e : query.forbidden)
      if (m.contains(e)) return false;
    return true;
  });
}

std::optional<AdaptResult> oracle_adapt_with_rank_windows(const Instance& instance, const Matching& m1,
                                                          std::span<const RankWindow> windows, long long k,
                                                          Notion notion, const OracleOptions& options) {
  if (m1.num_agents() != instance.size()) throw std::invalid_argument("m1 is over a different agent set");
  const auto all = enumerate_stable_matchings(instance, notion, options);
  return closest(all, m1, k, [&](const Matching& m) {
    for (const RankWindow& w : windows)
      if (!window_admits(instance, w, m.partner(w.agent))) return false;
    return true;
  });
}

std::vector<RotationSet> enumerate_closed_complete_subsets(const RotationPoset& poset,
                                                           const OracleOptions& options) {
  const auto duals = poset.dual_pairs();
  if (2 * duals.size() > options.rotation_cap)
    throw InstanceTooLarge(std::to_string(2 * duals.size()) + " nonsingular rotations exceed the cap of " +
                           std::to_string(options.rotation_cap));

  RotationSet base(poset.size());
  for (RotationId r : poset.singular()) base.insert(r);

  std::vector<RotationSet> out;
  const std::size_t choices = std::size_t{1} << duals.size();
  for (std::size_t mask = 0; mask < choices; ++mask) {
    RotationSet z = base;
    for (std::size_t i = 0; i < duals.size(); ++i)
      z.insert((mask >> i) & 1 ? duals[i].second : duals[i].first);
    if (is_closed(poset, z)) out.push_back(std::move(z));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace matchadapt
