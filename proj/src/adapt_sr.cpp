#include "matchadapt/adapt_sr.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>

namespace matchadapt {

namespace {

/// Z together with the rotations the run has committed to. Integrating a
/// rotation whose removal set hits a committed rotation is a clash.
struct WorkingSet {
  RotationSet z;
  RotationSet required;

  bool integrate(const RotationPoset& poset, RotationId phi) {
    const Rotation& rot = poset.rotation(phi);
    if (rot.singular) return false;
    const RotationId dual = *rot.dual_id;
    if (required.contains(dual)) return false;
    for (RotationId s : poset.successors(dual))
      if (required.contains(s)) return false;
    z.insert(phi);
    required.insert(phi);
    for (RotationId p : poset.predecessors(phi)) {
      z.insert(p);
      required.insert(p);
    }
    z.erase(dual);
    for (RotationId s : poset.successors(dual))
      if (!poset.rotation(s).singular) z.erase(s);
    return true;
  }
};

/// Least-preferred stable partner of a that a strictly prefers to worse.
std::optional<AgentId> least_better_partner(const RotationPoset& poset, AgentId a, AgentId worse) {
  const Instance& inst = poset.instance();
  std::optional<AgentId> best;
  for (AgentId s : poset.stable_partners(a)) {
    if (!inst.prefers(a, s, worse)) break;
    best = s;
  }
  return best;
}

bool has_worse_stable_partner(const RotationPoset& poset, AgentId a, AgentId b) {
  const auto& partners = poset.stable_partners(a);
  return !partners.empty() && partners.back() != b && poset.instance().prefers(a, b, partners.back());
}

void check_query_agents(const Instance& instance, const AdaptQuery& query) {
  if (query.m1.num_agents() != instance.size())
    throw std::invalid_argument("m1 is over a different agent set");
  for (const auto* list : {&query.forced, &query.forbidden})
    for (Pair p : *list)
      if (p.first < 0 || p.second >= instance.size() || p.first == p.second)
        throw std::invalid_argument("query pair references an unknown agent");
  if (query.k < 0) throw std::invalid_argument("budget k must be non-negative");
}

struct Candidate {
  Matching matching;
  std::size_t delta;
  std::vector<AgentId> guess;
  std::vector<RotationId> integrated;

  bool better_than(const Candidate& other) const {
    if (delta != other.delta) return delta < other.delta;
    return matching < other.matching;
  }
};

}  // namespace

RotationSet integrate(const RotationPoset& poset, const RotationSet& z, RotationId phi) {
  if (z.universe() != poset.size() || !is_closed(poset, z) || !is_complete(poset, z))
    throw NotClosedComplete("integrate needs a closed and complete rotation set");
  if (phi < 0 || phi >= static_cast<RotationId>(poset.size()))
    throw std::invalid_argument("unknown rotation id");
  if (poset.rotation(phi).singular) throw SingularRotation("cannot integrate a singular rotation");
  WorkingSet ws{z, RotationSet(poset.size())};
  ws.integrate(poset, phi);
  return ws.z;
}

std::optional<AdaptResult> adapt(const Instance& instance, const AdaptQuery& query,
                                 const AdaptOptions& options, AdaptStats* stats) {
  if (!instance.is_strict()) throw InvalidNotion("adapt requires strict preferences");
  check_query_agents(instance, query);
  if (!is_stable(instance, query.m1, Notion::strict)) throw NotStable("m1 is not stable");

  // Trivial rejections that need no poset.
  std::set<Pair> forced(query.forced.begin(), query.forced.end());
  std::set<Pair> forbidden_all(query.forbidden.begin(), query.forbidden.end());
  for (Pair p : forced)
    if (forbidden_all.count(p)) return std::nullopt;
  {
    std::vector<int> used(instance.size(), 0);
    for (Pair p : forced) {
      if (!instance.acceptable(p.first, p.second)) return std::nullopt;
      if (used[p.first]++ || used[p.second]++) return std::nullopt;
    }
  }

  const Completion completion = complete_with_dummies(instance, query.m1);
  const Instance& inst = completion.instance;
  const Matching& m1 = completion.matching;
  const RotationPoset poset = build_rotation_poset(inst, options.poset);
  if (stats) {
    stats->rotations = poset.size();
    stats->tables = poset.tables_explored();
  }

  for (Pair p : forced)
    if (!poset.is_stable_pair(p)) return std::nullopt;
  std::vector<Pair> forbidden;
  for (Pair p : forbidden_all) {
    if (!poset.is_stable_pair(p)) continue;
    if (poset.is_fixed_pair(p)) return std::nullopt;
    forbidden.push_back(p);
  }
  std::vector<Pair> forbidden_in_m1;
  std::vector<Pair> forbidden_outside_m1;
  for (Pair p : forbidden) (m1.contains(p) ? forbidden_in_m1 : forbidden_outside_m1).push_back(p);
  if (forbidden_in_m1.size() >= 63) throw ResourceExhausted("too many forbidden pairs in m1");
  if (stats) {
    stats->forbidden_in_m1 = forbidden_in_m1.size();
    stats->guesses = std::size_t{1} << forbidden_in_m1.size();
  }

  WorkingSet base{matching_to_closed_set(poset, m1), RotationSet(poset.size())};

  // Forced pairs: make the pair's necessary rotation present and every
  // prohibited one absent.
  for (Pair p : forced) {
    if (poset.is_fixed_pair(p)) continue;
    std::vector<AgentId> ends{p.first, p.second};
    if (options.endpoint_rule == EndpointRule::higher_id) std::swap(ends[0], ends[1]);
    std::optional<AgentId> chosen;
    for (AgentId x : ends)
      if (!chosen && has_worse_stable_partner(poset, x, p.other(x))) chosen = x;
    if (!chosen) return std::nullopt;
    const AgentId a = *chosen;
    const AgentId b = p.other(a);
    auto necessary = rho_of(poset, a, b);
    if (!necessary || !base.integrate(poset, *necessary)) return std::nullopt;
    for (AgentId better : poset.stable_partners(a)) {
      if (better == b) break;
      auto prohibited_dual = poset.containing(a, better);
      if (!prohibited_dual || !base.integrate(poset, *prohibited_dual)) return std::nullopt;
    }
  }

  const std::size_t guess_bits = forbidden_in_m1.size();
  const std::size_t guess_count = std::size_t{1} << guess_bits;

  auto run_guess = [&](std::size_t mask) -> std::optional<Candidate> {
    WorkingSet ws = base;
    std::vector<AgentId> designated(guess_bits);
    for (std::size_t i = 0; i < guess_bits; ++i) {
      const Pair e = forbidden_in_m1[i];
      const AgentId a = (mask >> i) & 1 ? e.second : e.first;
      designated[i] = a;
      auto target = least_better_partner(poset, a, e.other(a));
      if (!target) return std::nullopt;
      auto rho = rho_of(poset, a, *target);
      if (!rho || !ws.integrate(poset, *rho)) return std::nullopt;
    }

    Matching current = closed_set_to_matching(poset, ws.z);
    for (;;) {
      auto hit = std::find_if(forbidden_outside_m1.begin(), forbidden_outside_m1.end(),
                              [&](Pair e) { return current.contains(e); });
      if (hit == forbidden_outside_m1.end()) break;
      AgentId a = hit->first;
      if (!inst.prefers(a, hit->second, m1.partner(a))) a = hit->second;
      const AgentId b = hit->other(a);
      if (!inst.prefers(a, b, m1.partner(a))) return std::nullopt;
      auto target = least_better_partner(poset, a, b);
      if (!target) return std::nullopt;
      auto rho = rho_of(poset, a, *target);
      if (!rho || !ws.integrate(poset, *rho)) return std::nullopt;
      current = closed_set_to_matching(poset, ws.z);
    }

    // A posteriori validation of the candidate against every constraint.
    if (!is_stable(inst, current, Notion::strict)) return std::nullopt;
    for (Pair p : forced)
      if (!current.contains(p)) return std::nullopt;
    for (Pair p : forbidden)
      if (current.contains(p)) return std::nullopt;
    for (std::size_t i = 0; i < guess_bits; ++i) {
      const AgentId a = designated[i];
      if (!inst.prefers(a, current.partner(a), m1.partner(a))) return std::nullopt;
    }
    Matching projected = restrict_to(current, completion.original_size);
    const std::size_t delta = distance(query.m1, projected);
    return Candidate{std::move(projected), delta, std::move(designated), ws.required.ids()};
  };

  auto scan = [&](std::size_t begin, std::size_t step) {
    std::optional<Candidate> best;
    for (std::size_t mask = begin; mask < guess_count; mask += step) {
      auto cand = run_guess(mask);
      if (cand && (!best || cand->better_than(*best))) best = std::move(cand);
    }
    return best;
  };

  std::optional<Candidate> best;
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(guess_count)));
  if (workers == 1) {
    best = scan(0, 1);
  } else {
    std::vector<std::optional<Candidate>> partial(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] { partial[w] = scan(w, workers); });
    }
    for (auto& cand : partial)
      if (cand && (!best || cand->better_than(*best))) best = std::move(cand);
  }

  if (!best || best->delta > static_cast<unsigned long long>(query.k)) return std::nullopt;
  AdaptResult result;
  result.matching = std::move(best->matching);
  result.delta = best->delta;
  result.guessed_pairs = forbidden_in_m1;
  result.guess = std::move(best->guess);
  result.integrated = std::move(best->integrated);
  return result;
}

bool window_admits(const Instance& instance, const RankWindow& window, AgentId partner) {
  const AgentId a = window.agent;
  if (window.upper && partner != kNoAgent && !instance.prefers(a, *window.upper, partner))
    return false;
  if (window.lower && (partner == kNoAgent || !instance.prefers(a, partner, *window.lower)))
    return false;
  return true;
}

std::optional<AdaptResult> adapt_with_rank_windows(const Instance& instance, const Matching& m1,
                                                   std::span<const RankWindow> windows, long long k,
                                                   const AdaptOptions& options) {
  if (!instance.is_strict()) throw InvalidNotion("adapt requires strict preferences");
  if (m1.num_agents() != instance.size()) throw std::invalid_argument("m1 is over a different agent set");
  if (k < 0) throw std::invalid_argument("budget k must be non-negative");
  if (!is_stable(instance, m1, Notion::strict)) throw NotStable("m1 is not stable");
  for (const RankWindow& w : windows) {
    if (w.agent < 0 || w.agent >= instance.size()) throw std::invalid_argument("window agent unknown");
    for (auto bound : {w.upper, w.lower})
      if (bound && !instance.acceptable(w.agent, *bound))
        throw std::invalid_argument("window bound is not acceptable to its agent");
    if (w.upper && w.lower && !instance.prefers(w.agent, *w.upper, *w.lower))
      throw std::invalid_argument("window upper bound must be preferred to its lower bound");
  }

  const Completion completion = complete_with_dummies(instance, m1);
  const Instance& inst = completion.instance;
  const RotationPoset poset = build_rotation_poset(inst, options.poset);
  WorkingSet ws{matching_to_closed_set(poset, completion.matching), RotationSet(poset.size())};

  // A dummy partner stands for being unmatched.
  auto admits = [&](const RankWindow& w, AgentId partner) {
    return window_admits(instance, w, partner >= completion.original_size ? kNoAgent : partner);
  };

  bool clash = false;
  for (const RankWindow& w : windows) {
    const AgentId a = w.agent;
    const auto& partners = poset.stable_partners(a);
    if (std::none_of(partners.begin(), partners.end(), [&](AgentId s) { return admits(w, s); }))
      throw WindowUnsatisfiable("no stable partner of " + instance.name(a) + " lies inside its window");
    if (w.upper) {
      for (AgentId s : partners) {
        if (admits(w, s)) break;
        auto r = poset.containing(a, s);
        if (!r) throw WindowUnsatisfiable("upper bound of " + instance.name(a) + " cannot be enforced");
        clash = clash || !ws.integrate(poset, *r);
      }
    }
    if (w.lower) {
      auto target = least_better_partner(poset, a, *w.lower);
      if (!target) throw WindowUnsatisfiable("lower bound of " + instance.name(a) + " excludes every partner");
      if (*target != partners.back()) {
        auto rho = rho_of(poset, a, *target);
        if (!rho) throw WindowUnsatisfiable("lower bound of " + instance.name(a) + " cannot be enforced");
        clash = clash || !ws.integrate(poset, *rho);
      }
    }
  }
  if (clash) return std::nullopt;

  Matching current = closed_set_to_matching(poset, ws.z);
  if (!is_stable(inst, current, Notion::strict)) return std::nullopt;
  for (const RankWindow& w : windows)
    if (!admits(w, current.partner(w.agent))) return std::nullopt;
  Matching projected = restrict_to(current, completion.original_size);
  const std::size_t delta = distance(m1, projected);
  if (delta > static_cast<unsigned long long>(k)) return std::nullopt;
  AdaptResult result;
  result.matching = std::move(projected);
  result.delta = delta;
  result.integrated = ws.required.ids();
  return result;
}

}  // namespace matchadapt
