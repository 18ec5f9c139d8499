#include "matchadapt/gen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace matchadapt {

Graph normalize_graph(Graph g) {
  if (g.vertices < 0) throw std::invalid_argument("negative vertex count");
  for (auto& [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.vertices || v >= g.vertices)
      throw std::invalid_argument("edge " + std::to_string(u) + " " + std::to_string(v) + " out of range");
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
    throw std::invalid_argument("duplicate edge");
  return g;
}

Instance random_instance(int n, Kind kind, double tie_probability, double density, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_instance needs at least 2 agents");
  if (!(tie_probability >= 0.0 && tie_probability <= 1.0))
    throw std::invalid_argument("tie probability must lie in [0, 1]");
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");

  Rng rng(seed);
  RawInstance raw;
  raw.kind = kind;
  const int men = (n + 1) / 2;
  for (int i = 0; i < n; ++i) {
    if (kind == Kind::roommates) {
      raw.names.push_back("a" + std::to_string(i));
    } else {
      raw.names.push_back(i < men ? "m" + std::to_string(i) : "w" + std::to_string(i - men));
      raw.side.push_back(i < men ? 0 : 1);
    }
  }

  std::vector<std::vector<AgentId>> acceptable(n);
  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b = a + 1; b < n; ++b) {
      if (kind == Kind::marriage && raw.side[a] == raw.side[b]) continue;
      if (!rng.chance(density)) continue;
      acceptable[a].push_back(b);
      acceptable[b].push_back(a);
    }
  }

  raw.prefs.resize(n);
  for (AgentId a = 0; a < n; ++a) {
    rng.shuffle(acceptable[a]);
    for (std::size_t i = 0; i < acceptable[a].size(); ++i) {
      if (i > 0 && tie_probability > 0.0 && rng.chance(tie_probability))
        raw.prefs[a].back().push_back(acceptable[a][i]);
      else
        raw.prefs[a].push_back({acceptable[a][i]});
    }
  }
  return validate_instance(raw);
}

GadgetInstance independent_set_gadget(const Graph& graph, int ell) {
  const Graph g = normalize_graph(graph);
  if (g.vertices == 0) throw std::invalid_argument("independent set gadget needs a non-empty graph");
  if (ell < 0 || ell > g.vertices) throw std::invalid_argument("ell must lie in 0..|V|");

  std::vector<std::vector<int>> neighbours(g.vertices);
  for (auto [u, v] : g.edges) {
    neighbours[u].push_back(v);
    neighbours[v].push_back(u);
  }
  for (auto& list : neighbours) std::sort(list.begin(), list.end());

  // Per vertex v: a1..a5 at 10v+0..4, b1..b5 at 10v+5..9.
  auto a = [](int v, int i) { return 10 * v + i - 1; };
  auto b = [](int v, int i) { return 10 * v + 4 + i; };

  RawInstance raw;
  raw.kind = Kind::roommates;
  raw.prefs.resize(10 * g.vertices);
  for (int v = 0; v < g.vertices; ++v) {
    for (int i = 1; i <= 5; ++i) raw.names.push_back("a" + std::to_string(i) + "_" + std::to_string(v));
    for (int i = 1; i <= 5; ++i) raw.names.push_back("b" + std::to_string(i) + "_" + std::to_string(v));

    auto strict = [](std::initializer_list<AgentId> agents) {
      PreferenceList list;
      for (AgentId x : agents) list.push_back({x});
      return list;
    };
    raw.prefs[a(v, 1)] = strict({b(v, 1), b(v, 2)});
    PreferenceList a2 = strict({b(v, 3), b(v, 2)});
    for (int w : neighbours[v]) a2.push_back({a(w, 2)});
    a2.push_back({b(v, 1)});
    raw.prefs[a(v, 2)] = std::move(a2);
    raw.prefs[a(v, 3)] = strict({b(v, 2), b(v, 3)});
    raw.prefs[a(v, 4)] = strict({b(v, 5), b(v, 3), b(v, 4)});
    raw.prefs[a(v, 5)] = strict({b(v, 4), b(v, 5)});
    raw.prefs[b(v, 1)] = strict({a(v, 2), a(v, 1)});
    raw.prefs[b(v, 2)] = strict({a(v, 1), a(v, 2), a(v, 3)});
    raw.prefs[b(v, 3)] = strict({a(v, 3), a(v, 4), a(v, 2)});
    raw.prefs[b(v, 4)] = strict({a(v, 4), a(v, 5)});
    raw.prefs[b(v, 5)] = strict({a(v, 5), a(v, 4)});
  }

  GadgetInstance out;
  out.instance = validate_instance(raw);
  std::vector<Pair> m1;
  for (int v = 0; v < g.vertices; ++v) {
    for (int i = 1; i <= 5; ++i) m1.push_back(Pair::of(a(v, i), b(v, i)));
    out.query.forbidden.push_back(Pair::of(a(v, 2), b(v, 2)));
  }
  out.query.m1 = Matching::on(out.instance, m1);
  out.query.k = 8LL * g.vertices - 4LL * ell;
  if (!is_stable(out.instance, out.query.m1, Notion::strict))
    throw std::logic_error("independent set gadget produced an unstable M1");
  return out;
}

namespace {

struct Singles {
  AgentId man = kNoAgent;
  AgentId woman = kNoAgent;
};

Singles check_local_search_base(const Instance& base, const Matching& n_matching) {
  if (base.kind() != Kind::marriage) throw std::invalid_argument("base must be a marriage instance");
  if (n_matching.num_agents() != base.size()) throw std::invalid_argument("matching is over a different agent set");
  bool ties[2] = {false, false};
  for (AgentId a = 0; a < base.size(); ++a)
    for (const auto& group : base.prefs(a))
      if (group.size() > 1) ties[base.side(a)] = true;
  if (ties[0] && ties[1]) throw std::invalid_argument("base has ties on both sides");
  if (!is_stable(base, n_matching, Notion::weak)) throw std::invalid_argument("base matching is not weakly stable");

  Singles singles;
  int unmatched = 0;
  for (AgentId a = 0; a < base.size(); ++a) {
    if (n_matching.matched(a)) continue;
    ++unmatched;
    (base.side(a) == 0 ? singles.man : singles.woman) = a;
  }
  if (unmatched != 2 || singles.man == kNoAgent || singles.woman == kNoAgent)
    throw std::invalid_argument("base matching must leave exactly one man and one woman unmatched");
  return singles;
}

AgentId add_agent(RawInstance& raw, const std::string& name, int side) {
  if (std::find(raw.names.begin(), raw.names.end(), name) != raw.names.end())
    throw std::invalid_argument("base already has an agent named " + name);
  raw.names.push_back(name);
  raw.side.push_back(side);
  raw.prefs.emplace_back();
  return static_cast<AgentId>(raw.names.size()) - 1;
}

GadgetInstance finish(const RawInstance& raw, std::vector<Pair> m1, std::vector<Pair> forced,
                      std::vector<Pair> forbidden, int ell) {
  if (ell < 0) throw std::invalid_argument("ell must be non-negative");
  GadgetInstance out;
  out.instance = validate_instance(raw);
  out.query.m1 = Matching::on(out.instance, m1);
  out.query.forced = std::move(forced);
  out.query.forbidden = std::move(forbidden);
  out.query.k = ell + 3LL;
  if (!is_stable(out.instance, out.query.m1, Notion::weak))
    throw std::logic_error("local search gadget produced an unstable M1");
  return out;
}

}  // namespace

GadgetInstance local_search_forced_gadget(const Instance& base, const Matching& n_matching, int ell) {
  const Singles singles = check_local_search_base(base, n_matching);
  RawInstance raw = base.to_raw();
  const int n = base.size();
  const AgentId u_star = add_agent(raw, "u_star", 0);
  const AgentId w_star = add_agent(raw, "w_star", 1);
  for (AgentId x = 0; x < n; ++x) {
    if (base.side(x) == 1) {
      raw.prefs[u_star].push_back({x});
      raw.prefs[x].push_back({u_star});
    } else {
      raw.prefs[w_star].push_back({x});
      raw.prefs[x].push_back({w_star});
    }
  }
  raw.prefs[u_star].push_back({w_star});
  raw.prefs[w_star].push_back({u_star});

  std::vector<Pair> m1 = n_matching.pairs();
  m1.push_back(Pair::of(u_star, singles.woman));
  m1.push_back(Pair::of(singles.man, w_star));
  return finish(raw, std::move(m1), {Pair::of(u_star, w_star)}, {}, ell);
}

GadgetInstance local_search_forbidden_gadget(const Instance& base, const Matching& n_matching, int ell) {
  const Singles singles = check_local_search_base(base, n_matching);
  RawInstance raw = base.to_raw();
  const int n = base.size();
  const AgentId w_star = add_agent(raw, "w_star", 1);
  const AgentId u_prime = add_agent(raw, "u_prime", 0);
  const AgentId w_prime = add_agent(raw, "w_prime", 1);
  for (AgentId x = 0; x < n; ++x) {
    if (base.side(x) != 0) continue;
    raw.prefs[w_star].push_back({x});
    raw.prefs[x].push_back({w_star});
  }
  raw.prefs[w_star].push_back({u_prime});
  raw.prefs[u_prime] = {{w_star}, {w_prime}};
  raw.prefs[w_prime] = {{u_prime}};

  std::vector<Pair> m1 = n_matching.pairs();
  m1.push_back(Pair::of(singles.man, w_star));
  m1.push_back(Pair::of(u_prime, w_prime));
  return finish(raw, std::move(m1), {}, {Pair::of(u_prime, w_prime)}, ell);
}

}  // namespace matchadapt
