#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "matchadapt/core.hpp"

namespace matchadapt {

/// Simple undirected graph on vertices 0..vertices-1.
struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Throws std::invalid_argument on self-loops, duplicate edges or endpoints
/// out of range. Returns the graph with edges normalized to (low, high) and
/// sorted.
Graph normalize_graph(Graph g);

/// Instance together with an adaptation query built on it.
struct GadgetInstance {
  Instance instance;
  AdaptQuery query;
};

/// Seeded generator with a portable draw sequence (the result does not depend
/// on the standard library's distribution implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return p >= 1.0 || unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Random instance on n agents (a0.. for roommates; m0.. and w0.. for marriage,
/// with ceil(n/2) men). Each mutually acceptable pair is kept with probability
/// density, lists are shuffled, and each entry joins the preceding tie-group
/// with probability tie_probability.
Instance random_instance(int n, Kind kind, double tie_probability, double density, std::uint64_t seed);

/// Reduction from Independent Set: ten agents per vertex, M1 = {a_i b_i},
/// P = {a2 b2 per vertex}, Q empty, k = 8|V| - 4 ell. Throws
/// std::invalid_argument on an empty graph or ell outside 0..|V|.
GadgetInstance independent_set_gadget(const Graph& g, int ell);

/// Forced-pair local-search reduction. base is a marriage instance with ties on
/// at most one side and n_matching a weakly stable matching leaving exactly one
/// man and one woman unmatched. Adds u_star and w_star; Q = {u_star w_star};
/// k = ell + 3.
GadgetInstance local_search_forced_gadget(const Instance& base, const Matching& n_matching, int ell);

/// Forbidden-pair local-search reduction. Adds w_star, u_prime and w_prime;
/// P = {u_prime w_prime}; k = ell + 3.
GadgetInstance local_search_forbidden_gadget(const Instance& base, const Matching& n_matching, int ell);

}  // namespace matchadapt
