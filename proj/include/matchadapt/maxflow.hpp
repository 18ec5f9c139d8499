#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace matchadapt {

/// Dinic's maximum flow on a small dense-ish graph with integer capacities.
class MaxFlow {
 public:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max() / 4;

  explicit MaxFlow(int num_nodes);

  void add_edge(int from, int to, std::int64_t capacity);
  std::int64_t run(int source, int sink);

  /// Nodes reachable from the source in the final residual graph (the source
  /// side of a minimum cut). Valid after run().
  std::vector<bool> source_side() const;

 private:
  struct Edge {
    int to;
    int rev;
    std::int64_t cap;
  };

  bool bfs(int source, int sink);
  std::int64_t dfs(int node, int sink, std::int64_t pushed);

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  int source_ = -1;
};

}  // namespace matchadapt
