#include "matchadapt/maxflow.hpp"

#include <algorithm>
#include <queue>

namespace matchadapt {

MaxFlow::MaxFlow(int num_nodes) : graph_(num_nodes), level_(num_nodes), next_(num_nodes) {}

void MaxFlow::add_edge(int from, int to, std::int64_t capacity) {
  graph_[from].push_back({to, static_cast<int>(graph_[to].size()), capacity});
  graph_[to].push_back({from, static_cast<int>(graph_[from].size()) - 1, 0});
}

bool MaxFlow::bfs(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (const Edge& e : graph_[u]) {
      if (e.cap > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[u] + 1;
        queue.push(e.to);
      }
    }
  }
  return level_[sink] >= 0;
}

std::int64_t MaxFlow::dfs(int node, int sink, std::int64_t pushed) {
  if (node == sink) return pushed;
  for (std::size_t& i = next_[node]; i < graph_[node].size(); ++i) {
    Edge& e = graph_[node][i];
    if (e.cap <= 0 || level_[e.to] != level_[node] + 1) continue;
    std::int64_t got = dfs(e.to, sink, std::min(pushed, e.cap));
    if (got > 0) {
      e.cap -= got;
      graph_[e.to][e.rev].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  source_ = source;
  std::int64_t flow = 0;
  while (bfs(source, sink)) {
    std::fill(next_.begin(), next_.end(), 0);
    while (std::int64_t pushed = dfs(source, sink, kInfinity)) flow += pushed;
  }
  return flow;
}

std::vector<bool> MaxFlow::source_side() const {
  std::vector<bool> seen(graph_.size(), false);
  if (source_ < 0) return seen;
  std::queue<int> queue;
  seen[source_] = true;
  queue.push(source_);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (const Edge& e : graph_[u]) {
      if (e.cap > 0 && !seen[e.to]) {
        seen[e.to] = true;
        queue.push(e.to);
      }
    }
  }
  return seen;
}

}  // namespace matchadapt
