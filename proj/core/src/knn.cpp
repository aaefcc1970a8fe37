#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "gog/error.hpp"
#include "gog/kernel.hpp"

namespace gog {

std::vector<std::vector<int>> GoGraph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes));
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

GoGraph knn_gog(const SimilarityMatrix& s, int k) {
  const auto n = static_cast<int>(s.size());
  if (k < 1 || k >= n)
    throw std::invalid_argument("k must satisfy 1 <= k < N (k = " + std::to_string(k) + ", N = " +
                                std::to_string(n) + ")");
  GoGraph gog;
  gog.num_nodes = n;
  gog.k = k;
  gog.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<int> candidates(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) candidates[c++] = j;
    auto more_similar = [&](int a, int b) {
      const double sa = s(i, a), sb = s(i, b);
      return sa != sb ? sa > sb : a < b;
    };
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(), more_similar);
    gog.neighbors[i].assign(candidates.begin(), candidates.begin() + k);
    for (int j : gog.neighbors[i]) gog.edges.push_back({std::min(i, j), std::max(i, j)});
  }
  std::sort(gog.edges.begin(), gog.edges.end());
  gog.edges.erase(std::unique(gog.edges.begin(), gog.edges.end()), gog.edges.end());
  return gog;
}

double edge_homophily(const GoGraph& gog, const std::vector<int>& labels) {
  if (gog.edges.empty()) throw std::invalid_argument("edge homophily of a GoG without edges");
  if (static_cast<int>(labels.size()) != gog.num_nodes)
    throw std::invalid_argument("label count does not match GoG size");
  std::size_t same = 0;
  for (const auto& e : gog.edges) same += labels[e.u] == labels[e.v];
  return static_cast<double>(same) / static_cast<double>(gog.edges.size());
}

}  // namespace gog
