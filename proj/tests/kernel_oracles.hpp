#pragma once

// Slow reference kernels used as oracles by the unit and acceptance tests.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gog/graph.hpp"

namespace gog::test {

inline constexpr int kInf = 1 << 29;

inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
  const int n = g.node_count();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Enumerates every pair of node pairs.
inline double brute_force_sp(const Graph& a, const Graph& b) {
  const auto da = floyd_warshall(a), db = floyd_warshall(b);
  const auto la = a.labels_or_uniform(), lb = b.labels_or_uniform();
  double k = 0;
  for (int u = 0; u < a.node_count(); ++u)
    for (int v = u + 1; v < a.node_count(); ++v) {
      if (da[u][v] >= kInf) continue;
      for (int x = 0; x < b.node_count(); ++x)
        for (int y = x + 1; y < b.node_count(); ++y) {
          if (db[x][y] != da[u][v]) continue;
          const bool same = (la[u] == lb[x] && la[v] == lb[y]) || (la[u] == lb[y] && la[v] == lb[x]);
          if (same) k += 1;
        }
    }
  return k;
}

/// WL with explicit string colors and one dictionary shared by both graphs.
inline double naive_wl(const Graph& a, const Graph& b, int h) {
  std::map<std::string, int> dictionary;
  auto id = [&](const std::string& s) {
    auto [it, inserted] = dictionary.emplace(s, static_cast<int>(dictionary.size()));
    return it->second;
  };
  std::vector<const Graph*> graphs{&a, &b};
  std::vector<std::vector<int>> colors(2);
  std::vector<std::map<std::pair<int, int>, int>> counts(2);
  for (int gi = 0; gi < 2; ++gi) {
    for (int l : graphs[gi]->labels_or_uniform()) colors[gi].push_back(id("L" + std::to_string(l)));
    for (int c : colors[gi]) ++counts[gi][{0, c}];
  }
  for (int round = 1; round <= h; ++round) {
    for (int gi = 0; gi < 2; ++gi) {
      const auto adj = graphs[gi]->adjacency_lists();
      std::vector<int> next;
      for (int v = 0; v < graphs[gi]->node_count(); ++v) {
        std::vector<int> nb;
        for (int w : adj[v]) nb.push_back(colors[gi][w]);
        std::sort(nb.begin(), nb.end());
        std::ostringstream sig;
        sig << "R" << round << ":" << colors[gi][v] << "|";
        for (int c : nb) sig << c << ",";
        next.push_back(id(sig.str()));
      }
      colors[gi] = next;
      for (int c : colors[gi]) ++counts[gi][{round, c}];
    }
  }
  double k = 0;
  for (const auto& [key, n] : counts[0])
    if (auto it = counts[1].find(key); it != counts[1].end()) k += static_cast<double>(n) * it->second;
  return k;
}

}  // namespace gog::test
