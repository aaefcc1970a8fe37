#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gog/graph.hpp"
#include "gog/random.hpp"

namespace gog::test {

inline const std::filesystem::path kDataDir = GOG_DATA_DIR;

inline bool have_dataset(const std::string& name) {
  return std::filesystem::exists(kDataDir / name / (name + "_A.txt"));
}

/// Graph with one-hot node-label features over `num_labels` labels.
inline Graph labeled_graph(int n, std::vector<Edge> edges, std::vector<int> labels, int num_labels, int label = 0) {
  Matrix x = Matrix::Zero(n, num_labels);
  for (int i = 0; i < n; ++i) x(i, labels[i]) = 1.0;
  return Graph(n, std::move(edges), std::move(x), std::move(labels), label);
}

inline Graph uniform_graph(int n, std::vector<Edge> edges, int label = 0) {
  return labeled_graph(n, std::move(edges), std::vector<int>(static_cast<std::size_t>(n), 0), 1, label);
}

inline Graph path_graph(int n, int label = 0) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return uniform_graph(n, e, label);
}

inline Graph cycle_graph(int n, int label = 0) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, n - 1});
  return uniform_graph(n, e, label);
}

/// Erdos-Renyi graph with random labels in [0, num_labels).
inline Graph random_graph(Rng& rng, int n, double p, int num_labels, int label = 0) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) e.push_back({u, v});
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_labels)));
  return labeled_graph(n, e, labels, num_labels, label);
}

/// Same graph with node i renamed perm[i].
inline Graph permuted(const Graph& g, const std::vector<int>& perm) {
  std::vector<Edge> e;
  for (const auto& ed : g.edges()) e.push_back({perm[ed.u], perm[ed.v]});
  Matrix x(g.node_count(), g.feature_dim());
  std::vector<int> labels(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i) {
    x.row(perm[i]) = g.features().row(i);
    if (g.has_node_labels()) labels[perm[i]] = g.node_labels()[i];
  }
  if (!g.has_node_labels()) labels.clear();
  return Graph(g.node_count(), e, x, labels, g.label());
}

inline std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = i;
  rng.shuffle(std::span<int>(p));
  return p;
}

/// Two-class synthetic dataset: class 0 are cycles, class 1 are paths with a
/// pendant triangle. Distinguishable by structure alone.
inline Dataset toy_dataset(int per_class0, int per_class1, std::uint64_t seed = 1) {
  Rng rng(seed);
  Dataset ds;
  ds.name = "toy";
  ds.num_classes = 2;
  ds.feature_source = FeatureSource::NodeLabels;
  for (int i = 0; i < per_class0; ++i) {
    const int n = 5 + static_cast<int>(rng.below(4));
    std::vector<Edge> e;
    for (int j = 0; j + 1 < n; ++j) e.push_back({j, j + 1});
    e.push_back({0, n - 1});
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = static_cast<int>(rng.below(2));
    ds.graphs.push_back(labeled_graph(n, e, labels, 2, 0));
  }
  for (int i = 0; i < per_class1; ++i) {
    const int n = 5 + static_cast<int>(rng.below(4));
    std::vector<Edge> e;
    for (int j = 0; j + 1 < n; ++j) e.push_back({j, j + 1});
    e.push_back({n - 3, n - 1});
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = static_cast<int>(rng.below(2));
    ds.graphs.push_back(labeled_graph(n, e, labels, 2, 1));
  }
  ds.validate();
  return ds;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    Rng rng(std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)));
    path_ = std::filesystem::temp_directory_path() / ("gog-" + tag + "-" + std::to_string(rng.next_u64() % 1000000007));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace gog::test
