#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gog/graph.hpp"

namespace gog {

enum class KernelKind { ShortestPath, WeisfeilerLehman };

struct KernelId {
  KernelKind kind = KernelKind::ShortestPath;
  int wl_iterations = 3;  ///< only meaningful for WeisfeilerLehman

  /// "sp" or "wl-h<iterations>"; used as the cache-file key.
  std::string str() const;
  static KernelId parse(const std::string& text);

  friend bool operator==(const KernelId& a, const KernelId& b) {
    return a.kind == b.kind && (a.kind == KernelKind::ShortestPath || a.wl_iterations == b.wl_iterations);
  }
};

/// Sparse histogram: sorted (feature key, count) pairs. Kernel values are
/// inner products of these.
using FeatureHistogram = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

double histogram_dot(const FeatureHistogram& a, const FeatureHistogram& b);

/// Counts of (distance, smaller endpoint label, larger endpoint label) over
/// unordered node pairs u < v at finite BFS distance.
FeatureHistogram shortest_path_features(const Graph& g);

/// Delta shortest-path kernel. Graphs without node labels use a uniform label.
double shortest_path_kernel(const Graph& g1, const Graph& g2);

/// Weisfeiler-Lehman subtree features for a collection of graphs sharing one
/// color dictionary. Colors from rounds 0..iterations are accumulated; the
/// key encodes (round, color id).
class WlColorer {
 public:
  explicit WlColorer(int iterations);

  /// Per-graph histograms; graphs colored together share the dictionary.
  std::vector<FeatureHistogram> features(const std::vector<const Graph*>& graphs);

 private:
  int iterations_;
};

double wl_kernel(const Graph& g1, const Graph& g2, int iterations);

/// Dense symmetric N x N similarity matrix.
struct SimilarityMatrix {
  Matrix values;
  bool normalized = false;
  KernelId kernel;

  Eigen::Index size() const noexcept { return values.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

/// All pairwise kernel values. Cosine-normalizes when `normalize` is set and
/// throws DataError naming a graph whose self-similarity is zero. The result
/// does not depend on `workers`.
SimilarityMatrix similarity_matrix(const Dataset& dataset, const KernelId& kernel, bool normalize,
                                   unsigned workers = 1);

/// Cache layout: one text header line `GOGSIM v1 <kernel> <N> <0|1>\n`
/// followed by the upper triangle (row-major, diagonal included) as
/// little-endian IEEE-754 doubles.
void save_similarity(const SimilarityMatrix& s, const std::filesystem::path& path);
SimilarityMatrix load_similarity(const std::filesystem::path& path);
/// Loads the cache only if its header matches the requested parameters.
std::optional<SimilarityMatrix> load_similarity_if_matches(const std::filesystem::path& path,
                                                           const KernelId& kernel, Eigen::Index n,
                                                           bool normalized);

/// kNN graph of graphs. `neighbors[i]` holds the k graphs that i selected,
/// most similar first; `edges` is the union-symmetrized undirected edge set.
struct GoGraph {
  int num_nodes = 0;
  int k = 0;
  std::vector<std::vector<int>> neighbors;
  std::vector<Edge> edges;

  std::vector<std::vector<int>> adjacency_lists() const;
};

/// Top-k per row (ties to the lower index, self excluded), union-symmetrized.
GoGraph knn_gog(const SimilarityMatrix& s, int k);

/// Fraction of GoG edges whose endpoints share a class label.
double edge_homophily(const GoGraph& gog, const std::vector<int>& labels);

}  // namespace gog
