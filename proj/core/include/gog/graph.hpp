#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gog/types.hpp"

namespace gog {

/// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// One attributed graph. Immutable once built; the constructor canonicalizes
/// the edge list (min endpoint first, sorted, deduplicated) and rejects
/// self-loops and out-of-range endpoints.
class Graph {
 public:
  Graph(int node_count, std::vector<Edge> edges, Matrix features,
        std::vector<int> node_labels, int graph_label);

  int node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Matrix& features() const noexcept { return features_; }
  Eigen::Index feature_dim() const noexcept { return features_.cols(); }
  bool has_node_labels() const noexcept { return !node_labels_.empty(); }
  /// Empty when the graph carries no discrete node labels.
  const std::vector<int>& node_labels() const noexcept { return node_labels_; }
  int label() const noexcept { return graph_label_; }

  /// Node labels, or a single uniform label when none are present.
  std::vector<int> labels_or_uniform() const;
  /// Neighbor lists in ascending order.
  std::vector<std::vector<int>> adjacency_lists() const;
  std::vector<int> degrees() const;

  Graph with_edges(std::vector<Edge> edges) const;
  Graph with_features(Matrix features) const;

 private:
  int node_count_;
  std::vector<Edge> edges_;
  Matrix features_;
  std::vector<int> node_labels_;
  int graph_label_;
};

/// Where a dataset's node features came from; controls re-serialization.
enum class FeatureSource { Attributes, NodeLabels, Constant, Degree };

struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  int num_classes = 0;
  FeatureSource feature_source = FeatureSource::Constant;

  std::size_t size() const noexcept { return graphs.size(); }
  Eigen::Index feature_dim() const { return graphs.empty() ? 0 : graphs.front().feature_dim(); }
  std::vector<int> labels() const;

  /// Throws DataError when the dataset invariants do not hold.
  void validate() const;
};

struct DatasetStats {
  std::size_t graph_count = 0;
  double avg_nodes = 0.0;
  double avg_edges = 0.0;
  Eigen::Index feature_dim = 0;
  std::vector<std::size_t> class_histogram;
};

DatasetStats compute_stats(const Dataset& dataset);

/// Reads `{dir}/{name}_A.txt`, `_graph_indicator.txt`, `_graph_labels.txt`
/// and the optional `_node_labels.txt` / `_node_attributes.txt`.
Dataset load_tudataset(const std::filesystem::path& dir, const std::string& name);

/// Writes the dataset back in the same text format (1-based global ids).
void save_tudataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Replaces node features by one-hot degree encodings of width max_degree+1.
/// Degrees above max_degree land in the last bucket. Without an explicit
/// max_degree the dataset-wide maximum is used.
Dataset degree_onehot_features(const Dataset& dataset, std::optional<int> max_degree = std::nullopt);

}  // namespace gog
