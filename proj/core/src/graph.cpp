#include "gog/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gog/error.hpp"

namespace gog {

Graph::Graph(int node_count, std::vector<Edge> edges, Matrix features, std::vector<int> node_labels,
             int graph_label)
    : node_count_(node_count),
      edges_(std::move(edges)),
      features_(std::move(features)),
      node_labels_(std::move(node_labels)),
      graph_label_(graph_label) {
  if (node_count_ < 1) throw std::invalid_argument("graph must have at least one node");
  if (features_.rows() != node_count_)
    throw std::invalid_argument("feature rows (" + std::to_string(features_.rows()) +
                                ") != node count (" + std::to_string(node_count_) + ")");
  if (!node_labels_.empty() && static_cast<int>(node_labels_.size()) != node_count_)
    throw std::invalid_argument("node label count does not match node count");
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count_ || e.v >= node_count_)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<int> Graph::labels_or_uniform() const {
  if (has_node_labels()) return node_labels_;
  return std::vector<int>(static_cast<std::size_t>(node_count_), 0);
}

std::vector<std::vector<int>> Graph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(node_count_));
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(node_count_), 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  return Graph(node_count_, std::move(edges), features_, node_labels_, graph_label_);
}

Graph Graph::with_features(Matrix features) const {
  return Graph(node_count_, edges_, std::move(features), node_labels_, graph_label_);
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(g.label());
  return out;
}

void Dataset::validate() const {
  if (num_classes < 2)
    throw DataError("dataset '" + name + "' has " + std::to_string(num_classes) +
                    " class(es); at least 2 are required");
  if (graphs.empty()) throw DataError("dataset '" + name + "' is empty");
  const auto dim = graphs.front().feature_dim();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i].feature_dim() != dim)
      throw DataError("graph " + std::to_string(i) + " has feature dim " +
                      std::to_string(graphs[i].feature_dim()) + ", expected " + std::to_string(dim));
    if (graphs[i].label() < 0 || graphs[i].label() >= num_classes)
      throw DataError("graph " + std::to_string(i) + " has label outside [0, C)");
  }
}

DatasetStats compute_stats(const Dataset& dataset) {
  DatasetStats s;
  s.graph_count = dataset.size();
  s.feature_dim = dataset.feature_dim();
  s.class_histogram.assign(static_cast<std::size_t>(std::max(dataset.num_classes, 0)), 0);
  double nodes = 0, edges = 0;
  for (const auto& g : dataset.graphs) {
    nodes += g.node_count();
    edges += static_cast<double>(g.edge_count());
    if (g.label() >= 0 && g.label() < dataset.num_classes) ++s.class_histogram[g.label()];
  }
  if (s.graph_count > 0) {
    s.avg_nodes = nodes / static_cast<double>(s.graph_count);
    s.avg_edges = edges / static_cast<double>(s.graph_count);
  }
  return s;
}

Dataset degree_onehot_features(const Dataset& dataset, std::optional<int> max_degree) {
  int width_max = 0;
  if (max_degree) {
    if (*max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
    width_max = *max_degree;
  } else {
    for (const auto& g : dataset.graphs)
      for (int d : g.degrees()) width_max = std::max(width_max, d);
  }
  Dataset out{dataset.name, {}, dataset.num_classes, FeatureSource::Degree};
  out.graphs.reserve(dataset.size());
  for (const auto& g : dataset.graphs) {
    Matrix x = Matrix::Zero(g.node_count(), width_max + 1);
    const auto deg = g.degrees();
    for (int v = 0; v < g.node_count(); ++v) x(v, std::min(deg[v], width_max)) = 1.0;
    out.graphs.push_back(g.with_features(std::move(x)));
  }
  return out;
}

}  // namespace gog
