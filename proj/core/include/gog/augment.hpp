#pragma once

#include <cstdint>
#include <vector>

#include "gog/graph.hpp"
#include "gog/random.hpp"

namespace gog {

enum class AugmentStrategy { None, RemoveEdges, MaskNodeFeatures };

struct AugmentConfig {
  AugmentStrategy strategy = AugmentStrategy::MaskNodeFeatures;
  double ratio = 0.1;  ///< probability of removing an edge / masking a node
  int count = 2;       ///< variants per graph
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless 0 <= ratio < 1 and count >= 1.
  void validate() const;
};

/// Drops each undirected edge independently with probability `ratio`.
Graph remove_edges(const Graph& g, double ratio, Rng& rng);

/// Zeroes whole feature rows; node j is kept with probability 1 - ratio.
Graph mask_node_features(const Graph& g, double ratio, Rng& rng);

/// Key identifying one augmentation draw. Streams are derived
/// hierarchically seed -> epoch -> batch -> graph -> variant, so the result
/// does not depend on the order in which graphs are processed.
struct AugmentKey {
  std::uint64_t epoch = 0;
  std::uint64_t batch = 0;
  std::uint64_t graph = 0;
};

/// cfg.count independent variants of g.
std::vector<Graph> augment_set(const Graph& g, const AugmentConfig& cfg, const AugmentKey& key);

}  // namespace gog
