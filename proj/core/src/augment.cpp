#include "gog/augment.hpp"

#include <stdexcept>

namespace gog {

void AugmentConfig::validate() const {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw std::invalid_argument("augmentation ratio must lie in [0, 1)");
  if (count < 1) throw std::invalid_argument("augmentation count must be >= 1");
}

Graph remove_edges(const Graph& g, double ratio, Rng& rng) {
  if (ratio == 0.0 || g.edge_count() == 0) return g;
  std::vector<Edge> kept;
  kept.reserve(g.edge_count());
  for (const auto& e : g.edges())
    if (!rng.bernoulli(ratio)) kept.push_back(e);
  return g.with_edges(std::move(kept));
}

Graph mask_node_features(const Graph& g, double ratio, Rng& rng) {
  if (ratio == 0.0) return g;
  Matrix x = g.features();
  for (Eigen::Index v = 0; v < x.rows(); ++v)
    if (!rng.bernoulli(1.0 - ratio)) x.row(v).setZero();
  return g.with_features(std::move(x));
}

std::vector<Graph> augment_set(const Graph& g, const AugmentConfig& cfg, const AugmentKey& key) {
  cfg.validate();
  std::vector<Graph> out;
  out.reserve(static_cast<std::size_t>(cfg.count));
  for (int t = 0; t < cfg.count; ++t) {
    Rng rng(derive_seed(cfg.seed, {key.epoch, key.batch, key.graph, static_cast<std::uint64_t>(t)}));
    switch (cfg.strategy) {
      case AugmentStrategy::None:
        out.push_back(g);
        break;
      case AugmentStrategy::RemoveEdges:
        out.push_back(remove_edges(g, cfg.ratio, rng));
        break;
      case AugmentStrategy::MaskNodeFeatures:
        out.push_back(mask_node_features(g, cfg.ratio, rng));
        break;
    }
  }
  return out;
}

}  // namespace gog
