#include "gog/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "gog/metrics.hpp"
#include "gog/objective.hpp"
#include "gog/propagation.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace gog {
namespace {

// Subnormal intermediates (softmax tails, vanishing gradients) slow dense
// products by an order of magnitude; flush them for the calling thread.
class FlushDenormals {
 public:
  FlushDenormals() {
#if defined(__SSE2__)
    saved_ = _mm_getcsr();
    _mm_setcsr(saved_ | 0x8040);  // FTZ | DAZ
#endif
  }
  ~FlushDenormals() {
#if defined(__SSE2__)
    _mm_setcsr(saved_);
#endif
  }
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
  unsigned saved_ = 0;
};

// Sub-stream tags under the run seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kAugmentStream = 3;
constexpr std::uint64_t kValidationStream = 4;

std::vector<int> unique_in_order(std::span<const int> items) {
  std::vector<int> out;
  std::unordered_map<int, char> seen;
  for (int g : items)
    if (seen.emplace(g, 1).second) out.push_back(g);
  return out;
}

/// Encoded, propagated and classified variants of one group of graphs.
struct Forward {
  std::vector<int> nodes;  // graph index per local row within a variant block
  int variants = 1;
  nn::Tensor logits;       // rows t * nodes.size() + i
};

Forward forward_group(const nn::GraphClassifier& model, const Dataset& dataset, std::span<const int> members,
                      const GoGraph* gog, const TrainConfig& cfg, const AugmentConfig& aug, std::uint64_t epoch,
                      std::uint64_t batch) {
  Forward f;
  std::optional<PropagationPlan> plan;
  // Without propagation the neighbors cannot influence the members.
  if (cfg.uses_gog() && cfg.prop_layers > 0) {
    plan = batch_induced_subgraph(*gog, members, cfg.prop_layers);
    f.nodes = plan->sub_nodes;
  } else {
    f.nodes = unique_in_order(members);
  }
  f.variants = cfg.variants();
  const auto m = f.nodes.size();

  if (aug.strategy == AugmentStrategy::None) {
    // Identical variants: encode once and replicate the logits, so the copies
    // are bit-identical and the consistency term is exactly zero.
    std::vector<const Graph*> ptrs(m);
    for (std::size_t i = 0; i < m; ++i) ptrs[i] = &dataset.graphs[f.nodes[i]];
    auto reprs = model.encoder().forward(nn::GraphBatch::build(ptrs));
    if (plan) reprs = propagate(reprs, *plan);
    f.logits = model.classify(reprs);
    if (f.variants > 1) {
      std::vector<int> tiled;
      tiled.reserve(m * static_cast<std::size_t>(f.variants));
      for (int t = 0; t < f.variants; ++t)
        for (std::size_t i = 0; i < m; ++i) tiled.push_back(static_cast<int>(i));
      f.logits = nn::gather_rows(f.logits, tiled);
    }
    return f;
  }

  std::vector<Graph> storage;
  storage.reserve(m * static_cast<std::size_t>(f.variants));
  for (std::size_t i = 0; i < m; ++i) {
    auto set = augment_set(dataset.graphs[f.nodes[i]], aug, {epoch, batch, static_cast<std::uint64_t>(f.nodes[i])});
    for (int t = 0; t < f.variants; ++t) storage.push_back(std::move(set[t]));
  }
  std::vector<const Graph*> ptrs(m * static_cast<std::size_t>(f.variants));
  for (std::size_t i = 0; i < m; ++i)
    for (int t = 0; t < f.variants; ++t) ptrs[t * m + i] = &storage[i * f.variants + t];

  auto reprs = model.encoder().forward(nn::GraphBatch::build(ptrs));
  if (plan) reprs = propagate_groups(reprs, *plan, f.variants);
  f.logits = model.classify(reprs);
  return f;
}

AugmentConfig augment_config(const TrainConfig& cfg, std::uint64_t seed) {
  AugmentConfig aug;
  aug.strategy = cfg.strategy();
  aug.ratio = cfg.delta;
  aug.count = cfg.variants();
  aug.seed = seed;
  if (aug.ratio == 0.0) aug.strategy = AugmentStrategy::None;
  return aug;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::G2gnnEdge: return "g2gnn_edge";
    case Mode::G2gnnNode: return "g2gnn_node";
    case Mode::GinPlain: return "gin_plain";
    case Mode::GinUpsample: return "gin_up";
    case Mode::GinReweight: return "gin_rw";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::G2gnnEdge, Mode::G2gnnNode, Mode::GinPlain, Mode::GinUpsample, Mode::GinReweight})
    if (to_string(m) == text) return m;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

AugmentStrategy TrainConfig::strategy() const {
  switch (mode) {
    case Mode::G2gnnEdge: return AugmentStrategy::RemoveEdges;
    case Mode::G2gnnNode: return AugmentStrategy::MaskNodeFeatures;
    default: return AugmentStrategy::None;
  }
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid train config: " + what); };
  if (uses_gog()) {
    if (k < 1) fail("k must be >= 1");
    if (prop_layers < 0) fail("prop_layers must be >= 0");
    if (!(delta >= 0.0 && delta < 1.0)) fail("delta must lie in [0, 1)");
    if (augment_count < 1) fail("T must be >= 1");
    if (!(tau > 0.0)) fail("tau must be > 0");
  }
  if (!(lr > 0.0)) fail("lr must be > 0");
  if (weight_decay < 0.0) fail("weight_decay must be >= 0");
  if (hidden_dim < 1) fail("hidden_dim must be >= 1");
  if (encoder_layers < 1) fail("encoder_layers must be >= 1");
  if (epochs < 1) fail("epochs must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (patience < 1) fail("patience must be >= 1");
  if (max_steps < 0) fail("max_steps must be >= 0");
}

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> out(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < probs.cols(); ++c)
      if (probs(i, c) > probs(i, best)) best = c;
    out[i] = static_cast<int>(best);
  }
  return out;
}

Matrix predict_proba(const nn::GraphClassifier& model, const Dataset& dataset, std::span<const int> graphs,
                     const GoGraph* gog, const TrainConfig& cfg, std::uint64_t seed) {
  if (cfg.uses_gog() && gog == nullptr) throw std::invalid_argument("G2GNN prediction requires a GoG");
  FlushDenormals flush;
  const auto C = static_cast<Eigen::Index>(dataset.num_classes);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(graphs.size()), C);
  const auto aug = augment_config(cfg, seed);
  const std::size_t chunk = static_cast<std::size_t>(cfg.batch_size);
  for (std::size_t start = 0, b = 0; start < graphs.size(); start += chunk, ++b) {
    auto members = graphs.subspan(start, std::min(chunk, graphs.size() - start));
    Forward f = forward_group(model, dataset, members, gog, cfg, aug, 0, b);
    Matrix probs = nn::softmax_rows(f.logits).value();
    std::unordered_map<int, std::size_t> local;
    for (std::size_t i = 0; i < f.nodes.size(); ++i) local.emplace(f.nodes[i], i);
    const auto m = f.nodes.size();
    for (std::size_t r = 0; r < members.size(); ++r) {
      const auto i = local.at(members[r]);
      RowVector avg = RowVector::Zero(C);
      for (int t = 0; t < f.variants; ++t) avg += probs.row(static_cast<Eigen::Index>(t * m + i));
      out.row(static_cast<Eigen::Index>(start + r)) = avg / static_cast<double>(f.variants);
    }
  }
  return out;
}

std::vector<int> predict(const nn::GraphClassifier& model, const Dataset& dataset, std::span<const int> graphs,
                         const GoGraph* gog, const TrainConfig& cfg, std::uint64_t seed) {
  return argmax_rows(predict_proba(model, dataset, graphs, gog, cfg, seed));
}

TrainResult train(const Dataset& dataset, const Split& split, const GoGraph* gog, const TrainConfig& cfg) {
  cfg.validate();
  FlushDenormals flush;
  if (split.train.empty()) throw std::invalid_argument("train: empty training split");
  if (cfg.uses_gog()) {
    if (gog == nullptr) throw std::invalid_argument("train: G2GNN modes require a GoG");
    if (gog->num_nodes != static_cast<int>(dataset.size()))
      throw std::invalid_argument("train: GoG size does not match dataset");
  }

  nn::GraphClassifier::Shape shape;
  shape.in_dim = dataset.feature_dim();
  shape.hidden_dim = cfg.hidden_dim;
  shape.encoder_layers = cfg.encoder_layers;
  shape.num_classes = dataset.num_classes;
  shape.epsilon = cfg.epsilon;
  TrainResult result{nn::GraphClassifier(shape, derive_seed(cfg.seed, {kInitStream})), {}, {}, -1, -1.0};
  auto& model = result.model;

  std::vector<nn::Tensor> params;
  for (const auto& p : model.parameters()) params.push_back(p.tensor);
  nn::Adam optimizer(params, {cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});

  const auto labels = dataset.labels();
  const Split effective = cfg.upsamples() ? upsample_minority(split, dataset) : split;
  const std::vector<int> train_items = effective.expanded_train();
  const std::vector<int> val_items = effective.expanded_val();
  const std::vector<int> val_unique = unique_in_order(val_items);

  LossOptions loss_options;
  loss_options.tau = cfg.tau;
  loss_options.consistency = cfg.uses_gog();
  loss_options.grad_through_center = cfg.grad_through_center;
  if (cfg.reweights()) {
    std::vector<double> counts(static_cast<std::size_t>(dataset.num_classes), 0.0);
    for (int g : train_items) counts[labels[g]] += 1.0;
    loss_options.class_weights.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c)
      loss_options.class_weights[c] = counts[c] > 0 ? static_cast<double>(train_items.size()) / counts[c] : 0.0;
  }
  const auto aug = augment_config(cfg, derive_seed(cfg.seed, {kAugmentStream}));

  auto best_state = model.state();
  int since_best = 0;
  std::int64_t steps = 0;
  bool step_limit_hit = false;
  const std::size_t bs = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs && !step_limit_hit; ++epoch) {
    std::vector<int> order = train_items;
    Rng shuffle_rng(derive_seed(cfg.seed, {kShuffleStream, static_cast<std::uint64_t>(epoch)}));
    shuffle_rng.shuffle(std::span<int>(order));

    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0, b = 0; start < order.size(); start += bs, ++b) {
      std::span<const int> batch(order.data() + start, std::min(bs, order.size() - start));
      Forward f = forward_group(model, dataset, batch, gog, cfg, aug, static_cast<std::uint64_t>(epoch), b);

      std::unordered_map<int, int> local;
      for (std::size_t i = 0; i < f.nodes.size(); ++i) local.emplace(f.nodes[i], static_cast<int>(i));
      const int m = static_cast<int>(f.nodes.size());
      LossLayout layout;
      for (int g : batch) {
        std::vector<int> rows;
        for (int t = 0; t < f.variants; ++t) rows.push_back(t * m + local.at(g));
        layout.variant_rows.push_back(std::move(rows));
        layout.labels.push_back(labels[g]);
      }
      LossTerms loss = total_loss(f.logits, layout, loss_options);
      const double value = loss.total.item();
      if (!std::isfinite(value))
        throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                 std::to_string(b) + " (supervised " + std::to_string(loss.supervised) +
                                 ", consistency " + std::to_string(loss.consistency) + ")");
      loss.total.backward();
      optimizer.step();
      result.step_losses.push_back(value);
      loss_sum += value;
      ++batches;
      if (cfg.max_steps > 0 && ++steps >= cfg.max_steps) {
        step_limit_hit = true;
        break;
      }
    }

    EpochRecord rec{epoch, loss_sum / std::max(batches, 1), 0.0};
    if (!val_unique.empty()) {
      auto pred = predict(model, dataset, val_unique, gog, cfg,
                          derive_seed(cfg.seed, {kValidationStream, static_cast<std::uint64_t>(epoch)}));
      std::unordered_map<int, int> by_graph;
      for (std::size_t i = 0; i < val_unique.size(); ++i) by_graph[val_unique[i]] = pred[i];
      std::vector<int> p, t;
      for (int g : val_items) {
        p.push_back(by_graph.at(g));
        t.push_back(labels[g]);
      }
      rec.val_f1_macro = f1_scores(p, t, dataset.num_classes).macro;
    }
    result.history.push_back(rec);

    if (rec.val_f1_macro > result.best_val_f1) {
      result.best_val_f1 = rec.val_f1_macro;
      result.best_epoch = epoch;
      best_state = model.state();
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  model.load_state(best_state);
  return result;
}

}  // namespace gog
