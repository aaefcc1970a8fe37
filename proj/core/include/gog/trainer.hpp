#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gog/augment.hpp"
#include "gog/kernel.hpp"
#include "gog/nn.hpp"
#include "gog/split.hpp"

namespace gog {

enum class Mode { G2gnnEdge, G2gnnNode, GinPlain, GinUpsample, GinReweight };

/// CLI spellings: g2gnn_edge, g2gnn_node, gin_plain, gin_up, gin_rw.
std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct TrainConfig {
  Mode mode = Mode::G2gnnNode;
  int k = 3;
  int prop_layers = 2;
  double delta = 0.1;
  int augment_count = 2;  ///< T
  double tau = 0.5;
  double lr = 0.01;
  double weight_decay = 0.0;
  int hidden_dim = 128;
  int encoder_layers = 2;
  double epsilon = 0.0;
  int epochs = 500;
  int batch_size = 32;
  int patience = 50;
  std::uint64_t seed = 0;
  bool grad_through_center = false;
  /// Stop after this many optimizer steps (0 = no limit).
  int max_steps = 0;

  bool uses_gog() const { return mode == Mode::G2gnnEdge || mode == Mode::G2gnnNode; }
  bool upsamples() const { return uses_gog() || mode == Mode::GinUpsample; }
  bool reweights() const { return mode == Mode::GinReweight; }
  AugmentStrategy strategy() const;
  /// Variants per graph actually used (1 for the GIN baselines).
  int variants() const { return uses_gog() ? augment_count : 1; }

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_f1_macro = 0.0;
};

struct TrainResult {
  nn::GraphClassifier model;
  std::vector<EpochRecord> history;
  std::vector<double> step_losses;
  int best_epoch = -1;
  double best_val_f1 = -1.0;
};

/// Mini-batch training. Up-sampling modes first balance the train and
/// validation multisets with upsample_minority. G2GNN modes pull
/// each batch member's top-k neighbors into the batch, encode T augmented
/// variants, propagate them over the induced sub-GoG and add the
/// consistency term; loss terms come from labeled members only. The model
/// with the best validation F1-macro (on the expanded validation multiset)
/// is returned. `gog` may be null for the GIN baselines.
TrainResult train(const Dataset& dataset, const Split& split, const GoGraph* gog, const TrainConfig& cfg);

/// Class distributions (rows follow `graphs`) averaged over the T variants.
Matrix predict_proba(const nn::GraphClassifier& model, const Dataset& dataset, std::span<const int> graphs,
                     const GoGraph* gog, const TrainConfig& cfg, std::uint64_t seed);

/// argmax of predict_proba, ties to the lower class index.
std::vector<int> predict(const nn::GraphClassifier& model, const Dataset& dataset, std::span<const int> graphs,
                         const GoGraph* gog, const TrainConfig& cfg, std::uint64_t seed);

std::vector<int> argmax_rows(const Matrix& probs);

}  // namespace gog
