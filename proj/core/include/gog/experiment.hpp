#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gog/trainer.hpp"

namespace gog {

struct SplitProtocol {
  int ratio_minority = 1;
  int ratio_majority = 9;
  /// Training budget as a fraction of the dataset, used when train_size is unset.
  double train_fraction = 0.25;
  std::optional<int> train_size;
  /// Validation size relative to the training size.
  double val_fraction = 1.0;
  /// Defaults to the smallest class.
  std::optional<int> minority_class;

  /// {minority, majority} training counts for a dataset of n graphs.
  std::pair<int, int> train_counts(std::size_t n) const;
  std::string ratio_string() const;
};

struct SplitResult {
  int index = 0;
  std::uint64_t seed = 0;
  double f1_macro = 0.0;
  double f1_micro = 0.0;
  int best_epoch = -1;
  double seconds = 0.0;
  std::vector<EpochRecord> history;
};

struct ExperimentReport {
  std::string dataset;
  std::string kernel;  ///< empty for GIN baselines
  TrainConfig config;
  SplitProtocol protocol;
  std::vector<SplitResult> per_split;
  double mean_f1_macro = 0.0;
  double std_f1_macro = 0.0;
  double mean_f1_micro = 0.0;
  double std_f1_micro = 0.0;
  double runtime_s = 0.0;

  /// Timing fields are omitted when include_timing is false so reports can
  /// be compared byte-for-byte.
  std::string to_json(bool include_timing = true) const;
  /// One row per split.
  std::string to_csv(bool include_timing = true) const;
  /// epoch,train_loss,val_f1_macro with a leading split column.
  std::string history_csv() const;
};

/// Population mean and standard deviation (std = 0 for a single value).
std::pair<double, double> mean_std(const std::vector<double>& values);

/// For each split s: draws an imbalanced split with seed derive(cfg.seed,
/// {100, s}), trains with seed derive(cfg.seed, {200, s}) and scores the
/// test set. Splits run on up to `workers` threads; results do not depend
/// on the worker count.
ExperimentReport run_experiment(const Dataset& dataset, const GoGraph* gog, const TrainConfig& cfg, int n_splits,
                                const SplitProtocol& protocol, int workers = 1);

}  // namespace gog
