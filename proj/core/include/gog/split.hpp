#pragma once

#include <cstdint>
#include <vector>

#include "gog/graph.hpp"

namespace gog {

/// Train/val/test partition of a dataset. The *_counts vectors hold the
/// repetition count of each entry in train/val (all 1 before up-sampling).
struct Split {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
  std::vector<int> train_counts;
  std::vector<int> val_counts;
  std::uint64_t seed = 0;

  /// Train indices with each entry repeated train_counts[i] times.
  std::vector<int> expanded_train() const;
  std::vector<int> expanded_val() const;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Per-class train and validation sizes.
struct ClassBudget {
  std::vector<int> train;
  std::vector<int> val;
};

/// Uniform-random selection of exactly budget.train[c] training graphs and
/// budget.val[c] validation graphs of class c; everything else goes to test.
/// Throws DataError naming the class and the shortfall if a class is short.
Split make_split(const Dataset& dataset, const ClassBudget& budget, std::uint64_t seed);

/// Binary protocol: `n_minority_train` graphs of `minority_class` and
/// `n_majority_train` of the other class. The validation set mirrors the
/// ratio with round(val_fraction * train_size) graphs, minority rounded down.
Split make_imbalanced_split(const Dataset& dataset, int minority_class, int n_minority_train,
                            int n_majority_train, double val_fraction, std::uint64_t seed);

/// Minority-first rounding of a train budget under a ratio a:b.
/// Returns {floor(budget*a/(a+b)), budget - that}.
std::pair<int, int> ratio_counts(int budget, int a, int b);

/// Index of the class with the fewest graphs (lowest index on ties).
int smallest_class(const Dataset& dataset);

/// Sets train_counts/val_counts so every class reaches the size of the
/// largest class, distributing the remainder round-robin.
Split upsample_minority(const Split& split, const Dataset& dataset);

}  // namespace gog
