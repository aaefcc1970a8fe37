#include "gog/split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gog/error.hpp"
#include "gog/random.hpp"

namespace gog {
namespace {

std::vector<int> expand(const std::vector<int>& idx, const std::vector<int>& counts) {
  std::vector<int> out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int reps = i < counts.size() ? counts[i] : 1;
    out.insert(out.end(), static_cast<std::size_t>(reps), idx[i]);
  }
  return out;
}

std::vector<int> balance_counts(const std::vector<int>& idx, const std::vector<int>& labels, int num_classes,
                                const char* which) {
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < idx.size(); ++i) members[labels[idx[i]]].push_back(i);
  std::size_t target = 0;
  for (const auto& m : members) target = std::max(target, m.size());
  std::vector<int> counts(idx.size(), 1);
  if (idx.empty()) return counts;
  for (int c = 0; c < num_classes; ++c) {
    const auto& m = members[c];
    if (m.empty())
      throw DataError(std::string("class ") + std::to_string(c) + " has no " + which + " graphs to up-sample");
    const std::size_t base = target / m.size(), extra = target % m.size();
    for (std::size_t r = 0; r < m.size(); ++r) counts[m[r]] = static_cast<int>(base + (r < extra ? 1 : 0));
  }
  return counts;
}

}  // namespace

std::vector<int> Split::expanded_train() const { return expand(train, train_counts); }
std::vector<int> Split::expanded_val() const { return expand(val, val_counts); }

Split make_split(const Dataset& dataset, const ClassBudget& budget, std::uint64_t seed) {
  const auto C = static_cast<std::size_t>(dataset.num_classes);
  if (budget.train.size() != C || budget.val.size() != C)
    throw std::invalid_argument("class budget must list one count per class");

  std::vector<std::vector<int>> by_class(C);
  for (std::size_t i = 0; i < dataset.size(); ++i) by_class[dataset.graphs[i].label()].push_back(static_cast<int>(i));

  Split split;
  split.seed = seed;
  std::vector<char> used(dataset.size(), 0);
  for (std::size_t c = 0; c < C; ++c) {
    const int need = budget.train[c] + budget.val[c];
    if (budget.train[c] < 0 || budget.val[c] < 0) throw std::invalid_argument("negative class budget");
    const int have = static_cast<int>(by_class[c].size());
    if (need > have)
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(have) + " graphs but " +
                      std::to_string(need) + " are required (short by " + std::to_string(need - have) + ")");
    auto pool = by_class[c];
    Rng rng(derive_seed(seed, {c}));
    rng.shuffle(std::span<int>(pool));
    split.train.insert(split.train.end(), pool.begin(), pool.begin() + budget.train[c]);
    split.val.insert(split.val.end(), pool.begin() + budget.train[c], pool.begin() + need);
    for (int k = 0; k < need; ++k) used[pool[k]] = 1;
  }
  for (std::size_t i = 0; i < dataset.size(); ++i)
    if (!used[i]) split.test.push_back(static_cast<int>(i));
  split.train_counts.assign(split.train.size(), 1);
  split.val_counts.assign(split.val.size(), 1);
  return split;
}

std::pair<int, int> ratio_counts(int budget, int a, int b) {
  if (a < 0 || b < 0 || a + b == 0) throw std::invalid_argument("invalid ratio");
  if (budget < 0) throw std::invalid_argument("negative budget");
  const int minority = static_cast<int>((static_cast<long long>(budget) * a) / (a + b));
  return {minority, budget - minority};
}

int smallest_class(const Dataset& dataset) {
  const auto hist = compute_stats(dataset).class_histogram;
  return static_cast<int>(std::min_element(hist.begin(), hist.end()) - hist.begin());
}

Split make_imbalanced_split(const Dataset& dataset, int minority_class, int n_minority_train, int n_majority_train,
                            double val_fraction, std::uint64_t seed) {
  if (dataset.num_classes != 2) throw std::invalid_argument("imbalanced split protocol requires C = 2");
  if (minority_class < 0 || minority_class > 1) throw std::invalid_argument("minority class must be 0 or 1");
  if (val_fraction < 0) throw std::invalid_argument("val_fraction must be >= 0");
  const int val_total = static_cast<int>(std::lround(val_fraction * (n_minority_train + n_majority_train)));
  const auto [val_min, val_maj] = ratio_counts(val_total, n_minority_train, n_majority_train);
  ClassBudget budget{{0, 0}, {0, 0}};
  budget.train[minority_class] = n_minority_train;
  budget.train[1 - minority_class] = n_majority_train;
  budget.val[minority_class] = val_min;
  budget.val[1 - minority_class] = val_maj;
  return make_split(dataset, budget, seed);
}

Split upsample_minority(const Split& split, const Dataset& dataset) {
  if (split.train.empty()) throw DataError("cannot up-sample an empty training set");
  const auto labels = dataset.labels();
  Split out = split;
  out.train_counts = balance_counts(split.train, labels, dataset.num_classes, "training");
  if (!split.val.empty()) out.val_counts = balance_counts(split.val, labels, dataset.num_classes, "validation");
  return out;
}

}  // namespace gog
