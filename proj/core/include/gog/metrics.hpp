#pragma once

#include <span>

namespace gog {

struct F1Scores {
  double macro = 0.0;
  double micro = 0.0;
};

/// Macro F1 averages per-class F1 over all C classes; a class with no true
/// and no predicted members scores 0. Micro F1 equals accuracy for
/// single-label prediction.
F1Scores f1_scores(std::span<const int> pred, std::span<const int> truth, int num_classes);

}  // namespace gog
