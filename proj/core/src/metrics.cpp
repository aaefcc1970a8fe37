#include "gog/metrics.hpp"

#include <stdexcept>
#include <vector>

namespace gog {

F1Scores f1_scores(std::span<const int> pred, std::span<const int> truth, int num_classes) {
  if (pred.size() != truth.size()) throw std::invalid_argument("f1_scores: length mismatch");
  if (pred.empty()) throw std::invalid_argument("f1_scores: empty input");
  if (num_classes < 1) throw std::invalid_argument("f1_scores: num_classes must be >= 1");
  std::vector<double> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  double correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int p = pred[i], t = truth[i];
    if (p < 0 || p >= num_classes || t < 0 || t >= num_classes) throw std::invalid_argument("f1_scores: bad class");
    if (p == t) {
      tp[p] += 1;
      correct += 1;
    } else {
      fp[p] += 1;
      fn[t] += 1;
    }
  }
  F1Scores s;
  for (int c = 0; c < num_classes; ++c) {
    const double denom = 2 * tp[c] + fp[c] + fn[c];
    s.macro += denom > 0 ? 2 * tp[c] / denom : 0.0;
  }
  s.macro /= num_classes;
  s.micro = correct / static_cast<double>(pred.size());
  return s;
}

}  // namespace gog
