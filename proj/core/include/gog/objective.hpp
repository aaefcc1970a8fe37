#pragma once

#include <span>
#include <vector>

#include "gog/tensor.hpp"

namespace gog {

/// p_j^tau / sum_c p_c^tau. Throws std::invalid_argument on an all-zero
/// input or tau <= 0. tau == 1 returns p unchanged.
RowVector sharpen(const RowVector& p, double tau);

/// Mean over items and variants of || sharpen(mean_t P_t, tau) - P_t ||_2.
/// `variant_rows[i]` lists the rows of `probs` holding item i's variants.
/// Unless grad_through_center is set the sharpened center is a constant.
nn::Tensor consistency_loss(const nn::Tensor& probs, const std::vector<std::vector<int>>& variant_rows, double tau,
                            bool grad_through_center = false);

/// Single-item form: rows of `variant_dists` (T x C) are the variants.
nn::Tensor self_consistency_loss(const nn::Tensor& variant_dists, double tau, bool grad_through_center = false);

/// Supervised rows of a batch: item i is labeled `labels[i]` and its T
/// variant predictions live at logits rows `variant_rows[i]`. Items may
/// repeat (up-sampled graphs).
struct LossLayout {
  std::vector<std::vector<int>> variant_rows;
  std::vector<int> labels;
};

struct LossTerms {
  nn::Tensor total;
  double supervised = 0.0;
  double consistency = 0.0;
};

struct LossOptions {
  double tau = 0.5;
  bool consistency = true;
  bool grad_through_center = false;
  std::vector<double> class_weights;  ///< empty = unweighted
};

/// Cross-entropy averaged over (item, variant) plus, when enabled, the
/// consistency distance averaged the same way, weighted 1:1.
LossTerms total_loss(const nn::Tensor& logits, const LossLayout& layout, const LossOptions& options);

}  // namespace gog
