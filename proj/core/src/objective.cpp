#include "gog/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace gog {

RowVector sharpen(const RowVector& p, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("sharpen: tau must be positive");
  if ((p.array() < 0.0).any()) throw std::invalid_argument("sharpen: negative probability");
  if (tau == 1.0) return p;
  RowVector q = p.array().pow(tau);
  const double total = q.sum();
  if (!(total > 0.0)) throw std::invalid_argument("sharpen: all-zero distribution");
  return q / total;
}

nn::Tensor consistency_loss(const nn::Tensor& probs, const std::vector<std::vector<int>>& variant_rows, double tau,
                            bool grad_through_center) {
  if (variant_rows.empty()) throw std::invalid_argument("consistency_loss: no items");
  std::vector<Triplet> avg;
  std::vector<int> rows, owner;
  for (std::size_t i = 0; i < variant_rows.size(); ++i) {
    const auto& vr = variant_rows[i];
    if (vr.empty()) throw std::invalid_argument("consistency_loss: item without variants");
    const double w = 1.0 / static_cast<double>(vr.size());
    for (int r : vr) {
      avg.emplace_back(static_cast<Eigen::Index>(i), r, w);
      rows.push_back(r);
      owner.push_back(static_cast<int>(i));
    }
  }
  auto averaging = std::make_shared<SparseMatrix>(static_cast<Eigen::Index>(variant_rows.size()), probs.rows());
  averaging->setFromTriplets(avg.begin(), avg.end());

  nn::Tensor center = nn::spmm(averaging, probs);
  if (!grad_through_center) center = center.detach();
  nn::Tensor sharpened = nn::sharpen_rows(center, tau);
  nn::Tensor diffs = nn::sub(nn::gather_rows(probs, rows), nn::gather_rows(sharpened, owner));
  return nn::mean_all(nn::row_norms(diffs));
}

nn::Tensor self_consistency_loss(const nn::Tensor& variant_dists, double tau, bool grad_through_center) {
  std::vector<int> rows(static_cast<std::size_t>(variant_dists.rows()));
  for (std::size_t t = 0; t < rows.size(); ++t) rows[t] = static_cast<int>(t);
  return consistency_loss(variant_dists, {rows}, tau, grad_through_center);
}

LossTerms total_loss(const nn::Tensor& logits, const LossLayout& layout, const LossOptions& options) {
  if (layout.variant_rows.size() != layout.labels.size())
    throw std::invalid_argument("total_loss: one label per item required");
  std::vector<int> rows, labels;
  for (std::size_t i = 0; i < layout.variant_rows.size(); ++i)
    for (int r : layout.variant_rows[i]) {
      rows.push_back(r);
      labels.push_back(layout.labels[i]);
    }
  LossTerms out;
  nn::Tensor supervised = nn::softmax_cross_entropy(nn::gather_rows(logits, rows), labels, options.class_weights);
  out.supervised = supervised.item();
  out.total = supervised;
  if (options.consistency) {
    nn::Tensor probs = nn::softmax_rows(logits);
    nn::Tensor self = consistency_loss(probs, layout.variant_rows, options.tau, options.grad_through_center);
    out.consistency = self.item();
    out.total = nn::add(supervised, self);
  }
  if (!std::isfinite(out.total.item())) throw std::runtime_error("total_loss: non-finite loss");
  return out;
}

}  // namespace gog
