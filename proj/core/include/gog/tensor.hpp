#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gog/types.hpp"

namespace gog::nn {

namespace detail {
struct Node;
}

/// Handle to a node of a reverse-mode computation graph. Every tensor is a
/// row-major 2-D array; vectors are 1 x d and scalars 1 x 1. Copies share
/// the node. Ops on inputs that do not require gradients build no graph.
class Tensor {
 public:
  Tensor();
  explicit Tensor(Matrix value, bool requires_grad = false);

  /// Leaf that receives gradients.
  static Tensor parameter(Matrix value) { return Tensor(std::move(value), true); }
  static Tensor scalar(double v) { return Tensor(Matrix::Constant(1, 1, v)); }

  const Matrix& value() const;
  /// In-place access for optimizers; does not touch the recorded graph.
  Matrix& mutable_value();
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  std::array<Eigen::Index, 2> shape() const { return {rows(), cols()}; }
  double item() const;

  bool requires_grad() const;
  bool has_grad() const;
  /// Gradient from the most recent backward(); throws if none was recorded.
  const Matrix& grad() const;

  /// Reverse pass from a 1 x 1 tensor. Gradients of every node reachable
  /// from this one are reset before accumulation.
  void backward() const;

  /// Same value, cut from the graph.
  Tensor detach() const;

  /// Internal: used by op implementations.
  const std::shared_ptr<detail::Node>& node() const { return node_; }
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<detail::Node> node_;
};

namespace detail {
struct Node {
  Matrix value;
  Matrix grad;  // empty until the first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backprop;

  void accumulate(const Matrix& g);
  template <typename Expr>
  void accumulate_expr(const Expr& g) {
    if (!requires_grad) return;
    if (grad.size() == 0)
      grad = g;
    else
      grad += g;
  }
};
}  // namespace detail

Tensor matmul(const Tensor& a, const Tensor& b);
/// x + bias with bias (1 x d) broadcast over rows.
Tensor add_row(const Tensor& x, const Tensor& bias);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double factor);
Tensor relu(const Tensor& x);
/// Constant sparse matrix times tensor.
Tensor spmm(std::shared_ptr<const SparseMatrix> m, const Tensor& x);
Tensor spmm(const SparseMatrix& m, const Tensor& x);
/// Rows of x at the given indices (repeats allowed).
Tensor gather_rows(const Tensor& x, std::span<const int> rows);
/// Column sums as a 1 x d tensor.
Tensor sum_rows(const Tensor& x);
Tensor sum_all(const Tensor& x);
Tensor mean_all(const Tensor& x);
Tensor softmax_rows(const Tensor& x);
/// Euclidean norm of each row, n x 1. The gradient at a zero row is zero.
Tensor row_norms(const Tensor& x);
/// y_j = x_j^tau / sum_c x_c^tau per row. tau == 1 returns x unchanged.
Tensor sharpen_rows(const Tensor& x, double tau);

/// Weighted mean of -w_y log softmax(logits)_y over rows, normalized by the
/// total weight. The value clamps probabilities at `prob_floor` inside the
/// log; the gradient is always softmax - onehot.
/// `class_weights` may be empty (all ones). Throws on non-finite logits.
Tensor softmax_cross_entropy(const Tensor& logits, std::span<const int> labels,
                             std::span<const double> class_weights = {}, double prob_floor = 1e-12);

}  // namespace gog::nn
