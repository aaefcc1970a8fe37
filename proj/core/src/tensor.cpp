#include "gog/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace gog::nn {

using detail::Node;

void Node::accumulate(const Matrix& g) { accumulate_expr(g); }

Tensor::Tensor() : node_(std::make_shared<Node>()) {}

Tensor::Tensor(Matrix value, bool requires_grad) : node_(std::make_shared<Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

const Matrix& Tensor::value() const { return node_->value; }
Matrix& Tensor::mutable_value() { return node_->value; }
bool Tensor::requires_grad() const { return node_->requires_grad; }
bool Tensor::has_grad() const { return node_->grad.size() != 0; }

double Tensor::item() const {
  if (value().size() != 1) throw std::logic_error("item() on a non-scalar tensor");
  return value()(0, 0);
}

const Matrix& Tensor::grad() const {
  if (!has_grad()) throw std::logic_error("tensor has no gradient");
  return node_->grad;
}

Tensor Tensor::detach() const { return Tensor(node_->value, false); }

void Tensor::backward() const {
  if (value().rows() != 1 || value().cols() != 1)
    throw std::logic_error("backward() requires a scalar (1 x 1) tensor, got " + std::to_string(value().rows()) +
                           " x " + std::to_string(value().cols()));
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node* n : order) n->grad.resize(0, 0);
  node_->grad = Matrix::Ones(1, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop && n->grad.size() != 0) n->backprop(*n);
  }
}

namespace {

Tensor make_result(Matrix value, std::vector<std::shared_ptr<Node>> inputs, std::function<void(Node&)> backprop) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  bool needs = false;
  for (const auto& in : inputs) needs = needs || in->requires_grad;
  if (needs) {
    node->requires_grad = true;
    node->inputs = std::move(inputs);
    node->backprop = std::move(backprop);
  }
  return Tensor(std::move(node));
}

void require(bool ok, const char* op, const std::string& msg) {
  if (!ok) throw std::invalid_argument(std::string(op) + ": " + msg);
}

std::string dims(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require(a.cols() == b.rows(), "matmul", "shape mismatch " + dims(a.value()) + " * " + dims(b.value()));
  Matrix out = a.value() * b.value();
  return make_result(std::move(out), {a.node(), b.node()}, [](Node& self) {
    Node& x = *self.inputs[0];
    Node& w = *self.inputs[1];
    if (x.requires_grad) x.accumulate_expr(self.grad * w.value.transpose());
    if (w.requires_grad) w.accumulate_expr(x.value.transpose() * self.grad);
  });
}

Tensor add_row(const Tensor& x, const Tensor& bias) {
  require(bias.rows() == 1 && bias.cols() == x.cols(), "add_row",
          "bias " + dims(bias.value()) + " vs input " + dims(x.value()));
  Matrix out = x.value().rowwise() + bias.value().row(0);
  return make_result(std::move(out), {x.node(), bias.node()}, [](Node& self) {
    self.inputs[0]->accumulate(self.grad);
    self.inputs[1]->accumulate_expr(self.grad.colwise().sum());
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), "add", "shape mismatch " + dims(a.value()) + " + " + dims(b.value()));
  return make_result(a.value() + b.value(), {a.node(), b.node()}, [](Node& self) {
    self.inputs[0]->accumulate(self.grad);
    self.inputs[1]->accumulate(self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), "sub", "shape mismatch " + dims(a.value()) + " - " + dims(b.value()));
  return make_result(a.value() - b.value(), {a.node(), b.node()}, [](Node& self) {
    self.inputs[0]->accumulate(self.grad);
    self.inputs[1]->accumulate_expr(-self.grad);
  });
}

Tensor scale(const Tensor& x, double factor) {
  return make_result(x.value() * factor, {x.node()},
                     [factor](Node& self) { self.inputs[0]->accumulate_expr(self.grad * factor); });
}

Tensor relu(const Tensor& x) {
  return make_result(x.value().cwiseMax(0.0), {x.node()}, [](Node& self) {
    const Matrix& in = self.inputs[0]->value;
    self.inputs[0]->accumulate_expr((in.array() > 0.0).select(self.grad, 0.0));
  });
}

Tensor spmm(std::shared_ptr<const SparseMatrix> m, const Tensor& x) {
  require(m->cols() == x.rows(), "spmm", "sparse " + std::to_string(m->rows()) + "x" + std::to_string(m->cols()) +
                                            " * " + dims(x.value()));
  Matrix out = (*m) * x.value();
  return make_result(std::move(out), {x.node()},
                     [m](Node& self) { self.inputs[0]->accumulate_expr(m->transpose() * self.grad); });
}

Tensor spmm(const SparseMatrix& m, const Tensor& x) { return spmm(std::make_shared<const SparseMatrix>(m), x); }

Tensor gather_rows(const Tensor& x, std::span<const int> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r] >= 0 && rows[r] < x.rows(), "gather_rows", "row index out of range");
    out.row(static_cast<Eigen::Index>(r)) = x.value().row(rows[r]);
  }
  std::vector<int> idx(rows.begin(), rows.end());
  return make_result(std::move(out), {x.node()}, [idx = std::move(idx)](Node& self) {
    Node& in = *self.inputs[0];
    Matrix g = Matrix::Zero(in.value.rows(), in.value.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) g.row(idx[r]) += self.grad.row(static_cast<Eigen::Index>(r));
    in.accumulate(g);
  });
}

Tensor sum_rows(const Tensor& x) {
  require(x.rows() >= 1, "sum_rows", "empty input");
  Matrix out = x.value().colwise().sum();
  return make_result(std::move(out), {x.node()}, [](Node& self) {
    const auto n = self.inputs[0]->value.rows();
    self.inputs[0]->accumulate_expr(self.grad.replicate(n, 1));
  });
}

Tensor sum_all(const Tensor& x) {
  return make_result(Matrix::Constant(1, 1, x.value().sum()), {x.node()}, [](Node& self) {
    const Matrix& in = self.inputs[0]->value;
    self.inputs[0]->accumulate_expr(Matrix::Constant(in.rows(), in.cols(), self.grad(0, 0)));
  });
}

Tensor mean_all(const Tensor& x) {
  require(x.value().size() > 0, "mean_all", "empty input");
  return scale(sum_all(x), 1.0 / static_cast<double>(x.value().size()));
}

Tensor softmax_rows(const Tensor& x) {
  Matrix y = x.value();
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    y.row(i).array() -= y.row(i).maxCoeff();
    y.row(i) = y.row(i).array().exp();
    y.row(i) /= y.row(i).sum();
  }
  Matrix saved = y;
  return make_result(std::move(y), {x.node()}, [y = std::move(saved)](Node& self) {
    Eigen::VectorXd dot = (self.grad.array() * y.array()).rowwise().sum();
    Matrix g = y.array() * (self.grad.colwise() - dot).array();
    self.inputs[0]->accumulate(g);
  });
}

Tensor row_norms(const Tensor& x) {
  Matrix out = x.value().rowwise().norm();
  Matrix saved = out;
  return make_result(std::move(out), {x.node()}, [norms = std::move(saved)](Node& self) {
    const Matrix& in = self.inputs[0]->value;
    Matrix g = Matrix::Zero(in.rows(), in.cols());
    for (Eigen::Index i = 0; i < in.rows(); ++i)
      if (norms(i, 0) > 0.0) g.row(i) = in.row(i) * (self.grad(i, 0) / norms(i, 0));
    self.inputs[0]->accumulate(g);
  });
}

Tensor sharpen_rows(const Tensor& x, double tau) {
  require(tau > 0.0, "sharpen_rows", "tau must be positive");
  if (tau == 1.0) return x;
  Matrix powered = x.value().array().pow(tau);
  Eigen::VectorXd sums = powered.rowwise().sum();
  for (Eigen::Index i = 0; i < sums.size(); ++i)
    require(sums[i] > 0.0, "sharpen_rows", "row " + std::to_string(i) + " sums to zero");
  Matrix y = powered.array().colwise() / sums.array();
  Matrix saved = y;
  return make_result(std::move(y), {x.node()}, [y = std::move(saved), tau](Node& self) {
    const Matrix& in = self.inputs[0]->value;
    Eigen::VectorXd dot = (self.grad.array() * y.array()).rowwise().sum();
    Matrix g = Matrix::Zero(in.rows(), in.cols());
    for (Eigen::Index i = 0; i < in.rows(); ++i)
      for (Eigen::Index j = 0; j < in.cols(); ++j)
        if (in(i, j) > 0.0) g(i, j) = tau * y(i, j) / in(i, j) * (self.grad(i, j) - dot[i]);
    self.inputs[0]->accumulate(g);
  });
}

Tensor softmax_cross_entropy(const Tensor& logits, std::span<const int> labels, std::span<const double> class_weights,
                             double prob_floor) {
  const Matrix& z = logits.value();
  require(static_cast<Eigen::Index>(labels.size()) == z.rows(), "softmax_cross_entropy", "label count mismatch");
  require(z.rows() > 0, "softmax_cross_entropy", "empty batch");
  if (!z.allFinite()) throw std::domain_error("softmax_cross_entropy: non-finite logits");
  const double log_floor = std::log(prob_floor);

  Matrix probs(z.rows(), z.cols());
  Eigen::VectorXd w(z.rows());
  double loss = 0.0, total_w = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    require(y >= 0 && y < z.cols(), "softmax_cross_entropy", "label out of range");
    const double m = z.row(i).maxCoeff();
    const double lse = m + std::log((z.row(i).array() - m).exp().sum());
    probs.row(i) = (z.row(i).array() - lse).exp();
    const double logp = std::max(z(i, y) - lse, log_floor);
    w[i] = class_weights.empty() ? 1.0 : class_weights[static_cast<std::size_t>(y)];
    loss -= w[i] * logp;
    total_w += w[i];
  }
  require(total_w > 0.0, "softmax_cross_entropy", "total weight is zero");
  std::vector<int> ys(labels.begin(), labels.end());
  return make_result(
      Matrix::Constant(1, 1, loss / total_w), {logits.node()},
      [probs = std::move(probs), w, total_w, ys = std::move(ys)](Node& self) {
        // The floor bounds the reported value only; a confidently wrong row
        // keeps its full softmax gradient.
        Matrix g = probs;
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
          g(i, ys[static_cast<std::size_t>(i)]) -= 1.0;
          g.row(i) *= w[i] / total_w;
        }
        self.inputs[0]->accumulate_expr(g * self.grad(0, 0));
      });
}

}  // namespace gog::nn
