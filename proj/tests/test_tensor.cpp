#include <gtest/gtest.h>

#include <cmath>

#include "gog/random.hpp"
#include "gog/tensor.hpp"

namespace gog::nn {
namespace {

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

/// Central differences, written independently of the library's gradcheck.
Matrix fd_gradient(const std::function<double()>& f, Tensor& x, double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.value().size(); ++i) {
    double& v = x.mutable_value().data()[i];
    const double saved = v;
    v = saved + h;
    const double up = f();
    v = saved - h;
    const double down = f();
    v = saved;
    g.data()[i] = (up - down) / (2 * h);
  }
  return g;
}

void expect_grad_matches(const std::function<Tensor()>& loss, std::vector<Tensor> inputs, double tol = 1e-4) {
  loss().backward();
  for (auto& x : inputs) {
    const Matrix analytic = x.grad();
    const Matrix numeric = fd_gradient([&] { return loss().item(); }, x);
    const double rel = (analytic - numeric).norm() / std::max({analytic.norm(), numeric.norm(), 1e-12});
    EXPECT_LT(rel, tol) << "analytic\n" << analytic << "\nnumeric\n" << numeric;
  }
}

TEST(Backward, SquareAtThree) {
  Tensor x = Tensor::parameter(Matrix::Constant(1, 1, 3.0));
  Tensor loss = sum_all(matmul(x, x));
  loss.backward();
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 6.0);
}

TEST(Backward, NonScalarThrows) {
  Tensor x = Tensor::parameter(Matrix::Ones(2, 2));
  EXPECT_THROW(relu(x).backward(), std::logic_error);
}

TEST(Backward, DetachedInputsGetNoGrad) {
  Tensor x = Tensor::parameter(Matrix::Ones(2, 2));
  Tensor c(Matrix::Ones(2, 2));
  Tensor loss = sum_all(add(x.detach(), c));
  loss.backward();
  EXPECT_FALSE(x.has_grad());
  EXPECT_FALSE(c.has_grad());
}

TEST(Backward, GradientsResetBetweenPasses) {
  Tensor x = Tensor::parameter(Matrix::Constant(1, 1, 2.0));
  for (int i = 0; i < 3; ++i) {
    scale(x, 5.0).backward();
    EXPECT_DOUBLE_EQ(x.grad()(0, 0), 5.0);
  }
}

TEST(Backward, SharedSubexpressionAccumulates) {
  Tensor x = Tensor::parameter(Matrix::Constant(1, 1, 2.0));
  Tensor y = scale(x, 3.0);
  add(y, y).backward();
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 6.0);
}

TEST(Gradients, TwoLayerMlp) {
  Rng rng(1);
  Tensor x(random_matrix(rng, 4, 3));
  Tensor w1 = Tensor::parameter(random_matrix(rng, 3, 5));
  Tensor b1 = Tensor::parameter(random_matrix(rng, 1, 5));
  Tensor w2 = Tensor::parameter(random_matrix(rng, 5, 2));
  Tensor b2 = Tensor::parameter(random_matrix(rng, 1, 2));
  std::vector<int> labels{0, 1, 1, 0};
  expect_grad_matches(
      [&] { return softmax_cross_entropy(add_row(matmul(relu(add_row(matmul(x, w1), b1)), w2), b2), labels); },
      {w1, b1, w2, b2});
}

TEST(Gradients, ElementwiseAndReductions) {
  Rng rng(2);
  Tensor a = Tensor::parameter(random_matrix(rng, 3, 4));
  Tensor b = Tensor::parameter(random_matrix(rng, 3, 4));
  Tensor probe(random_matrix(rng, 4, 1));
  expect_grad_matches([&] { return mean_all(row_norms(sub(scale(a, 1.7), b))); }, {a, b});
  expect_grad_matches([&] { return sum_all(matmul(sum_rows(relu(a)), probe)); }, {a});
}

TEST(Gradients, SparseProductAndGather) {
  Rng rng(3);
  auto m = std::make_shared<SparseMatrix>(3, 4);
  std::vector<Triplet> t{{0, 0, 1.5}, {0, 3, -0.5}, {1, 1, 2.0}, {2, 2, 0.25}, {2, 0, 1.0}};
  m->setFromTriplets(t.begin(), t.end());
  Tensor x = Tensor::parameter(random_matrix(rng, 4, 2));
  Tensor probe(random_matrix(rng, 2, 1));
  std::vector<int> rows{2, 0, 2, 1};
  expect_grad_matches([&] { return sum_all(matmul(gather_rows(spmm(m, x), rows), probe)); }, {x});
}

TEST(Gradients, SoftmaxAndSharpen) {
  Rng rng(4);
  Tensor z = Tensor::parameter(random_matrix(rng, 3, 4, 2.0));
  Tensor probe(random_matrix(rng, 4, 1));
  expect_grad_matches([&] { return sum_all(matmul(softmax_rows(z), probe)); }, {z});
  for (double tau : {0.5, 2.0, 1.0})
    expect_grad_matches([&] { return sum_all(matmul(sharpen_rows(softmax_rows(z), tau), probe)); }, {z});
}

TEST(Gradients, WeightedCrossEntropy) {
  Rng rng(5);
  Tensor z = Tensor::parameter(random_matrix(rng, 5, 3, 2.0));
  std::vector<int> labels{0, 2, 1, 1, 0};
  std::vector<double> w{0.5, 3.0, 1.25};
  expect_grad_matches([&] { return softmax_cross_entropy(z, labels, w); }, {z});
}

TEST(Softmax, RowsSumToOne) {
  Rng rng(6);
  const Matrix p = softmax_rows(Tensor(random_matrix(rng, 20, 5, 50.0))).value();
  for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
  EXPECT_GE(p.minCoeff(), 0.0);
}

TEST(CrossEntropy, UniformLogits) {
  const std::vector<int> y{0};
  EXPECT_NEAR(softmax_cross_entropy(Tensor(Matrix::Zero(1, 2)), y).item(), std::log(2.0), 1e-15);
}

TEST(CrossEntropy, LargeLogitsAreStable) {
  Matrix z(1, 2);
  z << 1000.0, 0.0;
  const std::vector<int> y0{0}, y1{1};
  EXPECT_NEAR(softmax_cross_entropy(Tensor(z), y0).item(), 0.0, 1e-12);
  Tensor wrong = Tensor::parameter(z);
  const double v = softmax_cross_entropy(wrong, y1).item();
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, -std::log(1e-12), 1e-9);
  softmax_cross_entropy(wrong, y1).backward();
  EXPECT_NEAR(wrong.grad()(0, 0), 1.0, 1e-12);  // still pushes the wrong logit down
  EXPECT_NEAR(wrong.grad()(0, 1), -1.0, 1e-12);
}

TEST(CrossEntropy, NonFiniteLogitsThrow) {
  Matrix z(1, 2);
  z << std::nan(""), 0.0;
  const std::vector<int> y{0};
  EXPECT_THROW(softmax_cross_entropy(Tensor(z), y), std::domain_error);
}

TEST(CrossEntropy, InverseFrequencyWeights) {
  // Batch of 9 majority (class 0) rows and 1 minority row, weights 1 : 9.
  Tensor z = Tensor::parameter(Matrix::Zero(10, 2));
  std::vector<int> y(10, 0);
  y[9] = 1;
  const std::vector<double> w{1.0, 9.0};
  softmax_cross_entropy(z, y, w).backward();
  EXPECT_NEAR(z.grad().row(9).norm() / z.grad().row(0).norm(), 9.0, 1e-12);
}

TEST(RowNorms, ZeroRowHasZeroGradient) {
  Tensor x = Tensor::parameter(Matrix::Zero(2, 3));
  x.mutable_value().row(1) << 3.0, 4.0, 0.0;
  sum_all(row_norms(x)).backward();
  EXPECT_EQ(x.grad().row(0).norm(), 0.0);
  EXPECT_NEAR(x.grad()(1, 0), 0.6, 1e-15);
}

TEST(SharpenRows, TauOneIsIdentity) {
  Tensor p(Matrix::Constant(2, 3, 1.0 / 3.0));
  EXPECT_EQ(sharpen_rows(p, 1.0).value(), p.value());
  EXPECT_THROW(sharpen_rows(p, 0.0), std::invalid_argument);
}

TEST(Shapes, MismatchesThrow) {
  Tensor a(Matrix::Ones(2, 3)), b(Matrix::Ones(2, 2));
  EXPECT_THROW(matmul(a, b), std::invalid_argument);
  EXPECT_THROW(add(a, b), std::invalid_argument);
  const std::vector<int> bad{5};
  EXPECT_THROW(gather_rows(a, bad), std::invalid_argument);
}

}  // namespace
}  // namespace gog::nn
