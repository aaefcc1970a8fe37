#include "gog/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace gog::nn {

Matrix numeric_gradient(const std::function<double()>& f, Tensor x, double h) {
  Matrix numeric(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double saved = x.value()(i, j);
      x.mutable_value()(i, j) = saved + h;
      const double up = f();
      x.mutable_value()(i, j) = saved - h;
      const double down = f();
      x.mutable_value()(i, j) = saved;
      numeric(i, j) = (up - down) / (2.0 * h);
    }
  }
  return numeric;
}

double relative_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

GradCheckReport check_gradients(const std::function<Tensor()>& loss, const std::vector<Tensor>& inputs, double h) {
  GradCheckReport report;
  Tensor out = loss();
  out.backward();
  std::vector<Matrix> analytic;
  for (const auto& x : inputs)
    analytic.push_back(x.has_grad() ? x.grad() : Matrix::Zero(x.rows(), x.cols()));

  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Matrix numeric = numeric_gradient([&] { return loss().item(); }, inputs[k], h);
    report.max_rel_error = std::max(report.max_rel_error, relative_error(analytic[k], numeric));
    report.max_abs_error = std::max(report.max_abs_error, (analytic[k] - numeric).cwiseAbs().maxCoeff());
    report.entries += static_cast<std::size_t>(numeric.size());
  }
  return report;
}

}  // namespace gog::nn
