#pragma once

#include <functional>
#include <vector>

#include "gog/tensor.hpp"

namespace gog::nn {

struct GradCheckReport {
  /// ||analytic - numeric|| / max(||analytic||, ||numeric||), worst input.
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t entries = 0;
};

/// Compares reverse-mode gradients of the scalar `loss()` with respect to
/// each input against central differences with step `h`. `loss` must
/// rebuild its graph from the current input values on every call. Input
/// values are restored afterwards.
/// Central-difference gradient of `f` with respect to the values of `x`.
Matrix numeric_gradient(const std::function<double()>& f, Tensor x, double h = 1e-6);

/// ||a - b|| / max(||a||, ||b||).
double relative_error(const Matrix& a, const Matrix& b);

GradCheckReport check_gradients(const std::function<Tensor()>& loss, const std::vector<Tensor>& inputs,
                                double h = 1e-6);

}  // namespace gog::nn
