#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gog/kernel.hpp"
#include "gog/tensor.hpp"

namespace gog {

/// Sub-GoG over which graph representations are smoothed. Row i of
/// `row_norm_adj` is row-normalized (A_sub + I), indexed like `sub_nodes`.
struct PropagationPlan {
  std::vector<int> sub_nodes;
  std::shared_ptr<const SparseMatrix> row_norm_adj;
  int depth = 0;

  std::size_t size() const noexcept { return sub_nodes.size(); }
};

/// Plan over an explicit undirected graph on nodes 0..n-1 (sub_nodes = iota).
PropagationPlan make_plan(int num_nodes, const std::vector<Edge>& edges, int depth);

/// Batch members (deduplicated, first-seen order) followed by every top-k
/// neighbor they selected; the plan is the GoG subgraph induced by them.
PropagationPlan batch_induced_subgraph(const GoGraph& gog, std::span<const int> batch, int depth);

/// Applies the plan's matrix `depth` times.
nn::Tensor propagate(const nn::Tensor& reprs, const PropagationPlan& plan);

/// `reprs` stacks `groups` blocks of plan.size() rows; each block is
/// propagated independently over the same plan.
nn::Tensor propagate_groups(const nn::Tensor& reprs, const PropagationPlan& plan, int groups);

/// Connected components of the plan's graph, as sorted local indices.
std::vector<std::vector<int>> connected_components(const PropagationPlan& plan);

struct ComponentStationarity {
  std::vector<int> nodes;  ///< local indices into the plan
  bool converged = false;
  RowVector stationary;    ///< shared row of the powered matrix
  int iterations = 0;
  double spread = 0.0;     ///< max column spread of the last power
};

/// Powers each component's row-stochastic matrix from the identity until all
/// rows agree within `tol` (max over columns of max-min). Never throws on
/// non-convergence; reports converged = false instead.
std::vector<ComponentStationarity> stationary_check(const PropagationPlan& plan, double tol, int max_iters);

struct SmoothingBound {
  double mu = 0.0;                ///< spectral norm of the linear map
  std::vector<double> lhs;        ///< ||neighbor mean of mapped reprs - mapped own||
  std::vector<double> rhs;        ///< mu * ||one-step propagation change||
  std::vector<double> slack;      ///< rhs - lhs
  bool satisfied = false;
};

/// Node-wise check that label smoothing under a linear map W (labels = P W)
/// is bounded by mu times the one-step feature change. For linear maps the
/// Taylor remainder vanishes, so the bound must hold exactly up to rounding.
SmoothingBound smoothing_bound_check(const PropagationPlan& plan, const Matrix& reprs, const Matrix& linear_map);

}  // namespace gog
