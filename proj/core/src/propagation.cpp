#include "gog/propagation.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace gog {

PropagationPlan make_plan(int num_nodes, const std::vector<Edge>& edges, int depth) {
  if (num_nodes < 1) throw std::invalid_argument("propagation plan needs at least one node");
  if (depth < 0) throw std::invalid_argument("propagation depth must be >= 0");
  std::vector<double> degree(static_cast<std::size_t>(num_nodes), 1.0);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes || e.u == e.v)
      throw std::invalid_argument("invalid plan edge");
    degree[e.u] += 1.0;
    degree[e.v] += 1.0;
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(num_nodes) + 2 * edges.size());
  for (int i = 0; i < num_nodes; ++i) t.emplace_back(i, i, 1.0 / degree[i]);
  for (const auto& e : edges) {
    t.emplace_back(e.u, e.v, 1.0 / degree[e.u]);
    t.emplace_back(e.v, e.u, 1.0 / degree[e.v]);
  }
  auto m = std::make_shared<SparseMatrix>(num_nodes, num_nodes);
  m->setFromTriplets(t.begin(), t.end());
  m->makeCompressed();
  PropagationPlan plan;
  plan.sub_nodes.resize(static_cast<std::size_t>(num_nodes));
  std::iota(plan.sub_nodes.begin(), plan.sub_nodes.end(), 0);
  plan.row_norm_adj = std::move(m);
  plan.depth = depth;
  return plan;
}

PropagationPlan batch_induced_subgraph(const GoGraph& gog, std::span<const int> batch, int depth) {
  if (batch.empty()) throw std::invalid_argument("batch_induced_subgraph: empty batch");
  if (gog.k < 1) throw std::invalid_argument("batch_induced_subgraph: GoG must be built with k >= 1");
  std::unordered_map<int, int> local;
  std::vector<int> nodes;
  auto add = [&](int g) {
    if (local.emplace(g, static_cast<int>(nodes.size())).second) nodes.push_back(g);
  };
  for (int g : batch) {
    if (g < 0 || g >= gog.num_nodes)
      throw std::out_of_range("batch index " + std::to_string(g) + " outside GoG of " +
                              std::to_string(gog.num_nodes) + " graphs");
    add(g);
  }
  const std::size_t members = nodes.size();
  for (std::size_t i = 0; i < members; ++i)
    for (int j : gog.neighbors[nodes[i]]) add(j);

  std::vector<Edge> sub_edges;
  for (const auto& e : gog.edges) {
    auto a = local.find(e.u), b = local.find(e.v);
    if (a != local.end() && b != local.end())
      sub_edges.push_back({std::min(a->second, b->second), std::max(a->second, b->second)});
  }
  auto plan = make_plan(static_cast<int>(nodes.size()), sub_edges, depth);
  plan.sub_nodes = std::move(nodes);
  return plan;
}

nn::Tensor propagate(const nn::Tensor& reprs, const PropagationPlan& plan) {
  return propagate_groups(reprs, plan, 1);
}

nn::Tensor propagate_groups(const nn::Tensor& reprs, const PropagationPlan& plan, int groups) {
  const auto m = static_cast<Eigen::Index>(plan.size());
  if (groups < 1 || reprs.rows() != m * groups)
    throw std::invalid_argument("propagate: expected " + std::to_string(m * std::max(groups, 1)) + " rows, got " +
                                std::to_string(reprs.rows()));
  if (plan.depth == 0) return reprs;
  std::shared_ptr<const SparseMatrix> op = plan.row_norm_adj;
  if (groups > 1) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(op->nonZeros() * groups));
    for (int g = 0; g < groups; ++g)
      for (Eigen::Index r = 0; r < op->outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(*op, r); it; ++it)
          t.emplace_back(g * m + it.row(), g * m + it.col(), it.value());
    auto block = std::make_shared<SparseMatrix>(m * groups, m * groups);
    block->setFromTriplets(t.begin(), t.end());
    op = std::move(block);
  }
  nn::Tensor out = reprs;
  for (int l = 0; l < plan.depth; ++l) out = nn::spmm(op, out);
  return out;
}

std::vector<std::vector<int>> connected_components(const PropagationPlan& plan) {
  const auto n = static_cast<int>(plan.size());
  const auto& a = *plan.row_norm_adj;
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members{s};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t h = 0; h < members.size(); ++h) {
      for (SparseMatrix::InnerIterator it(a, members[h]); it; ++it) {
        const int w = static_cast<int>(it.col());
        if (comp[w] < 0) {
          comp[w] = comp[s];
          members.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

std::vector<ComponentStationarity> stationary_check(const PropagationPlan& plan, double tol, int max_iters) {
  std::vector<ComponentStationarity> out;
  const auto& a = *plan.row_norm_adj;
  for (auto& nodes : connected_components(plan)) {
    const auto c = static_cast<Eigen::Index>(nodes.size());
    std::unordered_map<int, Eigen::Index> local;
    for (Eigen::Index i = 0; i < c; ++i) local[nodes[i]] = i;
    Matrix m = Matrix::Zero(c, c);
    for (Eigen::Index i = 0; i < c; ++i)
      for (SparseMatrix::InnerIterator it(a, nodes[i]); it; ++it) m(i, local.at(static_cast<int>(it.col()))) = it.value();

    ComponentStationarity r;
    r.nodes = std::move(nodes);
    Matrix power = Matrix::Identity(c, c);
    auto spread = [&] { return (power.colwise().maxCoeff() - power.colwise().minCoeff()).maxCoeff(); };
    r.spread = spread();
    while (r.spread >= tol && r.iterations < max_iters) {
      power = power * m;
      ++r.iterations;
      r.spread = spread();
    }
    r.converged = r.spread < tol;
    r.stationary = power.colwise().mean();
    out.push_back(std::move(r));
  }
  return out;
}

SmoothingBound smoothing_bound_check(const PropagationPlan& plan, const Matrix& reprs, const Matrix& linear_map) {
  const auto n = static_cast<Eigen::Index>(plan.size());
  if (reprs.rows() != n) throw std::invalid_argument("smoothing_bound_check: reprs rows != plan size");
  if (linear_map.rows() != reprs.cols()) throw std::invalid_argument("smoothing_bound_check: map shape mismatch");
  SmoothingBound b;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(linear_map);
  b.mu = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;

  const auto& a = *plan.row_norm_adj;
  const Matrix labels = reprs * linear_map;
  const Matrix next = a * reprs;
  b.satisfied = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    // Label smoothing: mean over the self-looped neighborhood of mapped reprs.
    RowVector neighbor_mean = RowVector::Zero(labels.cols());
    double weight = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      neighbor_mean += labels.row(it.col());
      weight += 1.0;
    }
    neighbor_mean /= weight;
    const double lhs = (neighbor_mean - labels.row(i)).norm();
    const double rhs = b.mu * (next.row(i) - reprs.row(i)).norm();
    b.lhs.push_back(lhs);
    b.rhs.push_back(rhs);
    b.slack.push_back(rhs - lhs);
    // Rounding slack: both sides are O(1e-16) relative computations.
    if (lhs > rhs * (1.0 + 1e-10) + 1e-12) b.satisfied = false;
  }
  return b;
}

}  // namespace gog
