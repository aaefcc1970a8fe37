#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gog/gradcheck.hpp"
#include "gog/nn.hpp"
#include "gog/objective.hpp"
#include "gog/propagation.hpp"
#include "gog/random.hpp"

namespace gog::cli {
namespace {

constexpr double kStationaryTol = 1e-6;
constexpr int kStationaryIters = 1000;
constexpr double kGradTol = 1e-4;

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = lo + (hi - lo) * rng.uniform();
  return m;
}

void record(CheckResult& r, double error, const std::string& what) {
  ++r.instances;
  r.max_error = std::max(r.max_error, error);
  if (!(error <= r.tolerance)) {
    ++r.failures;
    r.passed = false;
    if (r.detail.empty()) r.detail = what;
  }
}

}  // namespace

std::vector<Edge> random_connected_edges(int n, double extra, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span<int>(order));
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) {
    const int parent = order[rng.below(static_cast<std::uint64_t>(i))];
    edges.push_back({std::min(parent, order[i]), std::max(parent, order[i])});
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(extra)) edges.push_back({u, v});
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

CheckResult check_stationary(const VerifyOptions& opts) {
  CheckResult r{"stationary", true, 0, 0, 0.0, kStationaryTol, ""};
  for (int i = 0; i < opts.instances; ++i) {
    const auto seed = derive_seed(opts.seed, {1, static_cast<std::uint64_t>(i)});
    Rng rng(seed);
    const int n = 5 + static_cast<int>(rng.below(46));
    const auto edges = random_connected_edges(n, 0.1 * rng.uniform(), seed);
    const auto plan = make_plan(n, edges, 1);
    const auto comps = stationary_check(plan, kStationaryTol, kStationaryIters);

    // Random walk with self-loops on an undirected graph: pi_j ~ deg_j + 1.
    RowVector expected = RowVector::Ones(n);
    for (const auto& e : edges) {
      expected(e.u) += 1.0;
      expected(e.v) += 1.0;
    }
    expected /= expected.sum();
    if (opts.inject_fault) expected(0) += 1e-3;

    std::ostringstream what;
    if (comps.size() != 1 || !comps.front().converged) {
      what << "instance " << i << " (n=" << n << "): no convergence within " << kStationaryIters << " iterations";
      record(r, std::numeric_limits<double>::infinity(), what.str());
      continue;
    }
    const double err = (comps.front().stationary - expected).cwiseAbs().maxCoeff();
    what << "instance " << i << " (n=" << n << "): stationary row off by " << err;
    record(r, err, what.str());
  }
  return r;
}

CheckResult check_smoothing_bound(const VerifyOptions& opts) {
  CheckResult r{"smoothing_bound", true, 0, 0, 0.0, 0.0, ""};
  for (int i = 0; i < opts.instances; ++i) {
    const auto seed = derive_seed(opts.seed, {2, static_cast<std::uint64_t>(i)});
    Rng rng(seed);
    const int n = 5 + static_cast<int>(rng.below(36));
    const auto edges = random_connected_edges(n, 0.15 * rng.uniform(), seed);
    const auto plan = make_plan(n, edges, 1);
    const int d = 2 + static_cast<int>(rng.below(7));
    const int c = 2 + static_cast<int>(rng.below(4));
    const Matrix reprs = random_matrix(n, d, rng);
    Matrix w = random_matrix(d, c, rng);
    const auto bound = smoothing_bound_check(plan, reprs, w);
    double worst = 0.0;  // largest violation, 0 when satisfied
    for (double s : bound.slack) worst = std::max(worst, -s);
    if (opts.inject_fault) worst += 1.0;
    std::ostringstream what;
    what << "instance " << i << " (n=" << n << "): bound violated by " << worst;
    record(r, bound.satisfied && !opts.inject_fault ? 0.0 : std::max(worst, 1e-300), what.str());
  }
  return r;
}

std::vector<CheckResult> check_gradients(const VerifyOptions& opts) {
  using namespace gog::nn;
  std::vector<CheckResult> out;
  const int reps = std::max(1, std::min(opts.instances, 10));
  auto run = [&](const std::string& name, auto&& make_case) {
    CheckResult r{"gradient_" + name, true, 0, 0, 0.0, kGradTol, ""};
    for (int i = 0; i < reps; ++i) {
      Rng rng(derive_seed(opts.seed, {3, std::hash<std::string>{}(name), static_cast<std::uint64_t>(i)}));
      auto [loss, inputs] = make_case(rng);
      double err = check_gradients(loss, inputs).max_rel_error;
      if (opts.inject_fault) err += 1.0;
      record(r, err, name + " instance " + std::to_string(i) + ": relative error " + std::to_string(err));
    }
    out.push_back(r);
  };
  using Case = std::pair<std::function<Tensor()>, std::vector<Tensor>>;

  run("gin_layer", [](Rng& rng) -> Case {
    const int n = 6, d = 3, h = 4;
    auto edges = random_connected_edges(n, 0.3, rng.next_u64());
    std::vector<Triplet> t;
    for (const auto& e : edges) {
      t.emplace_back(e.u, e.v, 1.0);
      t.emplace_back(e.v, e.u, 1.0);
    }
    auto adj = std::make_shared<SparseMatrix>(n, n);
    adj->setFromTriplets(t.begin(), t.end());
    Tensor x(random_matrix(n, d, rng), true);
    Tensor w1(random_matrix(d, h, rng), true), b1(random_matrix(1, h, rng), true);
    Tensor w2(random_matrix(h, 2, rng), true), b2(random_matrix(1, 2, rng), true);
    const double eps = 0.3 * rng.uniform();
    auto f = [=] {
      Mlp mlp(Linear(w1, b1), Linear(w2, b2));
      return sum_all(gin_layer_forward(x, *adj, eps, mlp));
    };
    return {f, {x, w1, b1, w2, b2}};
  });

  run("readout", [](Rng& rng) -> Case {
    Tensor x(random_matrix(7, 3, rng), true);
    Tensor probe(random_matrix(3, 1, rng), false);
    auto f = [=] { return sum_all(matmul(readout_sum(x), probe)); };
    return {f, {x}};
  });

  run("propagation", [](Rng& rng) -> Case {
    const int n = 8;
    auto plan = make_plan(n, random_connected_edges(n, 0.2, rng.next_u64()), 2);
    Tensor x(random_matrix(2 * n, 3, rng), true);
    Tensor probe(random_matrix(3, 1, rng), false);
    auto f = [=] { return sum_all(matmul(propagate_groups(x, plan, 2), probe)); };
    return {f, {x}};
  });

  run("softmax_ce", [](Rng& rng) -> Case {
    Tensor logits(random_matrix(6, 3, rng, -3.0, 3.0), true);
    std::vector<int> labels;
    for (int i = 0; i < 6; ++i) labels.push_back(static_cast<int>(rng.below(3)));
    std::vector<double> weights{1.0, 2.5, 0.5};
    auto f = [=] { return softmax_cross_entropy(logits, labels, weights); };
    return {f, {logits}};
  });

  run("self_consistency", [](Rng& rng) -> Case {
    Tensor logits(random_matrix(3, 4, rng, -2.0, 2.0), true);
    auto f = [=] { return self_consistency_loss(softmax_rows(logits), 0.5, true); };
    return {f, {logits}};
  });

  // With a detached center the reference is the same distance to a frozen
  // sharpened mean.
  {
    CheckResult r{"gradient_self_consistency_detached", true, 0, 0, 0.0, kGradTol, ""};
    for (int i = 0; i < reps; ++i) {
      Rng rng(derive_seed(opts.seed, {4, static_cast<std::uint64_t>(i)}));
      Tensor logits(random_matrix(3, 4, rng, -2.0, 2.0), true);
      self_consistency_loss(softmax_rows(logits), 0.5, false).backward();
      const Matrix analytic = logits.grad();

      const Matrix p0 = softmax_rows(logits.detach()).value();
      const RowVector center = sharpen(p0.colwise().mean(), 0.5);
      auto frozen = [&] {
        const Matrix p = softmax_rows(logits.detach()).value();
        double total = 0.0;
        for (Eigen::Index t = 0; t < p.rows(); ++t) total += (p.row(t) - center).norm();
        return total / static_cast<double>(p.rows());
      };
      double err = relative_error(analytic, numeric_gradient(frozen, logits));
      if (opts.inject_fault) err += 1.0;
      record(r, err, "instance " + std::to_string(i) + ": relative error " + std::to_string(err));
    }
    out.push_back(r);
  }
  return out;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  std::vector<CheckResult> out{check_stationary(opts), check_smoothing_bound(opts)};
  for (auto& g : check_gradients(opts)) out.push_back(std::move(g));
  return out;
}

}  // namespace gog::cli
