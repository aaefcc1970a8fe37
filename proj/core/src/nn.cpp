#include "gog/nn.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace gog::nn {
namespace {

Matrix glorot(Eigen::Index in, Eigen::Index out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  Matrix w(in, out);
  for (Eigen::Index i = 0; i < in; ++i)
    for (Eigen::Index j = 0; j < out; ++j) w(i, j) = (2.0 * rng.uniform() - 1.0) * limit;
  return w;
}

}  // namespace

Linear::Linear(Eigen::Index in, Eigen::Index out, Rng& rng)
    : weight_(Tensor::parameter(glorot(in, out, rng))), bias_(Tensor::parameter(Matrix::Zero(1, out))) {}

Linear::Linear(Tensor weight, Tensor bias) : weight_(std::move(weight)), bias_(std::move(bias)) {
  if (bias_.rows() != 1 || bias_.cols() != weight_.cols()) throw std::invalid_argument("Linear: bias shape mismatch");
}

void Linear::collect(const std::string& prefix, std::vector<NamedParameter>& out) const {
  out.push_back({prefix + ".weight", weight_});
  out.push_back({prefix + ".bias", bias_});
}

Mlp::Mlp(Eigen::Index in, Eigen::Index hidden, Eigen::Index out, Rng& rng)
    : first_(in, hidden, rng), second_(hidden, out, rng) {}

Mlp::Mlp(Linear first, Linear second) : first_(std::move(first)), second_(std::move(second)) {
  if (first_.out_dim() != second_.in_dim()) throw std::invalid_argument("Mlp: inner dimensions do not chain");
}

void Mlp::collect(const std::string& prefix, std::vector<NamedParameter>& out) const {
  first_.collect(prefix + ".0", out);
  second_.collect(prefix + ".1", out);
}

GraphBatch GraphBatch::build(const std::vector<const Graph*>& graphs) {
  if (graphs.empty()) throw std::invalid_argument("GraphBatch: no graphs");
  Eigen::Index total = 0;
  const auto dim = graphs.front()->feature_dim();
  for (const auto* g : graphs) {
    if (g->feature_dim() != dim) throw std::invalid_argument("GraphBatch: feature dims differ");
    total += g->node_count();
  }
  GraphBatch b;
  b.num_graphs = static_cast<Eigen::Index>(graphs.size());
  b.features.resize(total, dim);
  std::vector<Triplet> adj, pool;
  Eigen::Index offset = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = *graphs[gi];
    b.features.middleRows(offset, g.node_count()) = g.features();
    for (const auto& e : g.edges()) {
      adj.emplace_back(offset + e.u, offset + e.v, 1.0);
      adj.emplace_back(offset + e.v, offset + e.u, 1.0);
    }
    for (int v = 0; v < g.node_count(); ++v) pool.emplace_back(static_cast<Eigen::Index>(gi), offset + v, 1.0);
    offset += g.node_count();
  }
  auto a = std::make_shared<SparseMatrix>(total, total);
  a->setFromTriplets(adj.begin(), adj.end());
  auto p = std::make_shared<SparseMatrix>(b.num_graphs, total);
  p->setFromTriplets(pool.begin(), pool.end());
  b.adjacency = std::move(a);
  b.pooling = std::move(p);
  return b;
}

SparseMatrix gin_aggregation(const SparseMatrix& adjacency, double epsilon) {
  if (adjacency.rows() != adjacency.cols()) throw std::invalid_argument("gin_aggregation: adjacency must be square");
  SparseMatrix eye(adjacency.rows(), adjacency.cols());
  eye.setIdentity();
  SparseMatrix out = adjacency + (1.0 + epsilon) * eye;
  out.makeCompressed();
  return out;
}

Tensor gin_layer_forward(const Tensor& x, const SparseMatrix& adjacency, double epsilon, const Mlp& mlp) {
  if (x.rows() != adjacency.rows())
    throw std::invalid_argument("gin_layer_forward: " + std::to_string(x.rows()) + " feature rows vs " +
                                std::to_string(adjacency.rows()) + " nodes");
  if (x.cols() != mlp.in_dim())
    throw std::invalid_argument("gin_layer_forward: feature dim " + std::to_string(x.cols()) + " vs MLP input " +
                                std::to_string(mlp.in_dim()));
  return mlp(spmm(gin_aggregation(adjacency, epsilon), x));
}

GinEncoder::GinEncoder(Eigen::Index in_dim, Eigen::Index hidden_dim, int layers, double epsilon, Rng& rng) {
  if (layers < 1) throw std::invalid_argument("GinEncoder: need at least one layer");
  if (!std::isfinite(epsilon)) throw std::invalid_argument("GinEncoder: epsilon must be finite");
  for (int l = 0; l < layers; ++l)
    layers_.push_back({Mlp(l == 0 ? in_dim : hidden_dim, hidden_dim, hidden_dim, rng), epsilon});
}

Tensor GinEncoder::forward(const GraphBatch& batch) const {
  if (batch.features.cols() != in_dim())
    throw std::invalid_argument("GinEncoder: feature dim " + std::to_string(batch.features.cols()) +
                                " vs encoder input " + std::to_string(in_dim()));
  Tensor x(batch.features);
  std::map<double, std::shared_ptr<const SparseMatrix>> aggregations;
  for (const auto& layer : layers_) {
    auto& agg = aggregations[layer.epsilon];
    if (!agg) agg = std::make_shared<const SparseMatrix>(gin_aggregation(*batch.adjacency, layer.epsilon));
    x = relu(layer.mlp(spmm(agg, x)));
  }
  return spmm(batch.pooling, x);
}

void GinEncoder::collect(const std::string& prefix, std::vector<NamedParameter>& out) const {
  for (std::size_t l = 0; l < layers_.size(); ++l) layers_[l].mlp.collect(prefix + ".layer" + std::to_string(l), out);
}

Tensor encoder_forward(const Graph& graph, const GinEncoder& encoder) {
  return encoder.forward(GraphBatch::build({&graph}));
}

namespace {
GinEncoder make_encoder(const GraphClassifier::Shape& s, Rng& rng) {
  return GinEncoder(s.in_dim, s.hidden_dim, s.encoder_layers, s.epsilon, rng);
}
}  // namespace

GraphClassifier::GraphClassifier(const Shape& shape, std::uint64_t seed)
    : GraphClassifier(shape, Rng(seed)) {}

GraphClassifier::GraphClassifier(const Shape& shape, Rng rng)
    : shape_(shape), encoder_(make_encoder(shape, rng)), head_(shape.hidden_dim, shape.hidden_dim, shape.num_classes, rng) {
  if (shape.num_classes < 2) throw std::invalid_argument("GraphClassifier: need at least 2 classes");
}

std::vector<NamedParameter> GraphClassifier::parameters() const {
  std::vector<NamedParameter> out;
  encoder_.collect("encoder", out);
  head_.collect("classifier", out);
  return out;
}

std::vector<std::pair<std::string, Matrix>> GraphClassifier::state() const {
  std::vector<std::pair<std::string, Matrix>> out;
  for (const auto& p : parameters()) out.emplace_back(p.name, p.tensor.value());
  return out;
}

void GraphClassifier::load_state(const std::vector<std::pair<std::string, Matrix>>& state) {
  std::map<std::string, const Matrix*> by_name;
  for (const auto& [name, value] : state) by_name[name] = &value;
  for (auto p : parameters()) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw std::invalid_argument("load_state: missing parameter " + p.name);
    if (it->second->rows() != p.tensor.rows() || it->second->cols() != p.tensor.cols())
      throw std::invalid_argument("load_state: shape mismatch for " + p.name);
    p.tensor.mutable_value() = *it->second;
  }
}

Adam::Adam(std::vector<Tensor> params, AdamConfig config) : params_(std::move(params)), config_(config) {
  for (const auto& p : params_) {
    m_.push_back(Matrix::Zero(p.rows(), p.cols()));
    v_.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
}

void Adam::step() {
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    if (!p.has_grad()) continue;
    const Matrix& g = p.grad();
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g.cwiseProduct(g);
    Matrix& w = p.mutable_value();
    if (config_.weight_decay != 0.0) w *= 1.0 - config_.lr * config_.weight_decay;
    w.array() -= config_.lr * (m_[i].array() / bc1) / ((v_[i].array() / bc2).sqrt() + config_.eps);
  }
}

}  // namespace gog::nn
