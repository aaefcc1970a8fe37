#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "gog/graph.hpp"
#include "gog/random.hpp"
#include "gog/tensor.hpp"

namespace gog::nn {

struct NamedParameter {
  std::string name;
  Tensor tensor;
};

/// y = x W + b. Glorot-uniform weights, zero bias.
class Linear {
 public:
  Linear(Eigen::Index in, Eigen::Index out, Rng& rng);
  Linear(Tensor weight, Tensor bias);

  Tensor operator()(const Tensor& x) const { return add_row(matmul(x, weight_), bias_); }

  const Tensor& weight() const { return weight_; }
  const Tensor& bias() const { return bias_; }
  Eigen::Index in_dim() const { return weight_.rows(); }
  Eigen::Index out_dim() const { return weight_.cols(); }
  void collect(const std::string& prefix, std::vector<NamedParameter>& out) const;

 private:
  Tensor weight_;
  Tensor bias_;
};

/// affine -> ReLU -> affine.
class Mlp {
 public:
  Mlp(Eigen::Index in, Eigen::Index hidden, Eigen::Index out, Rng& rng);
  Mlp(Linear first, Linear second);

  Tensor operator()(const Tensor& x) const { return second_(relu(first_(x))); }

  Eigen::Index in_dim() const { return first_.in_dim(); }
  Eigen::Index out_dim() const { return second_.out_dim(); }
  void collect(const std::string& prefix, std::vector<NamedParameter>& out) const;

 private:
  Linear first_;
  Linear second_;
};

/// Block-diagonal view of several graphs: stacked node features, the
/// stacked adjacency (no self-loops) and a graph-by-node pooling matrix.
struct GraphBatch {
  Matrix features;
  std::shared_ptr<const SparseMatrix> adjacency;
  std::shared_ptr<const SparseMatrix> pooling;
  Eigen::Index num_graphs = 0;

  static GraphBatch build(const std::vector<const Graph*>& graphs);
};

/// (A + (1 + epsilon) I) for a given adjacency.
SparseMatrix gin_aggregation(const SparseMatrix& adjacency, double epsilon);

/// MLP((A + (1 + epsilon) I) x).
Tensor gin_layer_forward(const Tensor& x, const SparseMatrix& adjacency, double epsilon, const Mlp& mlp);

/// Column-wise sum of node representations.
inline Tensor readout_sum(const Tensor& node_reprs) { return sum_rows(node_reprs); }

struct GinLayer {
  Mlp mlp;
  double epsilon = 0.0;
};

/// Stack of GIN layers followed by global sum pooling. A ReLU follows every
/// layer's MLP.
class GinEncoder {
 public:
  GinEncoder(Eigen::Index in_dim, Eigen::Index hidden_dim, int layers, double epsilon, Rng& rng);

  /// One representation row per graph in the batch.
  Tensor forward(const GraphBatch& batch) const;

  Eigen::Index in_dim() const { return layers_.front().mlp.in_dim(); }
  Eigen::Index out_dim() const { return layers_.back().mlp.out_dim(); }
  const std::vector<GinLayer>& layers() const { return layers_; }
  void collect(const std::string& prefix, std::vector<NamedParameter>& out) const;

 private:
  std::vector<GinLayer> layers_;
};

/// Representation of a single graph (1 x out_dim).
Tensor encoder_forward(const Graph& graph, const GinEncoder& encoder);

/// Encoder plus 2-layer MLP classifier.
class GraphClassifier {
 public:
  struct Shape {
    Eigen::Index in_dim = 1;
    Eigen::Index hidden_dim = 128;
    int encoder_layers = 2;
    int num_classes = 2;
    double epsilon = 0.0;
  };

  GraphClassifier(const Shape& shape, std::uint64_t seed);

  const GinEncoder& encoder() const { return encoder_; }
  Tensor classify(const Tensor& reprs) const { return head_(reprs); }
  std::vector<NamedParameter> parameters() const;
  const Shape& shape() const { return shape_; }

  /// Copies parameter values (not the graph) from `state` by name.
  void load_state(const std::vector<std::pair<std::string, Matrix>>& state);
  std::vector<std::pair<std::string, Matrix>> state() const;

 private:
  GraphClassifier(const Shape& shape, Rng rng);

  Shape shape_;
  GinEncoder encoder_;
  Mlp head_;
};

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

/// Adam with bias correction and decoupled weight decay.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig config);

  /// Parameters without a gradient are left untouched.
  void step();
  std::int64_t steps() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  std::vector<Tensor> params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  AdamConfig config_;
  std::int64_t step_ = 0;
};

/// Binary checkpoint: "GOGMDL v1\n", u64 block count, then per block
/// u32 name length, name bytes, u32 rank, u64 dims, f64 payload; all
/// little-endian.
void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedParameter>& params);
std::vector<std::pair<std::string, Matrix>> load_checkpoint(const std::filesystem::path& path);

}  // namespace gog::nn
