#include <benchmark/benchmark.h>

#include <filesystem>

#include "gog/kernel.hpp"
#include "gog/nn.hpp"
#include "gog/propagation.hpp"

namespace {

const gog::Dataset& mutag() {
  static const gog::Dataset ds = [] {
    const std::filesystem::path dir = GOG_DATA_DIR;
    if (!std::filesystem::exists(dir / "MUTAG" / "MUTAG_A.txt")) return gog::Dataset{};
    return gog::load_tudataset(dir / "MUTAG", "MUTAG");
  }();
  return ds;
}

bool need_mutag(benchmark::State& state) {
  if (mutag().size() > 0) return true;
  state.SkipWithError("MUTAG not found");
  return false;
}

void BM_SimilarityMatrix(benchmark::State& state) {
  if (!need_mutag(state)) return;
  gog::KernelId id;
  if (state.range(0) > 0) id = gog::KernelId::parse("wl-h" + std::to_string(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gog::similarity_matrix(mutag(), id, true, 1));
}
BENCHMARK(BM_SimilarityMatrix)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  if (!need_mutag(state)) return;
  const auto gog_graph = gog::knn_gog(gog::similarity_matrix(mutag(), {}, true, 1), 3);
  const auto plan = gog::make_plan(gog_graph.num_nodes, gog_graph.edges, static_cast<int>(state.range(0)));
  const gog::nn::Tensor x(gog::Matrix::Random(gog_graph.num_nodes, 128));
  for (auto _ : state) benchmark::DoNotOptimize(gog::propagate(x, plan));
}
BENCHMARK(BM_Propagate)->Arg(1)->Arg(2)->Arg(8);

void BM_EncoderForwardBackward(benchmark::State& state) {
  if (!need_mutag(state)) return;
  std::vector<const gog::Graph*> graphs;
  for (std::size_t i = 0; i < 32; ++i) graphs.push_back(&mutag().graphs[i]);
  const auto batch = gog::nn::GraphBatch::build(graphs);
  gog::nn::GraphClassifier model({.in_dim = mutag().feature_dim(), .hidden_dim = state.range(0)}, 1);
  for (auto _ : state) {
    auto loss = gog::nn::sum_all(model.classify(model.encoder().forward(batch)));
    loss.backward();
    benchmark::DoNotOptimize(loss.item());
  }
}
BENCHMARK(BM_EncoderForwardBackward)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
