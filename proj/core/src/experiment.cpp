#include "gog/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "gog/metrics.hpp"

namespace gog {
namespace {

constexpr std::uint64_t kSplitStream = 100;
constexpr std::uint64_t kTrainStream = 200;
constexpr std::uint64_t kTestStream = 5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::ordered_json config_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(c.mode);
  j["k"] = c.k;
  j["prop_layers"] = c.prop_layers;
  j["delta"] = c.delta;
  j["T"] = c.augment_count;
  j["tau"] = c.tau;
  j["lr"] = c.lr;
  j["weight_decay"] = c.weight_decay;
  j["hidden_dim"] = c.hidden_dim;
  j["encoder_layers"] = c.encoder_layers;
  j["epsilon"] = c.epsilon;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  j["grad_through_center"] = c.grad_through_center;
  return j;
}

SplitResult run_split(const Dataset& dataset, const GoGraph* gog, const TrainConfig& cfg,
                      const SplitProtocol& protocol, int s) {
  const auto start = Clock::now();
  SplitResult r;
  r.index = s;
  r.seed = derive_seed(cfg.seed, {kSplitStream, static_cast<std::uint64_t>(s)});
  const int minority = protocol.minority_class.value_or(smallest_class(dataset));
  const auto [n_min, n_maj] = protocol.train_counts(dataset.size());
  const Split split = make_imbalanced_split(dataset, minority, n_min, n_maj, protocol.val_fraction, r.seed);

  TrainConfig run_cfg = cfg;
  run_cfg.seed = derive_seed(cfg.seed, {kTrainStream, static_cast<std::uint64_t>(s)});
  TrainResult trained = train(dataset, split, gog, run_cfg);

  const auto labels = dataset.labels();
  std::vector<int> truth;
  truth.reserve(split.test.size());
  for (int g : split.test) truth.push_back(labels[g]);
  const auto pred = predict(trained.model, dataset, split.test, gog, run_cfg,
                            derive_seed(run_cfg.seed, {kTestStream}));
  const auto f1 = f1_scores(pred, truth, dataset.num_classes);
  r.f1_macro = f1.macro;
  r.f1_micro = f1.micro;
  r.best_epoch = trained.best_epoch;
  r.history = std::move(trained.history);
  r.seconds = seconds_since(start);
  return r;
}

}  // namespace

std::pair<int, int> SplitProtocol::train_counts(std::size_t n) const {
  if (ratio_minority < 1 || ratio_majority < 1) throw std::invalid_argument("ratio parts must be >= 1");
  const int budget = train_size ? *train_size : static_cast<int>(std::lround(static_cast<double>(n) * train_fraction));
  if (budget < 2) throw std::invalid_argument("training budget must be >= 2");
  return ratio_counts(budget, ratio_minority, ratio_majority);
}

std::string SplitProtocol::ratio_string() const {
  return std::to_string(ratio_minority) + ":" + std::to_string(ratio_majority);
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

ExperimentReport run_experiment(const Dataset& dataset, const GoGraph* gog, const TrainConfig& cfg, int n_splits,
                                const SplitProtocol& protocol, int workers) {
  if (n_splits < 1) throw std::invalid_argument("n_splits must be >= 1");
  cfg.validate();
  const auto start = Clock::now();

  ExperimentReport report;
  report.dataset = dataset.name;
  report.config = cfg;
  report.protocol = protocol;
  report.per_split.resize(static_cast<std::size_t>(n_splits));

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (int s = next++; s < n_splits; s = next++) {
      try {
        report.per_split[s] = run_split(dataset, gog, cfg, protocol, s);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_splits;
      }
    }
  };
  const int threads = std::clamp(workers, 1, n_splits);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<double> macro, micro;
  for (const auto& r : report.per_split) {
    macro.push_back(r.f1_macro);
    micro.push_back(r.f1_micro);
  }
  std::tie(report.mean_f1_macro, report.std_f1_macro) = mean_std(macro);
  std::tie(report.mean_f1_micro, report.std_f1_micro) = mean_std(micro);
  report.runtime_s = seconds_since(start);
  return report;
}

std::string ExperimentReport::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  auto config = config_json(this->config);
  config["dataset"] = dataset;
  if (!kernel.empty()) config["kernel"] = kernel;
  config["ratio"] = protocol.ratio_string();
  if (protocol.train_size) config["train_size"] = *protocol.train_size;
  else config["train_fraction"] = protocol.train_fraction;
  config["val_fraction"] = protocol.val_fraction;
  if (protocol.minority_class) config["minority_class"] = *protocol.minority_class;
  config["splits"] = per_split.size();
  j["config"] = config;

  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : per_split) {
    nlohmann::ordered_json row;
    row["split"] = r.index;
    row["seed"] = r.seed;
    row["f1_macro"] = r.f1_macro;
    row["f1_micro"] = r.f1_micro;
    row["best_epoch"] = r.best_epoch;
    if (include_timing) row["seconds"] = r.seconds;
    rows.push_back(std::move(row));
  }
  j["per_split"] = std::move(rows);
  j["mean"] = {{"f1_macro", mean_f1_macro}, {"f1_micro", mean_f1_micro}};
  j["std"] = {{"f1_macro", std_f1_macro}, {"f1_micro", std_f1_micro}};
  if (include_timing) j["runtime_s"] = runtime_s;
  return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv(bool include_timing) const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "split,seed,f1_macro,f1_micro,best_epoch" << (include_timing ? ",seconds" : "") << "\n";
  for (const auto& r : per_split) {
    out << r.index << ',' << r.seed << ',' << r.f1_macro << ',' << r.f1_micro << ',' << r.best_epoch;
    if (include_timing) out << ',' << r.seconds;
    out << '\n';
  }
  return out.str();
}

std::string ExperimentReport::history_csv() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "split,epoch,train_loss,val_f1_macro\n";
  for (const auto& r : per_split)
    for (const auto& h : r.history) out << r.index << ',' << h.epoch << ',' << h.train_loss << ',' << h.val_f1_macro << '\n';
  return out.str();
}

}  // namespace gog
