#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "commands.hpp"
#include "gog/experiment.hpp"

namespace gog::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Flag value, else config entry, else the built-in default.
template <class T>
T layered(const std::optional<T>& flag, const Json& config, const char* key, T fallback) {
  if (flag) return *flag;
  if (config.contains(key)) {
    try {
      return config.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
  }
  return fallback;
}

std::pair<int, int> parse_ratio(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("ratio must look like A:B, got '" + text + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    const int a = std::stoi(text.substr(0, colon), &used_a);
    const int b = std::stoi(text.substr(colon + 1), &used_b);
    if (used_a != colon || used_b != text.size() - colon - 1 || a < 1 || b < 1) throw std::invalid_argument("");
    return {a, b};
  } catch (const std::exception&) {
    throw std::invalid_argument("ratio must look like A:B with positive integers, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream s(text);
  for (std::string item; std::getline(s, item, ',');)
    if (!item.empty()) parts.push_back(item);
  return parts;
}

Json read_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  // A run manifest nests the resolved config.
  if (j.contains("config") && j["config"].is_object()) return j["config"];
  return j;
}

struct Resolved {
  DataOptions data;
  std::string kernel;
  int wl_iters = 3;
  std::string ratio;
  std::vector<std::string> sweep;
  int splits = 10;
  std::optional<int> train_size;
  double val_fraction = 1.0;
  int workers = 1;
  TrainConfig train;
  bool seed_generated = false;

  Json to_json() const {
    Json j;
    j["dataset"] = data.dataset;
    j["data_dir"] = data.data_dir;
    j["features"] = data.features;
    j["kernel"] = kernel;
    j["wl_iters"] = wl_iters;
    j["mode"] = to_string(train.mode);
    j["k"] = train.k;
    j["ratio"] = ratio;
    if (!sweep.empty()) {
      std::string joined;
      for (const auto& r : sweep) joined += (joined.empty() ? "" : ",") + r;
      j["sweep_ratios"] = joined;
    }
    j["splits"] = splits;
    if (train_size) j["train_size"] = *train_size;
    j["val_fraction"] = val_fraction;
    j["delta"] = train.delta;
    j["T"] = train.augment_count;
    j["tau"] = train.tau;
    j["prop_layers"] = train.prop_layers;
    j["lr"] = train.lr;
    j["weight_decay"] = train.weight_decay;
    j["hidden"] = train.hidden_dim;
    j["layers"] = train.encoder_layers;
    j["epochs"] = train.epochs;
    j["batch"] = train.batch_size;
    j["patience"] = train.patience;
    j["seed"] = train.seed;
    j["grad_through_center"] = train.grad_through_center;
    j["workers"] = workers;
    return j;
  }
};

Resolved resolve(const TrainArgs& a) {
  const Json c = read_config(a.config);
  const TrainConfig d;
  Resolved r;
  r.data.dataset = layered<std::string>(a.dataset, c, "dataset", "");
  r.data.data_dir = layered<std::string>(a.data_dir, c, "data_dir", "data");
  r.data.features = layered<std::string>(a.features, c, "features", "auto");
  r.kernel = layered<std::string>(a.kernel, c, "kernel", "sp");
  r.wl_iters = layered(a.wl_iters, c, "wl_iters", 3);
  r.train.mode = parse_mode(layered<std::string>(a.mode, c, "mode", to_string(d.mode)));
  r.train.k = layered(a.k, c, "k", d.k);
  r.ratio = layered<std::string>(a.ratio, c, "ratio", "1:9");
  if (const auto sweep = layered<std::string>(a.sweep_ratios, c, "sweep_ratios", ""); !sweep.empty())
    r.sweep = split_list(sweep);
  r.splits = layered(a.splits, c, "splits", 10);
  if (a.train_size) r.train_size = a.train_size;
  else if (c.contains("train_size")) r.train_size = c["train_size"].get<int>();
  r.val_fraction = layered(a.val_fraction, c, "val_fraction", 1.0);
  r.train.delta = layered(a.delta, c, "delta", d.delta);
  r.train.augment_count = layered(a.T, c, "T", d.augment_count);
  r.train.tau = layered(a.tau, c, "tau", d.tau);
  r.train.prop_layers = layered(a.prop_layers, c, "prop_layers", d.prop_layers);
  r.train.lr = layered(a.lr, c, "lr", d.lr);
  r.train.weight_decay = layered(a.weight_decay, c, "weight_decay", d.weight_decay);
  r.train.hidden_dim = layered(a.hidden, c, "hidden", d.hidden_dim);
  r.train.encoder_layers = layered(a.layers, c, "layers", d.encoder_layers);
  r.train.epochs = layered(a.epochs, c, "epochs", d.epochs);
  r.train.batch_size = layered(a.batch, c, "batch", d.batch_size);
  r.train.patience = layered(a.patience, c, "patience", d.patience);
  r.train.grad_through_center = layered(a.grad_through_center, c, "grad_through_center", d.grad_through_center);
  r.workers = layered(a.workers, c, "workers", 1);
  if (a.seed) {
    r.train.seed = *a.seed;
  } else if (c.contains("seed")) {
    r.train.seed = c["seed"].get<std::uint64_t>();
  } else {
    std::random_device rd;
    r.train.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    r.seed_generated = true;
  }
  if (r.splits < 1) throw std::invalid_argument("--splits must be >= 1");
  if (r.workers < 1) throw std::invalid_argument("--workers must be >= 1");
  r.train.validate();
  return r;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  if (path.empty() || suffix.empty()) return path;
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_" + suffix + p.extension().string())).string();
}

}  // namespace

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(args);
  const Dataset ds = load_dataset(r.data);
  const std::string checksum = dataset_checksum(ds);
  if (r.seed_generated) err << "note: no --seed given; using generated seed " << r.train.seed << "\n";

  std::optional<GoGraph> gog;
  std::string kernel_name, cache_path;
  if (r.train.uses_gog()) {
    KernelId id = KernelId::parse(r.kernel);
    if (id.kind == KernelKind::WeisfeilerLehman) id.wl_iterations = r.wl_iters;
    const auto cached = obtain_similarity(ds, checksum, id, true, 1, err);
    gog = knn_gog(cached.matrix, r.train.k);
    kernel_name = id.str();
    cache_path = cached.path.string();
  }

  const std::vector<std::string> ratios = r.sweep.empty() ? std::vector<std::string>{r.ratio} : r.sweep;
  for (const auto& ratio : ratios) {
    SplitProtocol protocol;
    std::tie(protocol.ratio_minority, protocol.ratio_majority) = parse_ratio(ratio);
    protocol.train_size = r.train_size;
    protocol.val_fraction = r.val_fraction;

    ExperimentReport report = run_experiment(ds, gog ? &*gog : nullptr, r.train, r.splits, protocol, r.workers);
    report.kernel = kernel_name;

    out << std::fixed << std::setprecision(4) << ds.name << "  " << to_string(r.train.mode) << "  ratio "
        << ratio << "  splits " << r.splits << "  F1-macro " << report.mean_f1_macro << " +- "
        << report.std_f1_macro << "  F1-micro " << report.mean_f1_micro << " +- " << report.std_f1_micro;
    if (!args.no_timing) out << std::setprecision(1) << "  (" << report.runtime_s << " s)";
    out << "\n";

    std::string suffix;
    if (!r.sweep.empty()) {
      suffix = ratio;
      std::replace(suffix.begin(), suffix.end(), ':', '-');
    }
    if (!args.json.empty()) write_text(with_suffix(args.json, suffix), report.to_json(!args.no_timing));
    if (!args.csv.empty()) write_text(with_suffix(args.csv, suffix), report.to_csv(!args.no_timing));
    if (!args.history.empty()) write_text(with_suffix(args.history, suffix), report.history_csv());
  }

  if (!args.manifest.empty()) {
    Json m;
    m["tool"] = "gog";
    m["version"] = GOG_VERSION;
    m["command"] = "train";
    m["config"] = r.to_json();
    m["dataset_checksum"] = checksum;
    m["similarity_cache"] = cache_path.empty() ? Json(nullptr) : Json(cache_path);
    m["seed"] = r.train.seed;
    write_text(args.manifest, m.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace gog::cli
