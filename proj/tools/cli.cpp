#include "cli.hpp"

#include <filesystem>
#include <stdexcept>

#include "commands.hpp"
#include "gog/error.hpp"

namespace gog::cli {

void add_kernel_options(CLI::App& app, KernelArgs& args) {
  app.add_option("--dataset", args.data.dataset, "TUDataset name, e.g. MUTAG")->required();
  app.add_option("--data-dir", args.data.data_dir, "Directory holding <dataset>/ folders");
  app.add_option("--features", args.data.features, "Node features")->check(CLI::IsMember({"auto", "degree"}));
  app.add_option("--kernel", args.kernel, "Graph kernel")->check(CLI::IsMember({"sp", "wl"}));
  app.add_option("--wl-iters", args.wl_iters, "WL refinement rounds")->check(CLI::NonNegativeNumber);
  app.add_flag("--raw", args.raw, "Skip cosine normalization");
  app.add_option("--workers", args.workers, "Kernel threads")->check(CLI::PositiveNumber);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"G2GNN: imbalanced graph classification over a graph of graphs", "gog"};
  app.set_version_flag("--version", GOG_VERSION);
  app.require_subcommand(1);

  KernelArgs kernel;
  auto* kernel_cmd = app.add_subcommand("kernel", "Compute and cache the pairwise similarity matrix");
  add_kernel_options(*kernel_cmd, kernel);

  HomophilyArgs homophily;
  auto* homophily_cmd = app.add_subcommand("homophily", "Edge homophily of kNN GoGs over a range of k");
  add_kernel_options(*homophily_cmd, homophily.source);
  homophily_cmd->add_option("--k-min", homophily.k_min, "Smallest k");
  homophily_cmd->add_option("--k-max", homophily.k_max, "Largest k");
  homophily_cmd->add_option("--k", [&](const CLI::results_t& r) {
    homophily.k_min = homophily.k_max = std::stoi(r.front());
    return true;
  }, "Single k");
  homophily_cmd->add_option("--csv", homophily.csv, "Write kernel,k,homophily rows");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train and evaluate over imbalanced splits");
  train_cmd->add_option("--config", train.config, "JSON config (or a run manifest)");
  train_cmd->add_option("--dataset", train.dataset);
  train_cmd->add_option("--data-dir", train.data_dir);
  train_cmd->add_option("--features", train.features)->check(CLI::IsMember({"auto", "degree"}));
  train_cmd->add_option("--kernel", train.kernel)->check(CLI::IsMember({"sp", "wl"}));
  train_cmd->add_option("--wl-iters", train.wl_iters);
  train_cmd->add_option("--mode", train.mode)
      ->check(CLI::IsMember({"g2gnn_edge", "g2gnn_node", "gin_plain", "gin_up", "gin_rw"}));
  train_cmd->add_option("--k", train.k, "Neighbors per graph in the GoG");
  train_cmd->add_option("--ratio", train.ratio, "Minority:majority training ratio, e.g. 1:9");
  train_cmd->add_option("--sweep-ratios", train.sweep_ratios, "Comma-separated ratios; one report each");
  train_cmd->add_option("--train-size", train.train_size, "Training graphs per split (default 25% of the data)");
  train_cmd->add_option("--val-fraction", train.val_fraction, "Validation size relative to the training size");
  train_cmd->add_option("--splits", train.splits);
  train_cmd->add_option("--delta", train.delta, "Augmentation ratio");
  train_cmd->add_option("--T", train.T, "Augmented variants per graph");
  train_cmd->add_option("--tau", train.tau, "Sharpening temperature");
  train_cmd->add_option("--prop-layers", train.prop_layers);
  train_cmd->add_option("--lr", train.lr);
  train_cmd->add_option("--weight-decay", train.weight_decay);
  train_cmd->add_option("--hidden", train.hidden);
  train_cmd->add_option("--layers", train.layers, "GIN layers");
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--batch", train.batch);
  train_cmd->add_option("--patience", train.patience);
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--grad-through-center", train.grad_through_center);
  train_cmd->add_option("--workers", train.workers, "Splits trained in parallel");
  train_cmd->add_option("--json", train.json, "Report JSON path");
  train_cmd->add_option("--csv", train.csv, "Per-split CSV path");
  train_cmd->add_option("--history", train.history, "Per-epoch CSV path");
  train_cmd->add_option("--manifest", train.manifest, "Run manifest path");
  train_cmd->add_flag("--no-timing", train.no_timing, "Omit wall-clock fields from reports");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Property checks: stationarity, smoothing bound, gradients");
  verify_cmd->add_option("--instances", verify.instances, "Random instances per suite")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--json", verify.json, "Write machine-readable results");
  verify_cmd->add_flag("--inject-fault", verify.inject_fault)->group("");

  DataOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("--dataset", stats.dataset)->required();
  stats_cmd->add_option("--data-dir", stats.data_dir);
  stats_cmd->add_option("--features", stats.features)->check(CLI::IsMember({"auto", "degree"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*kernel_cmd) return cmd_kernel(kernel, out, err);
    if (*homophily_cmd) return cmd_homophily(homophily, out, err);
    if (*train_cmd) return cmd_train(train, out, err);
    if (*verify_cmd) return cmd_verify(verify, out, err);
    if (*stats_cmd) return cmd_stats(stats, out, err);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace gog::cli
