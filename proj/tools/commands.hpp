#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "common.hpp"

namespace gog::cli {

struct KernelArgs {
  DataOptions data;
  std::string kernel = "sp";
  int wl_iters = 3;
  bool raw = false;
  unsigned workers = 1;
};

struct HomophilyArgs {
  KernelArgs source;
  int k_min = 1;
  int k_max = 5;
  std::string csv;
};

/// Every field is optional so that flags, the config file and built-in
/// defaults can be layered in that order.
struct TrainArgs {
  std::string config;
  std::optional<std::string> dataset, data_dir, features, kernel, mode, ratio, sweep_ratios;
  std::optional<int> wl_iters, k, splits, T, prop_layers, epochs, batch, patience, hidden, layers, train_size, workers;
  std::optional<double> delta, tau, lr, weight_decay, val_fraction;
  std::optional<std::uint64_t> seed;
  std::optional<bool> grad_through_center;
  std::string json, csv, history, manifest;
  bool no_timing = false;
};

struct VerifyArgs {
  int instances = 50;
  std::uint64_t seed = 0;
  std::string json;
  bool inject_fault = false;
};

void add_kernel_options(CLI::App& app, KernelArgs& args);

int cmd_kernel(const KernelArgs& args, std::ostream& out, std::ostream& err);
int cmd_homophily(const HomophilyArgs& args, std::ostream& out, std::ostream& err);
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_stats(const DataOptions& args, std::ostream& out, std::ostream& err);

}  // namespace gog::cli
