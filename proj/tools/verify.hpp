#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gog/graph.hpp"

namespace gog::cli {

struct CheckResult {
  std::string name;
  bool passed = true;
  int instances = 0;
  int failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;  ///< first failure, if any
};

struct VerifyOptions {
  int instances = 50;
  std::uint64_t seed = 0;
  bool inject_fault = false;
};

/// Random connected undirected graph on n nodes: a random spanning tree plus
/// each remaining pair with probability `extra`.
std::vector<Edge> random_connected_edges(int n, double extra, std::uint64_t seed);

CheckResult check_stationary(const VerifyOptions& opts);
CheckResult check_smoothing_bound(const VerifyOptions& opts);
std::vector<CheckResult> check_gradients(const VerifyOptions& opts);

std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace gog::cli
