#include "gog/kernel.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace gog {
namespace {

constexpr std::uint64_t kLabelBits = 21;
constexpr std::uint64_t kLabelMask = (std::uint64_t{1} << kLabelBits) - 1;

FeatureHistogram run_length(std::vector<std::uint64_t>& keys) {
  std::sort(keys.begin(), keys.end());
  FeatureHistogram out;
  for (auto key : keys) {
    if (!out.empty() && out.back().first == key)
      ++out.back().second;
    else
      out.emplace_back(key, 1);
  }
  return out;
}

std::uint64_t label_code(int label) {
  if (label < 0 || static_cast<std::uint64_t>(label) > kLabelMask)
    throw std::invalid_argument("node label out of kernel range: " + std::to_string(label));
  return static_cast<std::uint64_t>(label);
}

}  // namespace

std::string KernelId::str() const {
  return kind == KernelKind::ShortestPath ? "sp" : "wl-h" + std::to_string(wl_iterations);
}

KernelId KernelId::parse(const std::string& text) {
  if (text == "sp") return {KernelKind::ShortestPath, 3};
  if (text == "wl") return {KernelKind::WeisfeilerLehman, 3};
  if (text.rfind("wl-h", 0) == 0) {
    try {
      std::size_t used = 0;
      int h = std::stoi(text.substr(4), &used);
      if (used == text.size() - 4 && h >= 0) return {KernelKind::WeisfeilerLehman, h};
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("unknown kernel id '" + text + "'");
}

double histogram_dot(const FeatureHistogram& a, const FeatureHistogram& b) {
  double sum = 0.0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += static_cast<double>(i->second) * static_cast<double>(j->second);
      ++i;
      ++j;
    }
  }
  return sum;
}

FeatureHistogram shortest_path_features(const Graph& g) {
  const int n = g.node_count();
  const auto adj = g.adjacency_lists();
  const auto labels = g.labels_or_uniform();
  std::vector<std::uint64_t> keys;
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<int> queue(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      int v = queue[head++];
      for (int w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
      }
    }
    for (int t = s + 1; t < n; ++t) {
      if (dist[t] < 0) continue;
      auto a = label_code(labels[s]), b = label_code(labels[t]);
      if (a > b) std::swap(a, b);
      keys.push_back((static_cast<std::uint64_t>(dist[t]) << (2 * kLabelBits)) | (a << kLabelBits) | b);
    }
  }
  return run_length(keys);
}

double shortest_path_kernel(const Graph& g1, const Graph& g2) {
  return histogram_dot(shortest_path_features(g1), shortest_path_features(g2));
}

WlColorer::WlColorer(int iterations) : iterations_(iterations) {
  if (iterations < 0) throw std::invalid_argument("WL iterations must be >= 0");
}

std::vector<FeatureHistogram> WlColorer::features(const std::vector<const Graph*>& graphs) {
  // key = round << 40 | color id; color ids are dense per round and assigned
  // in order of first appearance, so the dictionary is shared by all graphs.
  std::vector<std::vector<std::uint64_t>> keys(graphs.size());
  std::vector<std::vector<int>> colors(graphs.size());
  std::vector<std::vector<std::vector<int>>> adj(graphs.size());

  std::map<int, int> initial;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    adj[g] = graphs[g]->adjacency_lists();
    for (int label : graphs[g]->labels_or_uniform()) {
      auto [it, _] = initial.emplace(label, static_cast<int>(initial.size()));
      colors[g].push_back(it->second);
      keys[g].push_back(static_cast<std::uint64_t>(it->second));
    }
  }

  std::vector<int> signature;
  for (int round = 1; round <= iterations_; ++round) {
    std::map<std::vector<int>, int> dictionary;
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      std::vector<int> next(colors[g].size());
      for (std::size_t v = 0; v < colors[g].size(); ++v) {
        signature.clear();
        signature.push_back(colors[g][v]);
        for (int w : adj[g][v]) signature.push_back(colors[g][w]);
        std::sort(signature.begin() + 1, signature.end());
        auto [it, _] = dictionary.emplace(signature, static_cast<int>(dictionary.size()));
        next[v] = it->second;
        keys[g].push_back((static_cast<std::uint64_t>(round) << 40) | static_cast<std::uint64_t>(it->second));
      }
      colors[g] = std::move(next);
    }
  }

  std::vector<FeatureHistogram> out;
  out.reserve(graphs.size());
  for (auto& k : keys) out.push_back(run_length(k));
  return out;
}

double wl_kernel(const Graph& g1, const Graph& g2, int iterations) {
  auto f = WlColorer(iterations).features({&g1, &g2});
  return histogram_dot(f[0], f[1]);
}

}  // namespace gog
