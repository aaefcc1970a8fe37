#include "common.hpp"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gog/error.hpp"

namespace gog::cli {
namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <class T>
  void value(const T& v) {
    bytes(&v, sizeof v);
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

Dataset load_dataset(const DataOptions& opts) {
  if (opts.dataset.empty()) throw std::invalid_argument("--dataset is required");
  Dataset ds = load_tudataset(std::filesystem::path(opts.data_dir) / opts.dataset, opts.dataset);
  if (opts.features == "degree") return degree_onehot_features(ds);
  if (opts.features != "auto") throw std::invalid_argument("unknown feature mode '" + opts.features + "'");
  return ds;
}

std::string dataset_checksum(const Dataset& dataset) {
  Fnv1a h;
  h.value(dataset.size());
  h.value(dataset.num_classes);
  for (const auto& g : dataset.graphs) {
    h.value(g.node_count());
    h.value(g.label());
    for (const auto& e : g.edges()) {
      h.value(e.u);
      h.value(e.v);
    }
    h.value(g.features().rows());
    h.value(g.features().cols());
    h.bytes(g.features().data(), sizeof(double) * static_cast<std::size_t>(g.features().size()));
    for (int l : g.node_labels()) h.value(l);
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h.digest();
  return s.str();
}

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("GOG_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".gog_cache";
}

CachedSimilarity obtain_similarity(const Dataset& dataset, const std::string& checksum, const KernelId& kernel,
                                   bool normalize, unsigned workers, std::ostream& log) {
  CachedSimilarity out;
  const auto dir = cache_dir();
  out.path = dir / (dataset.name + "-" + checksum.substr(0, 12) + "-" + kernel.str() + (normalize ? "" : "-raw") +
                    ".gogsim");
  const auto n = static_cast<Eigen::Index>(dataset.size());
  if (std::filesystem::exists(out.path)) {
    try {
      if (auto cached = load_similarity_if_matches(out.path, kernel, n, normalize)) {
        out.matrix = std::move(*cached);
        out.hit = true;
        return out;
      }
      log << "warning: cache " << out.path.string() << " does not match the requested parameters; recomputing\n";
    } catch (const DataError& e) {
      log << "warning: unreadable cache " << out.path.string() << " (" << e.what() << "); recomputing\n";
    }
  }
  const auto start = std::chrono::steady_clock::now();
  out.matrix = similarity_matrix(dataset, kernel, normalize, workers);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::filesystem::create_directories(dir);
  save_similarity(out.matrix, out.path);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace gog::cli
