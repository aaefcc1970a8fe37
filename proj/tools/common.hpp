#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "gog/graph.hpp"
#include "gog/kernel.hpp"

namespace gog::cli {

struct DataOptions {
  std::string dataset;
  std::string data_dir = "data";
  /// "auto" keeps the loader's choice; "degree" uses one-hot degrees.
  std::string features = "auto";
};

Dataset load_dataset(const DataOptions& opts);

/// FNV-1a over the parsed dataset (structure, features, labels), hex encoded.
std::string dataset_checksum(const Dataset& dataset);

/// $GOG_CACHE_DIR, or .gog_cache under the working directory.
std::filesystem::path cache_dir();

struct CachedSimilarity {
  SimilarityMatrix matrix;
  std::filesystem::path path;
  bool hit = false;
  double seconds = 0.0;
};

/// Loads the similarity matrix from the cache or computes and stores it.
/// Mismatched or unreadable cache files are reported on `log` and replaced.
CachedSimilarity obtain_similarity(const Dataset& dataset, const std::string& checksum, const KernelId& kernel,
                                   bool normalize, unsigned workers, std::ostream& log);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gog::cli
