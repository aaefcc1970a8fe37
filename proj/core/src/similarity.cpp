#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "gog/error.hpp"
#include "gog/kernel.hpp"

namespace gog {
namespace {

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) {
    return bits;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
  }
}

std::string header_line(const KernelId& kernel, Eigen::Index n, bool normalized) {
  return "GOGSIM v1 " + kernel.str() + " " + std::to_string(n) + " " + (normalized ? "1" : "0");
}

struct CacheHeader {
  KernelId kernel;
  Eigen::Index n = 0;
  bool normalized = false;
};

CacheHeader read_header(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty similarity cache");
  std::istringstream fields(line);
  std::string magic, version, kernel;
  long long n = -1;
  int normalized = -1;
  fields >> magic >> version >> kernel >> n >> normalized;
  if (!fields || magic != "GOGSIM" || version != "v1" || n < 0 || (normalized != 0 && normalized != 1))
    throw DataError(path.string() + ": bad similarity cache header '" + line + "'");
  return {KernelId::parse(kernel), static_cast<Eigen::Index>(n), normalized == 1};
}

}  // namespace

SimilarityMatrix similarity_matrix(const Dataset& dataset, const KernelId& kernel, bool normalize,
                                   unsigned workers) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  if (n == 0) throw DataError("similarity matrix of an empty dataset");

  std::vector<FeatureHistogram> features;
  if (kernel.kind == KernelKind::ShortestPath) {
    features.resize(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) features[i] = shortest_path_features(dataset.graphs[i]);
  } else {
    std::vector<const Graph*> ptrs;
    for (const auto& g : dataset.graphs) ptrs.push_back(&g);
    features = WlColorer(kernel.wl_iterations).features(ptrs);
  }

  SimilarityMatrix s{Matrix::Zero(n, n), normalize, kernel};
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  auto fill_rows = [&](unsigned first) {
    for (Eigen::Index i = first; i < n; i += workers)
      for (Eigen::Index j = i; j < n; ++j) s.values(i, j) = histogram_dot(features[i], features[j]);
  };
  if (workers == 1) {
    fill_rows(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) s.values(i, j) = s.values(j, i);

  if (normalize) {
    Eigen::VectorXd diag = s.values.diagonal();
    for (Eigen::Index i = 0; i < n; ++i)
      if (!(diag[i] > 0.0))
        throw DataError("graph " + std::to_string(i) + " has zero self-similarity under kernel " + kernel.str());
    for (Eigen::Index i = 0; i < n; ++i) {
      s.values(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = s.values(i, j) / std::sqrt(diag[i] * diag[j]);
        s.values(i, j) = v;
        s.values(j, i) = v;
      }
    }
  }
  return s;
}

void save_similarity(const SimilarityMatrix& s, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << header_line(s.kernel, s.size(), s.normalized) << '\n';
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    for (Eigen::Index j = i; j < s.size(); ++j) {
      auto bits = to_little_endian(std::bit_cast<std::uint64_t>(s.values(i, j)));
      char buf[8];
      std::memcpy(buf, &bits, 8);
      out.write(buf, 8);
    }
  }
  if (!out) throw DataError("failed writing " + path.string());
}

SimilarityMatrix load_similarity(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  auto header = read_header(in, path);
  SimilarityMatrix s{Matrix::Zero(header.n, header.n), header.normalized, header.kernel};
  for (Eigen::Index i = 0; i < header.n; ++i) {
    for (Eigen::Index j = i; j < header.n; ++j) {
      char buf[8];
      if (!in.read(buf, 8)) throw DataError(path.string() + ": truncated similarity payload");
      std::uint64_t bits;
      std::memcpy(&bits, buf, 8);
      const double v = std::bit_cast<double>(to_little_endian(bits));
      s.values(i, j) = v;
      s.values(j, i) = v;
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DataError(path.string() + ": trailing bytes after payload");
  return s;
}

std::optional<SimilarityMatrix> load_similarity_if_matches(const std::filesystem::path& path,
                                                           const KernelId& kernel, Eigen::Index n,
                                                           bool normalized) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  CacheHeader header;
  try {
    header = read_header(in, path);
  } catch (const DataError&) {
    return std::nullopt;
  }
  if (!(header.kernel == kernel) || header.n != n || header.normalized != normalized) return std::nullopt;
  in.close();
  return load_similarity(path);
}

}  // namespace gog
