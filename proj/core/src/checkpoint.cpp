#include <bit>
#include <cstring>
#include <fstream>

#include "gog/error.hpp"
#include "gog/nn.hpp"

namespace gog::nn {
namespace {

constexpr char kMagic[] = "GOGMDL v1\n";

template <typename T>
T byteswap_if_big(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::ostream& out, T v) {
  v = byteswap_if_big(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError(path.string() + ": truncated checkpoint");
  return byteswap_if_big(v);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedParameter>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic) - 1);
  put<std::uint64_t>(out, params.size());
  for (const auto& p : params) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p.tensor.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p.tensor.cols()));
    const Matrix& m = p.tensor.value();
    for (Eigen::Index i = 0; i < m.size(); ++i) put<double>(out, m.data()[i]);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<std::pair<std::string, Matrix>> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[sizeof(kMagic) - 1];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw DataError(path.string() + ": not a GOGMDL v1 checkpoint");
  const auto count = get<std::uint64_t>(in, path);
  std::vector<std::pair<std::string, Matrix>> out;
  for (std::uint64_t b = 0; b < count; ++b) {
    const auto len = get<std::uint32_t>(in, path);
    std::string name(len, '\0');
    if (!in.read(name.data(), len)) throw DataError(path.string() + ": truncated checkpoint");
    const auto rank = get<std::uint32_t>(in, path);
    if (rank < 1 || rank > 2) throw DataError(path.string() + ": unsupported rank for " + name);
    const auto rows = get<std::uint64_t>(in, path);
    const auto cols = rank == 2 ? get<std::uint64_t>(in, path) : std::uint64_t{1};
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = get<double>(in, path);
    out.emplace_back(std::move(name), std::move(m));
  }
  return out;
}

}  // namespace gog::nn
