#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <string_view>

#include "gog/error.hpp"
#include "gog/graph.hpp"

namespace gog {
namespace {

namespace fs = std::filesystem;

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_separator(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

/// A non-blank line split into fields, with its 1-based line number.
struct Row {
  std::size_t line;
  std::vector<std::string_view> fields;
};

class TextTable {
 public:
  explicit TextTable(const fs::path& path) : name_(path.filename().string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    while (std::getline(in, line)) lines_.push_back(line);
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      auto f = split_fields(lines_[i]);
      if (!f.empty()) rows_.push_back({i + 1, std::move(f)});
    }
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::string& name() const { return name_; }

  long long integer(const Row& row, std::size_t field) const {
    if (field >= row.fields.size()) throw ParseError(name_, row.line, "missing field");
    auto tok = row.fields[field];
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError(name_, row.line, "expected integer, got '" + std::string(tok) + "'");
    return v;
  }

  double real(const Row& row, std::size_t field) const {
    auto tok = row.fields[field];
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError(name_, row.line, "expected number, got '" + std::string(tok) + "'");
    return v;
  }

 private:
  std::string name_;
  std::vector<std::string> lines_;
  std::vector<Row> rows_;
};

fs::path member(const fs::path& dir, const std::string& name, const char* suffix) {
  return dir / (name + suffix);
}

/// Maps arbitrary integer values onto [0, distinct) preserving order.
std::map<long long, int> contiguous_codes(const std::vector<long long>& values) {
  std::map<long long, int> codes;
  for (auto v : values) codes.emplace(v, 0);
  int next = 0;
  for (auto& [_, code] : codes) code = next++;
  return codes;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset load_tudataset(const fs::path& dir, const std::string& name) {
  for (const char* required : {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt"}) {
    if (!fs::exists(member(dir, name, required)))
      throw DataError("missing required file " + member(dir, name, required).string());
  }

  TextTable labels_file(member(dir, name, "_graph_labels.txt"));
  std::vector<long long> raw_graph_labels;
  for (const auto& row : labels_file.rows()) raw_graph_labels.push_back(labels_file.integer(row, 0));
  const std::size_t num_graphs = raw_graph_labels.size();
  if (num_graphs == 0) throw DataError(labels_file.name() + ": no graphs");

  TextTable indicator(member(dir, name, "_graph_indicator.txt"));
  const std::size_t num_nodes = indicator.rows().size();
  std::vector<int> graph_of(num_nodes), local_index(num_nodes);
  std::vector<int> node_count(num_graphs, 0);
  for (std::size_t k = 0; k < num_nodes; ++k) {
    const auto& row = indicator.rows()[k];
    long long gid = indicator.integer(row, 0);
    if (gid < 1 || static_cast<std::size_t>(gid) > num_graphs)
      throw ParseError(indicator.name(), row.line,
                       "graph id " + std::to_string(gid) + " outside [1, " + std::to_string(num_graphs) + "]");
    graph_of[k] = static_cast<int>(gid - 1);
    local_index[k] = node_count[graph_of[k]]++;
  }
  for (std::size_t g = 0; g < num_graphs; ++g)
    if (node_count[g] == 0) throw DataError("graph " + std::to_string(g + 1) + " has no nodes");

  std::vector<std::vector<Edge>> edges(num_graphs);
  TextTable adjacency(member(dir, name, "_A.txt"));
  for (const auto& row : adjacency.rows()) {
    long long i = adjacency.integer(row, 0), j = adjacency.integer(row, 1);
    for (long long node : {i, j}) {
      if (node < 1 || static_cast<std::size_t>(node) > num_nodes)
        throw ParseError(adjacency.name(), row.line, "node id " + std::to_string(node) + " out of range");
    }
    const int gi = graph_of[i - 1], gj = graph_of[j - 1];
    if (gi != gj)
      throw ParseError(adjacency.name(), row.line,
                       "edge (" + std::to_string(i) + ", " + std::to_string(j) + ") crosses graphs " +
                           std::to_string(gi + 1) + " and " + std::to_string(gj + 1));
    int u = local_index[i - 1], v = local_index[j - 1];
    if (u == v) continue;  // self-loops are not stored
    edges[gi].push_back({std::min(u, v), std::max(u, v)});
  }

  std::vector<std::vector<int>> node_labels(num_graphs);
  int label_width = 0;
  const auto labels_path = member(dir, name, "_node_labels.txt");
  const bool has_labels = fs::exists(labels_path);
  if (has_labels) {
    TextTable t(labels_path);
    if (t.rows().size() != num_nodes)
      throw DataError(t.name() + ": expected " + std::to_string(num_nodes) + " rows, got " +
                      std::to_string(t.rows().size()));
    std::vector<long long> raw;
    raw.reserve(num_nodes);
    for (const auto& row : t.rows()) raw.push_back(t.integer(row, 0));
    auto codes = contiguous_codes(raw);
    label_width = static_cast<int>(codes.size());
    for (std::size_t g = 0; g < num_graphs; ++g) node_labels[g].assign(node_count[g], 0);
    for (std::size_t k = 0; k < num_nodes; ++k) node_labels[graph_of[k]][local_index[k]] = codes.at(raw[k]);
  }

  std::vector<Matrix> features(num_graphs);
  FeatureSource source = FeatureSource::Constant;
  const auto attr_path = member(dir, name, "_node_attributes.txt");
  if (fs::exists(attr_path)) {
    source = FeatureSource::Attributes;
    TextTable t(attr_path);
    if (t.rows().size() != num_nodes)
      throw DataError(t.name() + ": expected " + std::to_string(num_nodes) + " rows, got " +
                      std::to_string(t.rows().size()));
    const auto dim = static_cast<Eigen::Index>(t.rows().front().fields.size());
    for (std::size_t g = 0; g < num_graphs; ++g) features[g] = Matrix::Zero(node_count[g], dim);
    for (std::size_t k = 0; k < num_nodes; ++k) {
      const auto& row = t.rows()[k];
      if (static_cast<Eigen::Index>(row.fields.size()) != dim)
        throw ParseError(t.name(), row.line, "expected " + std::to_string(dim) + " attributes");
      for (Eigen::Index c = 0; c < dim; ++c) features[graph_of[k]](local_index[k], c) = t.real(row, c);
    }
  } else if (has_labels) {
    source = FeatureSource::NodeLabels;
    for (std::size_t g = 0; g < num_graphs; ++g) {
      features[g] = Matrix::Zero(node_count[g], label_width);
      for (int v = 0; v < node_count[g]; ++v) features[g](v, node_labels[g][v]) = 1.0;
    }
  } else {
    for (std::size_t g = 0; g < num_graphs; ++g) features[g] = Matrix::Ones(node_count[g], 1);
  }

  auto class_codes = contiguous_codes(raw_graph_labels);
  Dataset ds{name, {}, static_cast<int>(class_codes.size()), source};
  ds.graphs.reserve(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    ds.graphs.emplace_back(node_count[g], std::move(edges[g]), std::move(features[g]), std::move(node_labels[g]),
                           class_codes.at(raw_graph_labels[g]));
  }
  ds.validate();
  return ds;
}

void save_tudataset(const Dataset& dataset, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& name = dataset.name;
  std::ofstream a(member(dir, name, "_A.txt"));
  std::ofstream ind(member(dir, name, "_graph_indicator.txt"));
  std::ofstream gl(member(dir, name, "_graph_labels.txt"));
  const bool write_labels = !dataset.graphs.empty() && dataset.graphs.front().has_node_labels();
  const bool write_attrs =
      dataset.feature_source == FeatureSource::Attributes || dataset.feature_source == FeatureSource::Degree;
  std::ofstream nl, na;
  if (write_labels) nl.open(member(dir, name, "_node_labels.txt"));
  if (write_attrs) na.open(member(dir, name, "_node_attributes.txt"));

  long long offset = 0;
  for (std::size_t g = 0; g < dataset.size(); ++g) {
    const auto& graph = dataset.graphs[g];
    gl << graph.label() << '\n';
    for (const auto& e : graph.edges()) {
      a << offset + e.u + 1 << ", " << offset + e.v + 1 << '\n';
      a << offset + e.v + 1 << ", " << offset + e.u + 1 << '\n';
    }
    for (int v = 0; v < graph.node_count(); ++v) {
      ind << g + 1 << '\n';
      if (write_labels) nl << graph.node_labels()[v] << '\n';
      if (write_attrs) {
        for (Eigen::Index c = 0; c < graph.feature_dim(); ++c)
          na << (c ? ", " : "") << format_real(graph.features()(v, c));
        na << '\n';
      }
    }
    offset += graph.node_count();
  }
  if (!a || !ind || !gl) throw DataError("failed writing dataset to " + dir.string());
}

}  // namespace gog
