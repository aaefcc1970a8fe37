#include <fstream>
#include <iomanip>
#include <sstream>

#include "cli.hpp"
#include "commands.hpp"

namespace gog::cli {
namespace {

KernelId kernel_id(const KernelArgs& args) {
  KernelId id = KernelId::parse(args.kernel);
  if (id.kind == KernelKind::WeisfeilerLehman) id.wl_iterations = args.wl_iters;
  return id;
}

}  // namespace

int cmd_kernel(const KernelArgs& args, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_dataset(args.data);
  const auto id = kernel_id(args);
  const auto cached = obtain_similarity(ds, dataset_checksum(ds), id, !args.raw, args.workers, err);
  if (cached.hit) {
    out << "cache hit: " << cached.path.string() << "\n";
  } else {
    out << "computed " << id.str() << " kernel for " << ds.name << " (" << ds.size() << " graphs) in "
        << std::fixed << std::setprecision(3) << cached.seconds << " s -> " << cached.path.string() << "\n";
  }
  return kOk;
}

int cmd_homophily(const HomophilyArgs& args, std::ostream& out, std::ostream& err) {
  if (args.k_min > args.k_max) throw std::invalid_argument("--k-min exceeds --k-max");
  const Dataset ds = load_dataset(args.source.data);
  const auto id = kernel_id(args.source);
  const auto cached = obtain_similarity(ds, dataset_checksum(ds), id, !args.source.raw, args.source.workers, err);
  const auto labels = ds.labels();

  std::ostringstream csv;
  csv << "kernel,k,homophily\n";
  out << "kernel  k    homophily\n";
  bool any_error = false;
  for (int k = args.k_min; k <= args.k_max; ++k) {
    std::string value;
    try {
      std::ostringstream v;
      v << std::fixed << std::setprecision(4) << edge_homophily(knn_gog(cached.matrix, k), labels);
      value = v.str();
    } catch (const std::invalid_argument& e) {
      value = std::string("error: ") + e.what();
      any_error = true;
    }
    out << std::left << std::setw(8) << id.str() << std::setw(5) << k << value << "\n";
    csv << id.str() << ',' << k << ',' << (value.rfind("error", 0) == 0 ? "\"" + value + "\"" : value) << "\n";
  }
  if (!args.csv.empty()) write_text(args.csv, csv.str());
  return any_error ? kUsage : kOk;
}

int cmd_stats(const DataOptions& args, std::ostream& out, std::ostream&) {
  const Dataset ds = load_dataset(args);
  const auto st = compute_stats(ds);
  out << std::fixed << std::setprecision(2);
  out << "dataset      " << ds.name << "\n"
      << "graphs       " << st.graph_count << "\n"
      << "avg nodes    " << st.avg_nodes << "\n"
      << "avg edges    " << st.avg_edges << "\n"
      << "feature dim  " << st.feature_dim << "\n"
      << "classes      " << ds.num_classes << " [";
  for (std::size_t c = 0; c < st.class_histogram.size(); ++c) out << (c ? " " : "") << st.class_histogram[c];
  out << "]\nchecksum     " << dataset_checksum(ds) << "\n";
  return kOk;
}

}  // namespace gog::cli
