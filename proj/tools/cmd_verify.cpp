#include <iomanip>

#include <json.hpp>

#include "cli.hpp"
#include "commands.hpp"
#include "verify.hpp"

namespace gog::cli {

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const auto results = run_verify({args.instances, args.seed, args.inject_fault});
  bool all = true;
  nlohmann::ordered_json j;
  j["seed"] = args.seed;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    out << std::left << std::setw(36) << r.name << (r.passed ? "PASS" : "FAIL") << "  " << r.instances - r.failures
        << "/" << r.instances << "  max_error " << std::scientific << std::setprecision(2) << r.max_error
        << std::defaultfloat << "\n";
    if (!r.passed) err << r.name << ": " << r.detail << "\n";
    checks.push_back({{"name", r.name},
                      {"passed", r.passed},
                      {"instances", r.instances},
                      {"failures", r.failures},
                      {"max_error", std::isfinite(r.max_error) ? nlohmann::ordered_json(r.max_error) : nullptr},
                      {"tolerance", r.tolerance},
                      {"detail", r.detail}});
  }
  j["checks"] = checks;
  j["passed"] = all;
  if (!args.json.empty()) write_text(args.json, j.dump(2) + "\n");
  return all ? kOk : kProperty;
}

}  // namespace gog::cli
