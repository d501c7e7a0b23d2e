#ifndef SPLITMC_TOOLS_CLI_HPP
#define SPLITMC_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splitmc/model.hpp"

// Command implementations shared by the binary and the test suites. Every
// run_* function returns the process exit code (0 proved/ok, 1 unknown,
// 2 violated, 3 input error) plus the JSON report it printed; reports are
// byte-stable across runs except for the "timings" object.
namespace splitmc::cli {

uint64_t default_state_cap();  // SPLITMC_STATE_CAP env override

struct Outcome {
  int exit_code = 0;
  nlohmann::json report;
};

struct GenOptions {
  std::string family;              // ring|star|torus|line|degrees
  int size = 0;                    // ring/star/line/mutex count
  int rows = 0, cols = 0;          // torus
  std::vector<int> degrees;        // degrees family
  std::string protocol = "dining"; // dining|mutex|mutex-last
  std::string out;                 // empty: stdout
};
Outcome run_gen(const GenOptions& opts);

struct CheckOptions {
  std::string model_path;
  std::string mode = "ag";      // ag|split-form
  std::string refine = "none";  // none|expose|last
  int budget = 64;
  bool symmetry_reduce = false;
  uint64_t oracle_audit = 0;  // 0: off; else state cap for the audit
  std::string report_path;
  std::string dump_theta_path;
  uint64_t state_cap = 0;  // 0: default
};
Outcome run_check(const CheckOptions& opts);

struct SymmetryOptions {
  std::string model_path;
  std::string dot_path;
  std::string report_path;
};
Outcome run_symmetry(const SymmetryOptions& opts);

struct AbstractOptions {
  std::string model_path;
  std::vector<std::pair<std::string, std::string>> predicates;  // name, guard
  bool identity = false;
  std::string dot_path;  // first node's graph; per-node files for dot_all
  std::string report_path;
};
Outcome run_abstract(const AbstractOptions& opts);

struct ReachOptions {
  std::string model_path;
  uint64_t cap = 0;  // 0: default
  std::string dump_path;
  std::string report_path;
};
Outcome run_reach(const ReachOptions& opts);

struct BenchOptions {
  std::string protocol = "dining";  // dining|mutex|mutex-last
  std::string family = "ring";
  std::vector<int> sizes;
  std::string mode = "ag";
  std::string csv_path;  // empty: stdout
};
Outcome run_bench(const BenchOptions& opts);

// Writes the report (or the primary payload) and prints to stdout when no
// path is given; used by main.
void emit(const Outcome& outcome, const std::string& report_path);

}  // namespace splitmc::cli

#endif
