#ifndef SPLITMC_REFINE_HPP
#define SPLITMC_REFINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitmc/model.hpp"
#include "splitmc/semantics.hpp"
#include "splitmc/splitfix.hpp"

namespace splitmc {

// Promotion of internal variables of one node to globally visible
// auxiliaries. The local copies remain; every command of that node that
// writes an original also writes its mirror.
struct ExposureStep {
  std::string node;
  std::vector<std::string> vars;
  bool operator==(const ExposureStep&) const = default;
};

enum class Verdict { Proved, Unknown, Violated };
std::string to_string(Verdict v);

struct RefinementStep {
  enum class Kind { Expose, AddLast };
  Kind kind = Kind::Expose;
  ExposureStep exposure;                        // Kind::Expose
  std::pair<std::string, std::string> trigger;  // Kind::AddLast
  Verdict verdict_after = Verdict::Unknown;
  std::vector<size_t> theta_sizes_after;
};

struct RefinementTrace {
  std::vector<RefinementStep> steps;
  bool escalated = false;       // oracle consulted after exhausting exposure
  bool oracle_complete = true;  // false: state cap hit during escalation
};

// Concrete counterexample from the oracle: a run from the initial state to a
// state where two in-scope nodes both satisfy forbid.
struct CounterexamplePath {
  std::vector<std::vector<uint8_t>> states;  // full valuations, init first
  std::vector<std::string> labels;           // command labels between them
  uint32_t node_a = 0, node_b = 0;
};

// Adds auxiliary `last` (domain {"0"} ∪ node ids, init "0"); every command
// that assigns `value` to `var` additionally records the executing node.
ModelFile add_last_auxiliary(const ModelFile& m, const std::string& var,
                             const std::string& value);

ModelFile expose(const ModelFile& m, const ExposureStep& step);

enum class RefineStrategy { ExposeForbidVar, AddLast };

struct RefineOptions {
  RefineStrategy strategy = RefineStrategy::ExposeForbidVar;
  int budget = 64;  // refinement steps before giving up
  uint64_t state_cap = kDefaultStateCap;
  FixpointMode mode = FixpointMode::AssumeGuarantee;
};

struct RefineResult {
  Verdict verdict = Verdict::Unknown;
  RefinementTrace trace;
  ModelFile model;        // the (possibly augmented) model actually checked
  SplitInvariant theta;   // last computed invariant, over `model`
  PropertyVerdict property;
  std::optional<CounterexamplePath> counterexample;
};

// Compute-check-refine loop: strengthens the model with auxiliary state
// until the property is proved, the budget runs out, or everything relevant
// is exposed; in the last case the bounded oracle gives the final answer.
RefineResult refine_loop(const ModelFile& m, const RefineOptions& opts = {});

}  // namespace splitmc

#endif
