#ifndef SPLITMC_SPLITFIX_HPP
#define SPLITMC_SPLITFIX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitmc/ground.hpp"
#include "splitmc/valuation_set.hpp"

namespace splitmc {

// Per-node invariant components; components[n] holds valuations of V_n in
// that node's scope order.
struct SplitInvariant {
  std::vector<ValuationSet> components;

  size_t total_states() const {
    size_t t = 0;
    for (const auto& c : components) t += c.size();
    return t;
  }
};

SplitInvariant empty_invariant(const GroundModel& m);
SplitInvariant full_invariant(const GroundModel& m);  // every type-consistent state

bool invariant_equal(const SplitInvariant& a, const SplitInvariant& b);
// a_i subset of b_i for every component.
bool invariant_includes(const SplitInvariant& big, const SplitInvariant& small);

enum class FixpointMode {
  AssumeGuarantee,  // step from theta_i, interference from theta_i & theta_j
  SplitForm,        // both closed under pairwise consistency with every
                    // component sharing variables
};

// Schedules for the chaotic iteration; all reach the same least fixpoint.
struct FixpointSchedule {
  enum class Kind { Worklist, SynchronousRounds, RandomPermutation };
  Kind kind = Kind::Worklist;
  uint64_t seed = 0;  // RandomPermutation only
};

struct FixpointStats {
  uint64_t component_evals = 0;
  uint64_t rounds = 0;
};

// Joint valuations over V_i ∪ V_j whose restrictions lie in a and b;
// agreement on shared variables is enforced. Scope order of the result is
// joint_scope(m, i, j).
std::vector<uint32_t> joint_scope(const GroundModel& m, uint32_t i, uint32_t j);
ValuationSet join(const GroundModel& m, uint32_t i, const ValuationSet& a,
                  uint32_t j, const ValuationSet& b);

// One application of the constraint operator for component i: initial
// projection, own-step image, and interference images from every pointing
// neighbor.
ValuationSet f_step(const GroundModel& m, const SplitInvariant& theta, uint32_t i,
                    FixpointMode mode = FixpointMode::AssumeGuarantee);

// Least simultaneous fixpoint from the all-empty vector (or `start` when
// given, which must be a pre-fixpoint seed to remain meaningful).
SplitInvariant strongest_split_invariant(
    const GroundModel& m, FixpointMode mode = FixpointMode::AssumeGuarantee,
    FixpointSchedule schedule = {}, const SplitInvariant* start = nullptr,
    FixpointStats* stats = nullptr);

// Independent audit of the inductiveness constraints (initiality, step,
// non-interference); deliberately shares no code with the fixpoint engine.
bool verify_inductive(const GroundModel& m, const SplitInvariant& theta,
                      FixpointMode constraints = FixpointMode::AssumeGuarantee);

struct PropertyWitness {
  uint32_t node_a = 0;
  uint32_t node_b = 0;
  std::vector<uint32_t> scope;   // joint scope
  std::vector<uint8_t> values;   // joint valuation satisfying forbid at both
};

struct PropertyVerdict {
  bool proved = false;
  // One witness per offending pair; over-approximate, not a counterexample.
  std::vector<PropertyWitness> witnesses;
};

PropertyVerdict check_property(const GroundModel& m, const SplitInvariant& theta);

// Sorted per-node listing of component states ("node: var=value ...").
void dump_invariant(std::ostream& os, const GroundModel& m,
                    const SplitInvariant& theta);

}  // namespace splitmc

#endif
