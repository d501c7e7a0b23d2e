#ifndef SPLITMC_SEMANTICS_HPP
#define SPLITMC_SEMANTICS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "splitmc/ground.hpp"
#include "splitmc/valuation_set.hpp"

namespace splitmc {

inline constexpr uint64_t kDefaultStateCap = 10'000'000;

// The single state of all initial values, as a one-element set.
ValuationSet initial_states(const GroundModel& m);

// Strongest postcondition: immediate successors of z under the given ground
// commands. Command refs are (node, command index) pairs.
struct CommandRef {
  uint32_t node;
  uint32_t index;
  auto operator<=>(const CommandRef&) const = default;
};
std::vector<CommandRef> all_commands(const GroundModel& m);
ValuationSet sp(const GroundModel& m, const std::vector<CommandRef>& ts,
                const ValuationSet& z);

struct ReachResult {
  ValuationSet states;
  bool complete = true;      // false: capacity-exceeded, states holds the
                             // prefix explored so far
  uint64_t cap = 0;
  // Parent links for path extraction, present when requested:
  // parent[i] = predecessor state index, parent_cmd[i] = command taken.
  std::vector<uint32_t> parent;
  std::vector<CommandRef> parent_cmd;
};

// Global reachability by frontier BFS; the exhaustive oracle.
ReachResult reach(const GroundModel& m, uint64_t state_cap = kDefaultStateCap,
                  bool track_parents = false);

// Restriction of every state to V_node, deduplicated.
ValuationSet project(const GroundModel& m, const ValuationSet& z, uint32_t node);

// One state per line, canonical variable order, lines sorted.
void dump_states(std::ostream& os, const GroundModel& m, const ValuationSet& z,
                 const std::vector<uint32_t>* vars = nullptr);

// Index sequence from the initial state to `target` (inclusive); requires
// track_parents.
std::vector<uint32_t> extract_path(const ReachResult& r, uint32_t target);

}  // namespace splitmc

#endif
