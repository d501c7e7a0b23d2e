#ifndef SPLITMC_GENERATORS_HPP
#define SPLITMC_GENERATORS_HPP

#include "splitmc/model.hpp"

namespace splitmc {

// Dining-philosophers protocol over an arbitrary network. Every edge becomes
// a fork with domain {endpoint ids, "bot"} initialized to "bot"; every node
// runs the same hungry/acquire/release/eat cycle. Property: no two adjacent
// nodes eat simultaneously.
ModelFile gen_dining(const NetworkGraph& g);

// Test-and-set mutual exclusion: n isolated nodes sharing a boolean
// auxiliary x; with_last additionally records the last node to enter the
// critical state in an auxiliary `last`. Property: no two nodes in E.
ModelFile gen_mutex(int n, bool with_last);

// Reserved value tokens used by the generators.
inline constexpr const char* kBottom = "bot";
inline constexpr const char* kSelf = "self";

}  // namespace splitmc

#endif
