#ifndef SPLITMC_SYMMETRY_HPP
#define SPLITMC_SYMMETRY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "splitmc/ground.hpp"
#include "splitmc/splitfix.hpp"

namespace splitmc {

// Direction-preserving isomorphism between the neighborhoods of two nodes.
// edge_map is aligned with nbhd_edges(m): edge_map[k] is the image (a global
// edge index in n's neighborhood) of nbhd_edges(m)[k]. Auxiliaries map to
// themselves and are left implicit. Triples are admitted only when renaming
// m's ground commands through the map yields exactly n's ground commands, so
// symmetric nodes are behaviorally identical, not just structurally.
struct LocalSymmetry {
  uint32_t m = 0;
  uint32_t n = 0;
  std::vector<uint32_t> edge_map;
  bool operator==(const LocalSymmetry&) const = default;
};

LocalSymmetry identity_symmetry(const GroundModel& g, uint32_t m);
LocalSymmetry inverse(const GroundModel& g, const LocalSymmetry& s);
// compose(second, first): apply `first`, then `second`; first.n == second.m.
LocalSymmetry compose(const GroundModel& g, const LocalSymmetry& second,
                      const LocalSymmetry& first);

// All process-compatible local symmetries between all node pairs.
std::vector<LocalSymmetry> groupoid(const GroundModel& g);

bool closed_under_groupoid_laws(const GroundModel& g,
                                const std::vector<LocalSymmetry>& rel);

struct BalanceRelation {
  std::vector<LocalSymmetry> triples;
};

// Does every triple have matching triples for all pointing neighbors, with
// agreement on shared edges? Direct restatement of the balance condition,
// used as the post-fixpoint audit.
bool balanced(const GroundModel& g, const BalanceRelation& b);

// Greatest balance relation inside `g` (iterated removal with a worklist
// keyed by dependent node pairs, then sub-groupoid closure re-established).
BalanceRelation largest_balance(const GroundModel& g,
                                std::vector<LocalSymmetry> candidates);

// Network automorphism: a node permutation plus an edge permutation that
// preserve the connection relation.
struct Automorphism {
  std::vector<uint32_t> node_map;
  std::vector<uint32_t> edge_map;
};

// Triples {(m, beta|nbhd(m), node_map[m])} for every automorphism; throws on
// non-automorphism input. The result is audited against the balance
// condition before being returned.
BalanceRelation induced_balance_from_group(const GroundModel& g,
                                           const std::vector<Automorphism>& group);

// Image of a component under a symmetry: edge variables renamed through the
// map, id-valued entries remapped (m to n, fork owners to the image edge's
// matching endpoint, auxiliaries by the m/n transposition).
ValuationSet apply_symmetry(const GroundModel& g, const LocalSymmetry& s,
                            const ValuationSet& theta_m);

struct OrbitPartition {
  std::vector<std::vector<uint32_t>> classes;  // node indices, ascending
  std::vector<uint32_t> representative;        // per node
  // witness[v]: symmetry from representative[v] to v (identity for reps)
  std::vector<LocalSymmetry> witness;
};

OrbitPartition orbits(const GroundModel& g, const BalanceRelation& b);

// Fixpoint over orbit representatives only; member components are
// materialized through their witness symmetries, and the result is expanded
// back to all nodes.
SplitInvariant reduced_fixpoint(const GroundModel& g, const BalanceRelation& b,
                                FixpointMode mode = FixpointMode::AssumeGuarantee);

// GraphViz rendering of the network, nodes colored by orbit.
void orbit_dot(std::ostream& os, const GroundModel& g, const OrbitPartition& p);

}  // namespace splitmc

#endif
