#ifndef SPLITMC_ABSTRACTION_HPP
#define SPLITMC_ABSTRACTION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "splitmc/ground.hpp"
#include "splitmc/splitfix.hpp"

namespace splitmc {

struct NamedPredicate {
  std::string name;
  GuardPtr guard;  // over one node's variables; quantifiers over its edges
};

// Per-node abstract domain and total abstraction map over concrete local
// states. Built either as the identity or from the internal-variable
// valuation extended with named predicate bits.
class LocalAbstraction {
public:
  static LocalAbstraction identity(const GroundModel& g);
  static LocalAbstraction from_predicates(const GroundModel& g,
                                          std::vector<NamedPredicate> preds);

  bool is_identity() const { return identity_; }
  const std::vector<NamedPredicate>& predicates() const { return predicates_; }

  uint32_t domain_size(uint32_t node) const;
  // alpha_m: concrete local valuation (scope order) -> abstract value id.
  uint32_t abstract_of(uint32_t node, std::span<const uint8_t> local) const;
  // gamma membership: abstract value of `local` lies in `values`?
  std::string value_name(uint32_t node, uint32_t value) const;

private:
  LocalAbstraction() = default;
  bool identity_ = false;
  std::vector<NamedPredicate> predicates_;
  const GroundModel* model_ = nullptr;
  // per node: strides for the abstracted tuple, grounded predicate guards
  std::vector<std::vector<GroundGuard>> ground_preds_;
  std::vector<uint32_t> domain_sizes_;
  std::vector<std::vector<uint32_t>> internal_positions_;  // scope positions of locals
};

struct AbstractEdge {
  uint32_t from = 0;
  uint32_t to = 0;
  bool interference = false;
  uint32_t neighbor = 0;  // interfering node, when interference
  auto operator<=>(const AbstractEdge&) const = default;
};

// Per-node abstract state sets plus the labeled transition graph between
// states in the set.
struct AbstractInvariant {
  std::vector<std::vector<uint32_t>> states;  // per node, insertion order
  std::vector<std::vector<AbstractEdge>> edges;
};

std::vector<uint32_t> abstract_init(const GroundModel& g, const LocalAbstraction& a,
                                    uint32_t node);
// Existential abstraction of the node's own step relation, over the full
// concrete local space.
std::vector<std::pair<uint32_t, uint32_t>> abstract_step(const GroundModel& g,
                                                         const LocalAbstraction& a,
                                                         uint32_t node);
// Interference edges on `node` caused by commands of `k` from sources whose
// k-abstraction lies in theta_k; witnesses are joint valuations over
// V_node ∪ V_k.
std::vector<std::pair<uint32_t, uint32_t>> abstract_interference(
    const GroundModel& g, const LocalAbstraction& a, uint32_t node, uint32_t k,
    const std::vector<uint32_t>& theta_k);

AbstractInvariant abstract_fixpoint(const GroundModel& g, const LocalAbstraction& a);

// theta_n ⊆ gamma_n(abs_n) for every node: the abstraction over-approximates
// the concrete split invariant.
bool concretize_check(const GroundModel& g, const LocalAbstraction& a,
                      const AbstractInvariant& abs, const SplitInvariant& theta);

// Presentation-normal form for clustering: sorted state names, step edges
// without self-loops, interference edges deduplicated across neighbors.
// Isomorphism between these graphs is plain equality.
struct CanonicalAbstractGraph {
  std::vector<std::string> states;
  std::vector<std::pair<std::string, std::string>> step_edges;
  std::vector<std::pair<std::string, std::string>> intf_edges;
  auto operator<=>(const CanonicalAbstractGraph&) const = default;
};

CanonicalAbstractGraph canonical_graph(const GroundModel& g,
                                       const LocalAbstraction& a,
                                       const AbstractInvariant& abs, uint32_t node);

struct ParametricClass {
  CanonicalAbstractGraph graph;
  // (instance index, node name) members across the family
  std::vector<std::pair<size_t, std::string>> members;
};

struct ParametricReport {
  std::vector<ParametricClass> classes;
  // "for every node n, theta_class(n)(n)": rendered per class
  std::vector<std::string> candidate_invariant;
};

// Clusters all nodes of all instances by canonical abstract graph. The
// family must share process templates; the abstraction is rebuilt per
// instance from the same predicates (empty = identity).
ParametricReport parametric_report(const std::vector<const GroundModel*>& family,
                                   const std::vector<NamedPredicate>& preds);

// GraphViz rendering: initial states doubled, interference edges dashed.
void abstract_dot(std::ostream& os, const GroundModel& g, const LocalAbstraction& a,
                  const AbstractInvariant& abs, uint32_t node);

}  // namespace splitmc

#endif
