#ifndef SPLITMC_GROUND_HPP
#define SPLITMC_GROUND_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "splitmc/model.hpp"

namespace splitmc {

enum class VarKind : uint8_t { Local, Edge, Aux };

struct GroundVar {
  std::string name;                  // qualified: "n0.L" for locals
  std::vector<std::string> domain;
  uint8_t init;
  VarKind kind;
  uint32_t owner;  // owning node for locals, edge index for edges, aux index
};

struct GroundAtom {
  uint32_t var;
  uint8_t value;
  bool equal;
  auto operator<=>(const GroundAtom&) const = default;
};

// Closed quantifier-free predicate. Pure conjunctions (the common case after
// grounding) take a fast path; anything else is a small postfix program.
struct GroundGuard {
  enum class Op : uint8_t { Atom, And, Or, Not };
  struct Node {
    Op op;
    GroundAtom atom;  // for Op::Atom
  };
  bool conjunctive = true;
  std::vector<GroundAtom> literals;  // sorted when conjunctive
  std::vector<Node> postfix;         // used when !conjunctive

  template <class Lookup>  // Lookup: uint8_t(uint32_t var)
  bool eval(Lookup&& value_of) const {
    if (conjunctive) {
      for (const GroundAtom& a : literals) {
        if ((value_of(a.var) == a.value) != a.equal) return false;
      }
      return true;
    }
    return eval_postfix(value_of);
  }

  bool operator==(const GroundGuard&) const;

private:
  template <class Lookup>
  bool eval_postfix(Lookup&& value_of) const {
    // depth is tiny; a fixed stack would do, vector keeps it simple
    bool stack[64];
    int top = 0;
    for (const Node& n : postfix) {
      switch (n.op) {
        case Op::Atom:
          stack[top++] = (value_of(n.atom.var) == n.atom.value) == n.atom.equal;
          break;
        case Op::Not:
          stack[top - 1] = !stack[top - 1];
          break;
        case Op::And:
          --top;
          stack[top - 1] = stack[top - 1] && stack[top];
          break;
        case Op::Or:
          --top;
          stack[top - 1] = stack[top - 1] || stack[top];
          break;
      }
    }
    return top == 1 && stack[0];
  }
};

struct GroundUpdate {
  uint32_t var;
  uint8_t value;
  auto operator<=>(const GroundUpdate&) const = default;
};

// One atomic guarded command of a single node, closed over that node's
// variable scope. Variables outside the owner's scope are never read or
// written.
struct GroundCommand {
  uint32_t owner;
  std::string label;
  GroundGuard guard;
  std::vector<GroundUpdate> updates;
};

// Compiled model: interned variables in canonical global order, per-node
// scopes, ground commands, the pointing/adjacency relations with
// auxiliaries folded in, and the grounded property.
class GroundModel {
public:
  explicit GroundModel(const ModelFile& m);

  const ModelFile& source() const { return *source_; }

  uint32_t var_count() const { return static_cast<uint32_t>(vars_.size()); }
  const GroundVar& var(uint32_t v) const { return vars_[v]; }
  uint32_t node_count() const { return static_cast<uint32_t>(scopes_.size()); }
  const std::string& node_name(uint32_t n) const;

  // V_n: global variable indices, local order = locals, neighborhood edges,
  // auxiliaries.
  const std::vector<uint32_t>& scope(uint32_t node) const { return scopes_[node]; }

  const std::vector<GroundCommand>& commands(uint32_t node) const {
    return node_commands_[node];
  }
  uint32_t total_commands() const { return total_commands_; }

  // j -> i interference sources: j != i and j writes a variable of V_i.
  const std::vector<uint32_t>& pointing_in(uint32_t node) const {
    return pointing_in_[node];
  }
  bool model_points_to(uint32_t m, uint32_t n) const;  // auxiliaries included
  bool model_adjacent(uint32_t m, uint32_t n) const;

  // Property: pairs in scope (i < j), and forbid grounded per node.
  const std::vector<std::pair<uint32_t, uint32_t>>& property_pairs() const {
    return property_pairs_;
  }
  const GroundGuard& forbid(uint32_t node) const { return forbid_[node]; }

  // Auxiliary variable indices (suffix of the scope of every node).
  const std::vector<uint32_t>& aux_vars() const { return aux_vars_; }
  // Global variable index of an edge.
  uint32_t edge_var(uint32_t edge) const { return edge_var_[edge]; }
  // Neighborhood edge indices of a node (ascending), auxiliaries excluded.
  const std::vector<uint32_t>& nbhd_edges(uint32_t node) const;

  std::string render_value(uint32_t var, uint8_t value) const {
    return vars_[var].domain[value];
  }
  uint8_t value_index(uint32_t var, const std::string& value) const;

  // Grounds a per-node predicate; see ground_predicate below.
  GroundGuard ground_guard_at(const GuardPtr& g, uint32_t node) const;

private:
  std::shared_ptr<const ModelFile> source_;
  std::vector<GroundVar> vars_;
  std::vector<std::vector<uint32_t>> scopes_;
  std::vector<std::vector<GroundCommand>> node_commands_;
  std::vector<std::vector<uint32_t>> pointing_in_;
  std::vector<std::pair<uint32_t, uint32_t>> property_pairs_;
  std::vector<GroundGuard> forbid_;
  std::vector<uint32_t> aux_vars_;
  std::vector<uint32_t> edge_var_;
  uint32_t total_commands_ = 0;
};

// Grounding of one node's command templates: binder templates instantiate
// once per neighborhood edge, `self` resolves to the node id, quantifiers
// expand over the neighborhood. This is also where scoping soundness is
// enforced (reads within locals/read-edges/auxiliaries, writes within
// locals/write-edges/auxiliaries).
std::vector<GroundCommand> expand(const ModelFile& m, const std::string& node);

// Grounds a per-node predicate (locals, neighborhood edges, auxiliaries,
// `self`, quantifiers) against global variable indices.
GroundGuard ground_predicate(const GroundModel& m, const GuardPtr& g, uint32_t node);

}  // namespace splitmc

#endif
