#ifndef SPLITMC_MODEL_HPP
#define SPLITMC_MODEL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitmc/guard.hpp"
#include "splitmc/network.hpp"

namespace splitmc {

struct LocalVar {
  std::string name;
  std::vector<std::string> domain;
  std::string init;
  bool operator==(const LocalVar&) const = default;
};

// One assignment performed by a command. `value` is a domain constant or the
// reserved token "self", which denotes the executing node's id.
struct UpdateSpec {
  std::string target;  // local, auxiliary, bound edge symbol, or explicit edge
  std::string value;
  bool operator==(const UpdateSpec&) const = default;
};

struct CommandTemplate {
  std::string label;
  std::optional<std::string> binder;  // edge symbol ranging over the neighborhood
  GuardPtr guard;
  std::vector<UpdateSpec> updates;

  bool operator==(const CommandTemplate& other) const {
    return label == other.label && binder == other.binder &&
           guard_equal(guard, other.guard) && updates == other.updates;
  }
};

struct ProcessDef {
  std::string name;
  std::vector<LocalVar> locals;
  std::vector<CommandTemplate> commands;
  bool operator==(const ProcessDef&) const = default;
};

// Shared variable visible to every node; modeled downstream exactly like an
// edge connected to all nodes.
struct AuxVar {
  std::string name;
  std::vector<std::string> domain;
  std::string init;
  bool operator==(const AuxVar&) const = default;
};

enum class PropertyScope { AdjacentPairs, AllPairs };

// "No two nodes in scope simultaneously satisfy `forbid`."
struct PropertySpec {
  PropertyScope scope = PropertyScope::AdjacentPairs;
  GuardPtr forbid;

  bool operator==(const PropertySpec& other) const {
    return scope == other.scope && guard_equal(forbid, other.forbid);
  }
};

struct ModelFile {
  NetworkGraph network;
  std::vector<EdgeSpec> edge_specs;      // edge declaration order
  std::vector<ProcessDef> processes;     // sorted by name (canonical)
  std::vector<std::string> assignment;   // process name per node, node order
  std::vector<AuxVar> auxiliaries;
  PropertySpec property;

  const ProcessDef* process(const std::string& name) const;
  const ProcessDef& process_of_node(uint32_t node) const;
  const EdgeSpec& edge_spec(uint32_t edge) const;

  bool operator==(const ModelFile&) const = default;
};

// Parses and fully validates (structure, scoping, domains). Throws Error /
// ParseError with diagnostics.
ModelFile parse_model(std::string_view text);

// Canonical form: sorted object keys, declaration-ordered arrays.
// parse_model(print_model(m)) == m for every valid model.
std::string print_model(const ModelFile& m);

// Structural and type validation; parse_model calls this, generators are
// checked by tests. Throws on violation.
void validate_model(const ModelFile& m);

}  // namespace splitmc

#endif
