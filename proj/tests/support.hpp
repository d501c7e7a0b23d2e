#ifndef SPLITMC_TESTS_SUPPORT_HPP
#define SPLITMC_TESTS_SUPPORT_HPP

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"
#include "splitmc/ground.hpp"
#include "splitmc/semantics.hpp"
#include "splitmc/splitfix.hpp"

namespace splitmc::test {

using Assignment = std::vector<std::pair<std::string, std::string>>;

// Local tuple for one node built from a complete var=value listing. Names are
// the unqualified ones a process sees (locals, edge ids, auxiliaries).
inline std::vector<uint8_t> local_state(const GroundModel& g, uint32_t node,
                                        const Assignment& values) {
  const auto& scope = g.scope(node);
  if (values.size() != scope.size())
    throw Error(ErrorKind::Input, "local_state needs every scope variable");
  std::vector<uint8_t> out(scope.size());
  std::vector<bool> set(scope.size(), false);
  const std::string prefix = g.node_name(node) + ".";
  for (const auto& [name, value] : values) {
    bool found = false;
    for (size_t k = 0; k < scope.size(); ++k) {
      const GroundVar& v = g.var(scope[k]);
      std::string plain =
          v.kind == VarKind::Local ? v.name.substr(prefix.size()) : v.name;
      if (plain == name) {
        out[k] = g.value_index(scope[k], value);
        set[k] = true;
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(ErrorKind::UnknownId, "no scope variable named '" + name + "'");
  }
  for (bool b : set)
    if (!b) throw Error(ErrorKind::Input, "incomplete local_state");
  return out;
}

inline bool component_contains(const GroundModel& g, const ValuationSet& comp,
                               uint32_t node, const Assignment& values) {
  return comp.contains(local_state(g, node, values));
}

// Dining model over the line(4) network plus one isolated extra node,
// generated from the degree sequence [1,2,2,1,0].
inline ModelFile dining_line4_isolated() {
  return gen_dining(make_degree_graph({1, 2, 2, 1, 0}));
}

}  // namespace splitmc::test

#endif
