#include "splitmc/generators.hpp"

#include <algorithm>

#include "splitmc/error.hpp"
#include "splitmc/refine.hpp"

namespace splitmc {

ModelFile gen_dining(const NetworkGraph& g) {
  ModelFile m;
  m.network = g;
  for (uint32_t e = 0; e < g.edge_count(); ++e) {
    EdgeSpec spec;
    spec.edge = g.edges()[e];
    for (uint32_t n : g.endpoints(e)) spec.domain.push_back(g.nodes()[n]);
    spec.domain.push_back(kBottom);  // the fork is available if it holds bot
    spec.init = kBottom;
    m.edge_specs.push_back(std::move(spec));
  }

  ProcessDef p;
  p.name = "philosopher";
  p.locals.push_back({"L", {"T", "H", "E", "R"}, "T"});
  auto cmd = [&](std::string label, std::optional<std::string> binder,
                 const char* guard, std::vector<UpdateSpec> ups) {
    p.commands.push_back(
        {std::move(label), std::move(binder), parse_guard(guard), std::move(ups)});
  };
  cmd("hungry", std::nullopt, "L=T", {{"L", "H"}});
  cmd("acquire", "e", "L=H && e=bot", {{"e", "self"}});
  cmd("putdown", "e", "L=H && e=self", {{"e", "bot"}});
  cmd("eat", std::nullopt, "L=H && forall e: e=self", {{"L", "E"}});
  cmd("done", std::nullopt, "L=E", {{"L", "R"}});
  cmd("release", "e", "L=R && e=self", {{"e", "bot"}});
  cmd("think", std::nullopt, "L=R && forall e: e!=self", {{"L", "T"}});
  m.processes.push_back(std::move(p));

  m.assignment.assign(g.node_count(), "philosopher");
  m.property.scope = PropertyScope::AdjacentPairs;
  m.property.forbid = parse_guard("L=E");
  return m;
}

ModelFile gen_mutex(int n, bool with_last) {
  if (n < 1) throw Error(ErrorKind::Input, "mutex needs at least one process");
  std::vector<std::string> nodes;
  for (int i = 1; i <= n; ++i) nodes.push_back(std::to_string(i));

  ModelFile m;
  m.network = NetworkGraph(std::move(nodes), {}, {});

  ProcessDef p;
  p.name = "proc";
  p.locals.push_back({"l", {"T", "H", "E"}, "T"});
  p.commands.push_back({"try", std::nullopt, parse_guard("l=T"), {{"l", "H"}}});
  p.commands.push_back({"enter", std::nullopt, parse_guard("l=H && x=true"),
                        {{"x", "false"}, {"l", "E"}}});
  p.commands.push_back(
      {"exit", std::nullopt, parse_guard("l=E"), {{"x", "true"}, {"l", "T"}}});
  m.processes.push_back(std::move(p));

  m.assignment.assign(n, "proc");
  m.auxiliaries.push_back({"x", {"true", "false"}, "true"});
  m.property.scope = PropertyScope::AllPairs;
  m.property.forbid = parse_guard("l=E");

  // reuse the refinement transformation so both paths build the same model
  if (with_last) return add_last_auxiliary(m, "l", "E");
  return m;
}

}  // namespace splitmc
