#include "splitmc/model.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"
#include "splitmc/ground.hpp"

namespace splitmc {

using json = nlohmann::json;

const ProcessDef* ModelFile::process(const std::string& name) const {
  for (const auto& p : processes)
    if (p.name == name) return &p;
  return nullptr;
}

const ProcessDef& ModelFile::process_of_node(uint32_t node) const {
  const ProcessDef* p = process(assignment.at(node));
  if (!p) throw Error(ErrorKind::UnknownId, "node '" + network.nodes()[node] +
                                                "' assigned unknown process '" +
                                                assignment.at(node) + "'");
  return *p;
}

const EdgeSpec& ModelFile::edge_spec(uint32_t edge) const {
  return edge_specs.at(edge);
}

namespace {

void check_domain(const std::string& owner, const std::vector<std::string>& domain,
                  const std::string& init) {
  if (domain.empty())
    throw Error(ErrorKind::Domain, owner + ": empty domain");
  if (domain.size() > 255)
    throw Error(ErrorKind::Domain, owner + ": domain larger than 255 values");
  std::set<std::string> seen(domain.begin(), domain.end());
  if (seen.size() != domain.size())
    throw Error(ErrorKind::Duplicate, owner + ": duplicate domain value");
  if (seen.count(kSelf))
    throw Error(ErrorKind::Domain, owner + ": reserved value 'self' in domain");
  if (!seen.count(init))
    throw Error(ErrorKind::Domain,
                owner + ": initial value '" + init + "' not in domain");
}

}  // namespace

void validate_model(const ModelFile& m) {
  const auto& edges = m.network.edges();
  if (m.edge_specs.size() != edges.size())
    throw Error(ErrorKind::Input, "edgespecs must cover every edge exactly once");
  for (size_t i = 0; i < edges.size(); ++i) {
    if (m.edge_specs[i].edge != edges[i])
      throw Error(ErrorKind::Input,
                  "edgespecs must follow edge declaration order; expected '" +
                      edges[i] + "', found '" + m.edge_specs[i].edge + "'");
    check_domain("edge '" + edges[i] + "'", m.edge_specs[i].domain,
                 m.edge_specs[i].init);
  }

  std::unordered_set<std::string> process_names;
  for (const auto& p : m.processes) {
    if (!process_names.insert(p.name).second)
      throw Error(ErrorKind::Duplicate, "duplicate process '" + p.name + "'");
    std::unordered_set<std::string> local_names;
    for (const auto& l : p.locals) {
      if (!local_names.insert(l.name).second)
        throw Error(ErrorKind::Duplicate,
                    "process '" + p.name + "': duplicate local '" + l.name + "'");
      check_domain("process '" + p.name + "' local '" + l.name + "'", l.domain,
                   l.init);
    }
  }
  if (!std::is_sorted(m.processes.begin(), m.processes.end(),
                      [](const ProcessDef& a, const ProcessDef& b) {
                        return a.name < b.name;
                      }))
    throw Error(ErrorKind::Input, "processes must be sorted by name");

  if (m.assignment.size() != m.network.nodes().size())
    throw Error(ErrorKind::Input, "every node needs an assigned process");
  for (size_t n = 0; n < m.assignment.size(); ++n) {
    if (!process_names.count(m.assignment[n]))
      throw Error(ErrorKind::UnknownId, "node '" + m.network.nodes()[n] +
                                            "' assigned unknown process '" +
                                            m.assignment[n] + "'");
  }

  std::unordered_set<std::string> edge_names(edges.begin(), edges.end());
  std::unordered_set<std::string> aux_names;
  for (const auto& a : m.auxiliaries) {
    if (edge_names.count(a.name))
      throw Error(ErrorKind::Duplicate,
                  "auxiliary '" + a.name + "' collides with an edge name");
    if (!aux_names.insert(a.name).second)
      throw Error(ErrorKind::Duplicate, "duplicate auxiliary '" + a.name + "'");
    check_domain("auxiliary '" + a.name + "'", a.domain, a.init);
  }

  if (!m.property.forbid)
    throw Error(ErrorKind::Input, "property.forbid is required");

  // deep check: grounding every node validates identifier resolution, value
  // domains, and the read/write discipline
  GroundModel deep_check(m);
  (void)deep_check;
}

namespace {

json guard_to_json(const GuardPtr& g) { return print_guard(g); }

json model_to_json(const ModelFile& m) {
  json j;
  json net;
  net["nodes"] = m.network.nodes();
  net["edges"] = m.network.edges();
  json conns = json::array();
  for (const auto& c : m.network.connections())
    conns.push_back(json::array({c.from, c.to}));
  net["connections"] = conns;
  j["network"] = net;

  json specs = json::array();
  for (const auto& s : m.edge_specs)
    specs.push_back({{"edge", s.edge}, {"domain", s.domain}, {"init", s.init}});
  j["edgespecs"] = specs;

  json procs;
  for (const auto& p : m.processes) {
    json locals = json::array();
    for (const auto& l : p.locals)
      locals.push_back({{"name", l.name}, {"domain", l.domain}, {"init", l.init}});
    json cmds = json::array();
    for (const auto& c : p.commands) {
      json cj;
      cj["label"] = c.label;
      if (c.binder) cj["binder"] = *c.binder;
      cj["guard"] = guard_to_json(c.guard);
      json ups = json::array();
      for (const auto& u : c.updates) ups.push_back(json::array({u.target, u.value}));
      cj["updates"] = ups;
      cmds.push_back(cj);
    }
    procs[p.name] = {{"locals", locals}, {"commands", cmds}};
  }
  j["processes"] = procs.is_null() ? json::object() : procs;

  json assign;
  for (size_t n = 0; n < m.assignment.size(); ++n)
    assign[m.network.nodes()[n]] = m.assignment[n];
  j["assignment"] = assign.is_null() ? json::object() : assign;

  json auxes = json::array();
  for (const auto& a : m.auxiliaries)
    auxes.push_back({{"name", a.name}, {"domain", a.domain}, {"init", a.init}});
  j["auxiliaries"] = auxes;

  j["property"] = {
      {"scope", m.property.scope == PropertyScope::AdjacentPairs ? "adjacent-pairs"
                                                                 : "all-pairs"},
      {"forbid", guard_to_json(m.property.forbid)}};
  return j;
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Syntax, where + ": " + what);
}

std::vector<std::string> string_array(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) bad(where, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

GuardPtr parse_guard_at(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "guard must be a string");
  try {
    return parse_guard(j.get<std::string>());
  } catch (const ParseError& e) {
    bad(where, e.what());
  }
}

ModelFile model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Syntax, "model must be a JSON object");
  for (const char* key :
       {"network", "edgespecs", "processes", "assignment", "property"}) {
    if (!j.contains(key))
      throw Error(ErrorKind::Input, std::string("missing section '") + key + "'");
  }

  const json& net = j.at("network");
  std::vector<std::string> nodes = string_array(net.at("nodes"), "network.nodes");
  std::vector<std::string> edges = string_array(net.at("edges"), "network.edges");
  std::vector<Connection> conns;
  for (const auto& c : net.at("connections")) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string())
      bad("network.connections", "each connection is a [from, to] pair");
    conns.push_back({c[0].get<std::string>(), c[1].get<std::string>()});
  }

  ModelFile m;
  m.network = NetworkGraph(std::move(nodes), std::move(edges), std::move(conns));

  std::unordered_map<std::string, EdgeSpec> spec_by_edge;
  for (const auto& s : j.at("edgespecs")) {
    EdgeSpec es;
    es.edge = s.at("edge").get<std::string>();
    es.domain = string_array(s.at("domain"), "edgespecs.domain");
    es.init = s.at("init").get<std::string>();
    if (!spec_by_edge.emplace(es.edge, es).second)
      throw Error(ErrorKind::Duplicate, "duplicate edgespec for '" + es.edge + "'");
  }
  for (const auto& e : m.network.edges()) {
    auto it = spec_by_edge.find(e);
    if (it == spec_by_edge.end())
      throw Error(ErrorKind::Input, "edge '" + e + "' has no edgespec");
    m.edge_specs.push_back(it->second);
  }
  if (spec_by_edge.size() != m.network.edges().size())
    throw Error(ErrorKind::UnknownId, "edgespec for an unknown edge");

  const json& procs = j.at("processes");
  if (!procs.is_object()) bad("processes", "expected an object");
  for (auto it = procs.begin(); it != procs.end(); ++it) {
    ProcessDef p;
    p.name = it.key();
    std::string where = "processes." + p.name;
    for (const auto& l : it.value().at("locals")) {
      LocalVar lv;
      lv.name = l.at("name").get<std::string>();
      lv.domain = string_array(l.at("domain"), where + ".locals.domain");
      lv.init = l.at("init").get<std::string>();
      p.locals.push_back(std::move(lv));
    }
    size_t ci = 0;
    for (const auto& c : it.value().at("commands")) {
      CommandTemplate ct;
      std::string cwhere = where + ".commands[" + std::to_string(ci++) + "]";
      ct.label = c.value("label", "");
      if (c.contains("binder")) ct.binder = c.at("binder").get<std::string>();
      ct.guard = parse_guard_at(c.at("guard"), cwhere + ".guard");
      for (const auto& u : c.at("updates")) {
        if (!u.is_array() || u.size() != 2 || !u[0].is_string() || !u[1].is_string())
          bad(cwhere + ".updates", "each update is a [target, value] pair");
        ct.updates.push_back({u[0].get<std::string>(), u[1].get<std::string>()});
      }
      p.commands.push_back(std::move(ct));
    }
    m.processes.push_back(std::move(p));
  }
  // json objects iterate in key order, so processes arrive sorted

  const json& assign = j.at("assignment");
  if (!assign.is_object()) bad("assignment", "expected an object");
  for (const auto& node : m.network.nodes()) {
    if (!assign.contains(node))
      throw Error(ErrorKind::Input, "node '" + node + "' has no assignment");
    m.assignment.push_back(assign.at(node).get<std::string>());
  }
  if (assign.size() != m.network.nodes().size())
    throw Error(ErrorKind::UnknownId, "assignment mentions an unknown node");

  if (j.contains("auxiliaries")) {
    for (const auto& a : j.at("auxiliaries")) {
      AuxVar av;
      av.name = a.at("name").get<std::string>();
      av.domain = string_array(a.at("domain"), "auxiliaries.domain");
      av.init = a.at("init").get<std::string>();
      m.auxiliaries.push_back(std::move(av));
    }
  }

  const json& prop = j.at("property");
  std::string scope = prop.at("scope").get<std::string>();
  if (scope == "adjacent-pairs") {
    m.property.scope = PropertyScope::AdjacentPairs;
  } else if (scope == "all-pairs") {
    m.property.scope = PropertyScope::AllPairs;
  } else {
    bad("property.scope", "expected 'adjacent-pairs' or 'all-pairs'");
  }
  m.property.forbid = parse_guard_at(prop.at("forbid"), "property.forbid");
  return m;
}

}  // namespace

ModelFile parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Syntax, e.what());
  }
  ModelFile m;
  try {
    m = model_from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Syntax, std::string("malformed model: ") + e.what());
  }
  validate_model(m);
  return m;
}

std::string print_model(const ModelFile& m) {
  return model_to_json(m).dump(2) + "\n";
}

}  // namespace splitmc
