#include "splitmc/abstraction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "splitmc/error.hpp"

namespace splitmc {

namespace {

constexpr uint64_t kLocalSpaceLimit = 1u << 24;

// Rewrites global variable ids to scope positions (same helper as the
// fixpoint engine keeps privately; duplicated to stay independent of it).
GroundGuard to_positions(const GroundGuard& g,
                         const std::unordered_map<uint32_t, uint32_t>& pos) {
  GroundGuard out = g;
  for (GroundAtom& a : out.literals) a.var = pos.at(a.var);
  for (GroundGuard::Node& n : out.postfix)
    if (n.op == GroundGuard::Op::Atom) n.atom.var = pos.at(n.atom.var);
  return out;
}

std::unordered_map<uint32_t, uint32_t> scope_positions(
    const std::vector<uint32_t>& scope) {
  std::unordered_map<uint32_t, uint32_t> pos;
  for (uint32_t p = 0; p < scope.size(); ++p) pos.emplace(scope[p], p);
  return pos;
}

// Odometer over the domains of the given variables; calls fn for each tuple.
template <class Fn>
void enumerate_space(const GroundModel& g, const std::vector<uint32_t>& vars, Fn&& fn) {
  uint64_t total = 1;
  for (uint32_t v : vars) {
    total *= g.var(v).domain.size();
    if (total > kLocalSpaceLimit)
      throw Error(ErrorKind::Input, "state space too large to enumerate");
  }
  std::vector<uint8_t> tuple(vars.size(), 0);
  for (;;) {
    fn(std::span<const uint8_t>(tuple));
    size_t k = vars.size();
    for (;;) {
      if (k == 0) return;
      --k;
      if (++tuple[k] < g.var(vars[k]).domain.size()) break;
      tuple[k] = 0;
    }
    if (vars.empty()) return;
  }
}

}  // namespace

LocalAbstraction LocalAbstraction::identity(const GroundModel& g) {
  LocalAbstraction a;
  a.identity_ = true;
  a.model_ = &g;
  a.domain_sizes_.resize(g.node_count());
  for (uint32_t n = 0; n < g.node_count(); ++n) {
    uint64_t size = 1;
    for (uint32_t v : g.scope(n)) {
      size *= g.var(v).domain.size();
      if (size > kLocalSpaceLimit)
        throw Error(ErrorKind::Input, "local space too large for identity abstraction");
    }
    a.domain_sizes_[n] = static_cast<uint32_t>(size);
  }
  return a;
}

LocalAbstraction LocalAbstraction::from_predicates(const GroundModel& g,
                                                   std::vector<NamedPredicate> preds) {
  LocalAbstraction a;
  a.model_ = &g;
  a.predicates_ = std::move(preds);
  a.ground_preds_.resize(g.node_count());
  a.internal_positions_.resize(g.node_count());
  a.domain_sizes_.resize(g.node_count());
  for (uint32_t n = 0; n < g.node_count(); ++n) {
    auto pos = scope_positions(g.scope(n));
    uint64_t size = 1;
    for (uint32_t p = 0; p < g.scope(n).size(); ++p) {
      if (g.var(g.scope(n)[p]).kind == VarKind::Local) {
        a.internal_positions_[n].push_back(p);
        size *= g.var(g.scope(n)[p]).domain.size();
      }
    }
    for (const NamedPredicate& np : a.predicates_) {
      a.ground_preds_[n].push_back(
          to_positions(ground_predicate(g, np.guard, n), pos));
      size *= 2;
    }
    if (size > kLocalSpaceLimit)
      throw Error(ErrorKind::Input, "abstract domain too large");
    a.domain_sizes_[n] = static_cast<uint32_t>(size);
  }
  return a;
}

uint32_t LocalAbstraction::domain_size(uint32_t node) const {
  return domain_sizes_[node];
}

uint32_t LocalAbstraction::abstract_of(uint32_t node,
                                       std::span<const uint8_t> local) const {
  const GroundModel& g = *model_;
  if (identity_) {
    uint32_t id = 0;
    const auto& scope = g.scope(node);
    for (uint32_t p = 0; p < scope.size(); ++p)
      id = id * static_cast<uint32_t>(g.var(scope[p]).domain.size()) + local[p];
    return id;
  }
  uint32_t id = 0;
  const auto& scope = g.scope(node);
  for (uint32_t p : internal_positions_[node])
    id = id * static_cast<uint32_t>(g.var(scope[p]).domain.size()) + local[p];
  for (const GroundGuard& pred : ground_preds_[node]) {
    bool v = pred.eval([&](uint32_t p) { return local[p]; });
    id = id * 2 + (v ? 1 : 0);
  }
  return id;
}

std::string LocalAbstraction::value_name(uint32_t node, uint32_t value) const {
  const GroundModel& g = *model_;
  const auto& scope = g.scope(node);
  std::vector<std::string> parts;
  if (identity_) {
    for (uint32_t p = static_cast<uint32_t>(scope.size()); p-- > 0;) {
      uint32_t dom = static_cast<uint32_t>(g.var(scope[p]).domain.size());
      parts.push_back(g.var(scope[p]).domain[value % dom]);
      value /= dom;
    }
  } else {
    for (size_t k = predicates_.size(); k-- > 0;) {
      parts.push_back((value % 2 ? "" : "-") + predicates_[k].name);
      value /= 2;
    }
    for (size_t k = internal_positions_[node].size(); k-- > 0;) {
      uint32_t p = internal_positions_[node][k];
      uint32_t dom = static_cast<uint32_t>(g.var(scope[p]).domain.size());
      parts.push_back(g.var(scope[p]).domain[value % dom]);
      value /= dom;
    }
  }
  std::reverse(parts.begin(), parts.end());
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

std::vector<uint32_t> abstract_init(const GroundModel& g, const LocalAbstraction& a,
                                    uint32_t node) {
  const auto& scope = g.scope(node);
  std::vector<uint8_t> init(scope.size());
  for (size_t k = 0; k < scope.size(); ++k) init[k] = g.var(scope[k]).init;
  return {a.abstract_of(node, init)};
}

std::vector<std::pair<uint32_t, uint32_t>> abstract_step(const GroundModel& g,
                                                         const LocalAbstraction& a,
                                                         uint32_t node) {
  const auto& scope = g.scope(node);
  auto pos = scope_positions(scope);
  struct PosCmd {
    GroundGuard guard;
    std::vector<GroundUpdate> updates;
  };
  std::vector<PosCmd> cmds;
  for (const GroundCommand& c : g.commands(node)) {
    PosCmd pc{to_positions(c.guard, pos), {}};
    for (const GroundUpdate& u : c.updates) pc.updates.push_back({pos.at(u.var), u.value});
    cmds.push_back(std::move(pc));
  }
  std::set<std::pair<uint32_t, uint32_t>> rel;
  std::vector<uint8_t> succ;
  enumerate_space(g, scope, [&](std::span<const uint8_t> tuple) {
    for (const PosCmd& c : cmds) {
      if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
      succ.assign(tuple.begin(), tuple.end());
      for (const GroundUpdate& u : c.updates) succ[u.var] = u.value;
      rel.insert({a.abstract_of(node, tuple), a.abstract_of(node, succ)});
    }
  });
  return {rel.begin(), rel.end()};
}

namespace {

// Interference triples (alpha_k(source), a, b) for the pair (node, k),
// enumerated once over the joint concrete space V_node ∪ V_k. The frame of
// k's commands keeps everything outside V_k fixed, so this joint scope is
// enough to witness the existential.
std::vector<std::array<uint32_t, 3>> interference_triples(const GroundModel& g,
                                                          const LocalAbstraction& a,
                                                          uint32_t node, uint32_t k) {
  std::vector<uint32_t> joint = g.scope(node);
  joint.insert(joint.end(), g.scope(k).begin(), g.scope(k).end());
  std::sort(joint.begin(), joint.end());
  joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
  auto jpos = scope_positions(joint);

  std::vector<uint32_t> n_pos, k_pos;
  for (uint32_t v : g.scope(node)) n_pos.push_back(jpos.at(v));
  for (uint32_t v : g.scope(k)) k_pos.push_back(jpos.at(v));

  struct PosCmd {
    GroundGuard guard;
    std::vector<GroundUpdate> updates;
  };
  std::vector<PosCmd> cmds;
  for (const GroundCommand& c : g.commands(k)) {
    PosCmd pc{to_positions(c.guard, jpos), {}};
    for (const GroundUpdate& u : c.updates) pc.updates.push_back({jpos.at(u.var), u.value});
    cmds.push_back(std::move(pc));
  }

  std::set<std::array<uint32_t, 3>> rel;
  std::vector<uint8_t> local_n(n_pos.size()), local_k(k_pos.size()), succ;
  enumerate_space(g, joint, [&](std::span<const uint8_t> tuple) {
    for (size_t i = 0; i < k_pos.size(); ++i) local_k[i] = tuple[k_pos[i]];
    uint32_t ak = a.abstract_of(k, local_k);
    for (size_t i = 0; i < n_pos.size(); ++i) local_n[i] = tuple[n_pos[i]];
    uint32_t from = a.abstract_of(node, local_n);
    for (const PosCmd& c : cmds) {
      if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
      succ.assign(tuple.begin(), tuple.end());
      for (const GroundUpdate& u : c.updates) succ[u.var] = u.value;
      for (size_t i = 0; i < n_pos.size(); ++i) local_n[i] = succ[n_pos[i]];
      rel.insert({ak, from, a.abstract_of(node, local_n)});
      for (size_t i = 0; i < n_pos.size(); ++i) local_n[i] = tuple[n_pos[i]];
    }
  });
  return {rel.begin(), rel.end()};
}

}  // namespace

std::vector<std::pair<uint32_t, uint32_t>> abstract_interference(
    const GroundModel& g, const LocalAbstraction& a, uint32_t node, uint32_t k,
    const std::vector<uint32_t>& theta_k) {
  std::unordered_set<uint32_t> members(theta_k.begin(), theta_k.end());
  std::set<std::pair<uint32_t, uint32_t>> out;
  for (const auto& [ak, from, to] : interference_triples(g, a, node, k))
    if (members.count(ak)) out.insert({from, to});
  return {out.begin(), out.end()};
}

AbstractInvariant abstract_fixpoint(const GroundModel& g, const LocalAbstraction& a) {
  uint32_t nn = g.node_count();
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> steps(nn);
  std::vector<std::vector<std::vector<std::array<uint32_t, 3>>>> intf(nn);
  for (uint32_t n = 0; n < nn; ++n) {
    steps[n] = abstract_step(g, a, n);
    for (uint32_t k : g.pointing_in(n))
      intf[n].push_back(interference_triples(g, a, n, k));
  }

  std::vector<std::vector<uint32_t>> theta(nn);  // insertion order
  std::vector<std::unordered_set<uint32_t>> member(nn);
  auto add = [&](uint32_t n, uint32_t v) {
    if (member[n].insert(v).second) {
      theta[n].push_back(v);
      return true;
    }
    return false;
  };

  std::deque<uint32_t> queue;
  std::vector<char> queued(nn, 1);
  for (uint32_t n = 0; n < nn; ++n) queue.push_back(n);
  while (!queue.empty()) {
    uint32_t n = queue.front();
    queue.pop_front();
    queued[n] = 0;
    bool grew = false;
    for (uint32_t v : abstract_init(g, a, n)) grew |= add(n, v);
    for (;;) {
      bool inner = false;
      for (const auto& [x, y] : steps[n])
        if (member[n].count(x) && add(n, y)) inner = true;
      const auto& sources = g.pointing_in(n);
      for (size_t ki = 0; ki < sources.size(); ++ki) {
        for (const auto& [ak, x, y] : intf[n][ki]) {
          if (member[sources[ki]].count(ak) && member[n].count(x) && add(n, y))
            inner = true;
        }
      }
      if (!inner) break;
      grew = true;
    }
    if (!grew) continue;
    for (uint32_t other = 0; other < nn; ++other) {
      if (other != n && !queued[other] && g.model_points_to(n, other)) {
        queued[other] = 1;
        queue.push_back(other);
      }
    }
  }

  AbstractInvariant inv;
  inv.states = theta;
  inv.edges.resize(nn);
  for (uint32_t n = 0; n < nn; ++n) {
    std::set<AbstractEdge> edges;
    for (const auto& [x, y] : steps[n])
      if (member[n].count(x) && member[n].count(y))
        edges.insert({x, y, false, n});
    const auto& sources = g.pointing_in(n);
    for (size_t ki = 0; ki < sources.size(); ++ki) {
      for (const auto& [ak, x, y] : intf[n][ki]) {
        if (member[sources[ki]].count(ak) && member[n].count(x))
          edges.insert({x, y, true, sources[ki]});
      }
    }
    inv.edges[n].assign(edges.begin(), edges.end());
  }
  return inv;
}

bool concretize_check(const GroundModel& g, const LocalAbstraction& a,
                      const AbstractInvariant& abs, const SplitInvariant& theta) {
  for (uint32_t n = 0; n < g.node_count(); ++n) {
    std::unordered_set<uint32_t> states(abs.states[n].begin(), abs.states[n].end());
    const ValuationSet& comp = theta.components[n];
    for (uint32_t i = 0; i < comp.size(); ++i)
      if (!states.count(a.abstract_of(n, comp.at(i)))) return false;
  }
  return true;
}

CanonicalAbstractGraph canonical_graph(const GroundModel& g,
                                       const LocalAbstraction& a,
                                       const AbstractInvariant& abs, uint32_t node) {
  CanonicalAbstractGraph out;
  for (uint32_t v : abs.states[node]) out.states.push_back(a.value_name(node, v));
  std::sort(out.states.begin(), out.states.end());

  std::set<std::pair<std::string, std::string>> step_edges, intf_edges;
  for (const AbstractEdge& e : abs.edges[node]) {
    auto from = a.value_name(node, e.from);
    auto to = a.value_name(node, e.to);
    if (e.interference) {
      intf_edges.insert({from, to});
    } else if (e.from != e.to) {
      // step self-loops stay out of the canonical form: they carry no
      // invariant content, and their presence depends on the node's degree
      step_edges.insert({from, to});
    }
  }
  out.step_edges.assign(step_edges.begin(), step_edges.end());
  out.intf_edges.assign(intf_edges.begin(), intf_edges.end());
  return out;
}

ParametricReport parametric_report(const std::vector<const GroundModel*>& family,
                                   const std::vector<NamedPredicate>& preds) {
  ParametricReport report;
  std::map<CanonicalAbstractGraph, size_t> class_of;
  for (size_t inst = 0; inst < family.size(); ++inst) {
    const GroundModel& g = *family[inst];
    LocalAbstraction a = preds.empty()
                             ? LocalAbstraction::identity(g)
                             : LocalAbstraction::from_predicates(g, preds);
    AbstractInvariant abs = abstract_fixpoint(g, a);
    for (uint32_t n = 0; n < g.node_count(); ++n) {
      CanonicalAbstractGraph cg = canonical_graph(g, a, abs, n);
      auto it = class_of.find(cg);
      if (it == class_of.end()) {
        it = class_of.emplace(cg, report.classes.size()).first;
        report.classes.push_back({cg, {}});
      }
      report.classes[it->second].members.push_back({inst, g.node_name(n)});
    }
  }
  for (const auto& cls : report.classes) {
    std::string inv = "every node of this class stays within {";
    for (size_t i = 0; i < cls.graph.states.size(); ++i) {
      if (i) inv += ", ";
      inv += cls.graph.states[i];
    }
    inv += "}";
    report.candidate_invariant.push_back(std::move(inv));
  }
  return report;
}

void abstract_dot(std::ostream& os, const GroundModel& g, const LocalAbstraction& a,
                  const AbstractInvariant& abs, uint32_t node) {
  std::vector<uint32_t> init = abstract_init(g, a, node);
  std::set<uint32_t> initial(init.begin(), init.end());
  os << "digraph abstract {\n  rankdir=LR;\n";
  for (uint32_t v : abs.states[node]) {
    os << "  \"" << a.value_name(node, v) << "\"";
    if (initial.count(v)) os << " [peripheries=2, style=filled, fillcolor=\"#b5e7b0\"]";
    os << ";\n";
  }
  std::set<std::pair<std::pair<uint32_t, uint32_t>, bool>> drawn;
  for (const AbstractEdge& e : abs.edges[node]) {
    if (!drawn.insert({{e.from, e.to}, e.interference}).second) continue;
    os << "  \"" << a.value_name(node, e.from) << "\" -> \""
       << a.value_name(node, e.to) << "\"";
    if (e.interference) os << " [style=dashed]";
    os << ";\n";
  }
  os << "}\n";
}

}  // namespace splitmc
