#include "splitmc/ground.hpp"

#include <algorithm>
#include <unordered_map>

#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"

namespace splitmc {

bool GroundGuard::operator==(const GroundGuard& other) const {
  if (conjunctive != other.conjunctive) return false;
  if (conjunctive) return literals == other.literals;
  if (postfix.size() != other.postfix.size()) return false;
  for (size_t i = 0; i < postfix.size(); ++i) {
    if (postfix[i].op != other.postfix[i].op) return false;
    if (postfix[i].op == Op::Atom && !(postfix[i].atom == other.postfix[i].atom))
      return false;
  }
  return true;
}

namespace {

// Grounded guard before simplification.
struct GTree {
  enum class Kind { True, False, Atom, And, Or, Not };
  Kind kind;
  GroundAtom atom{};
  std::vector<GTree> children;
};

GTree fold(GTree t) {
  using K = GTree::Kind;
  if (t.kind == K::Not) {
    t.children[0] = fold(std::move(t.children[0]));
    const GTree& c = t.children[0];
    if (c.kind == K::True) return {K::False};
    if (c.kind == K::False) return {K::True};
    return t;
  }
  if (t.kind != K::And && t.kind != K::Or) return t;
  bool conj = t.kind == K::And;
  std::vector<GTree> kept;
  for (GTree& c : t.children) {
    GTree f = fold(std::move(c));
    if (f.kind == (conj ? K::True : K::False)) continue;      // neutral
    if (f.kind == (conj ? K::False : K::True)) return {f.kind};  // absorbing
    if (f.kind == t.kind) {
      for (GTree& g : f.children) kept.push_back(std::move(g));
    } else {
      kept.push_back(std::move(f));
    }
  }
  if (kept.empty()) return {conj ? K::True : K::False};
  if (kept.size() == 1) return std::move(kept.front());
  t.children = std::move(kept);
  return t;
}

bool pure_conjunction(const GTree& t) {
  if (t.kind == GTree::Kind::Atom || t.kind == GTree::Kind::True) return true;
  if (t.kind != GTree::Kind::And) return false;
  for (const GTree& c : t.children)
    if (c.kind != GTree::Kind::Atom) return false;
  return true;
}

void emit_postfix(const GTree& t, std::vector<GroundGuard::Node>& out) {
  using K = GTree::Kind;
  switch (t.kind) {
    case K::Atom:
      out.push_back({GroundGuard::Op::Atom, t.atom});
      break;
    case K::Not:
      emit_postfix(t.children[0], out);
      out.push_back({GroundGuard::Op::Not, {}});
      break;
    case K::And:
    case K::Or: {
      emit_postfix(t.children[0], out);
      for (size_t i = 1; i < t.children.size(); ++i) {
        emit_postfix(t.children[i], out);
        out.push_back({t.kind == K::And ? GroundGuard::Op::And : GroundGuard::Op::Or,
                       {}});
      }
      break;
    }
    case K::True:
    case K::False:
      // True never reaches here (conjunctive path); False is encoded as an
      // empty postfix program, which evaluates to false
      break;
  }
}

GroundGuard to_guard(GTree t) {
  t = fold(std::move(t));
  GroundGuard g;
  if (pure_conjunction(t)) {
    g.conjunctive = true;
    if (t.kind == GTree::Kind::Atom) {
      g.literals.push_back(t.atom);
    } else if (t.kind == GTree::Kind::And) {
      for (const GTree& c : t.children) g.literals.push_back(c.atom);
    }
    std::sort(g.literals.begin(), g.literals.end());
    g.literals.erase(std::unique(g.literals.begin(), g.literals.end()),
                     g.literals.end());
    return g;
  }
  g.conjunctive = false;
  if (t.kind != GTree::Kind::False) emit_postfix(t, g.postfix);
  return g;
}

// Per-node grounding context.
struct NodeCtx {
  const ModelFile* model;
  uint32_t node;
  std::string node_name;
  const ProcessDef* proc;
  // name -> (global var index, readable, writable)
  struct Entry {
    uint32_t var;
    bool readable;
    bool writable;
  };
  std::unordered_map<std::string, Entry> names;
  std::vector<uint32_t> nbhd_edge_vars;  // ascending edge index
  std::vector<std::pair<std::string, uint32_t>> bindings;  // binder stack

  const Entry* lookup(const std::string& name) const {
    auto it = names.find(name);
    return it == names.end() ? nullptr : &it->second;
  }
  const uint32_t* binding(const std::string& name) const {
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
};

uint8_t resolve_value(const std::vector<GroundVar>& vars, uint32_t var,
                      const std::string& value, const NodeCtx& ctx,
                      const std::string& where) {
  const std::string& v = value == kSelf ? ctx.node_name : value;
  const auto& dom = vars[var].domain;
  for (size_t i = 0; i < dom.size(); ++i)
    if (dom[i] == v) return static_cast<uint8_t>(i);
  throw Error(ErrorKind::Domain, where + ": value '" + v + "' not in domain of '" +
                                     vars[var].name + "'");
}

uint32_t resolve_read_var(const std::vector<GroundVar>& vars, const NodeCtx& ctx,
                          const std::string& name, const std::string& where) {
  if (const uint32_t* b = ctx.binding(name)) return *b;
  const NodeCtx::Entry* e = ctx.lookup(name);
  if (!e)
    throw Error(ErrorKind::UnknownId,
                where + ": unknown identifier '" + name + "' for node '" +
                    ctx.node_name + "'");
  if (!e->readable)
    throw Error(ErrorKind::Input, where + ": node '" + ctx.node_name +
                                      "' cannot read '" + name + "'");
  return e->var;
}

GTree ground_tree(const std::vector<GroundVar>& vars, NodeCtx& ctx,
                  const GuardExpr& g, const std::string& where) {
  using K = GuardExpr::Kind;
  switch (g.kind) {
    case K::Atom: {
      uint32_t var = resolve_read_var(vars, ctx, g.var, where);
      uint8_t val = resolve_value(vars, var, g.value, ctx, where);
      return {GTree::Kind::Atom, {var, val, g.equal}, {}};
    }
    case K::And:
    case K::Or: {
      GTree t{g.kind == K::And ? GTree::Kind::And : GTree::Kind::Or};
      for (const auto& c : g.children)
        t.children.push_back(ground_tree(vars, ctx, *c, where));
      return t;
    }
    case K::Not: {
      GTree t{GTree::Kind::Not};
      t.children.push_back(ground_tree(vars, ctx, *g.children[0], where));
      return t;
    }
    case K::Forall:
    case K::Exists: {
      if (ctx.binding(g.binder) || ctx.lookup(g.binder))
        throw Error(ErrorKind::Duplicate,
                    where + ": binder '" + g.binder + "' shadows another name");
      GTree t{g.kind == K::Forall ? GTree::Kind::And : GTree::Kind::Or};
      for (uint32_t ev : ctx.nbhd_edge_vars) {
        ctx.bindings.emplace_back(g.binder, ev);
        t.children.push_back(ground_tree(vars, ctx, *g.body, where));
        ctx.bindings.pop_back();
      }
      return t;  // empty neighborhood: forall folds to true, exists to false
    }
  }
  throw Error(ErrorKind::Input, where + ": malformed guard");
}

}  // namespace

GroundModel::GroundModel(const ModelFile& m)
    : source_(std::make_shared<const ModelFile>(m)) {
  const ModelFile& model = *source_;
  const NetworkGraph& net = model.network;
  uint32_t nn = net.node_count();

  // canonical variable order: per node (declaration order) its locals then
  // any not-yet-placed neighborhood edges; then unconnected edges; then
  // auxiliaries
  edge_var_.assign(net.edge_count(), UINT32_MAX);
  std::vector<std::vector<uint32_t>> local_vars(nn);
  auto add_edge_var = [&](uint32_t e) {
    if (edge_var_[e] != UINT32_MAX) return;
    const EdgeSpec& spec = model.edge_spec(e);
    edge_var_[e] = static_cast<uint32_t>(vars_.size());
    uint8_t init = 0;
    for (size_t i = 0; i < spec.domain.size(); ++i)
      if (spec.domain[i] == spec.init) init = static_cast<uint8_t>(i);
    vars_.push_back({net.edges()[e], spec.domain, init, VarKind::Edge, e});
  };
  for (uint32_t n = 0; n < nn; ++n) {
    const ProcessDef& proc = model.process_of_node(n);
    for (const LocalVar& l : proc.locals) {
      uint8_t init = 0;
      for (size_t i = 0; i < l.domain.size(); ++i)
        if (l.domain[i] == l.init) init = static_cast<uint8_t>(i);
      local_vars[n].push_back(static_cast<uint32_t>(vars_.size()));
      vars_.push_back(
          {net.nodes()[n] + "." + l.name, l.domain, init, VarKind::Local, n});
    }
    for (uint32_t e : net.neighborhood_edges(n)) add_edge_var(e);
  }
  for (uint32_t e = 0; e < net.edge_count(); ++e) add_edge_var(e);
  for (uint32_t a = 0; a < model.auxiliaries.size(); ++a) {
    const AuxVar& av = model.auxiliaries[a];
    uint8_t init = 0;
    for (size_t i = 0; i < av.domain.size(); ++i)
      if (av.domain[i] == av.init) init = static_cast<uint8_t>(i);
    aux_vars_.push_back(static_cast<uint32_t>(vars_.size()));
    vars_.push_back({av.name, av.domain, init, VarKind::Aux, a});
  }

  // scopes: locals, neighborhood edges, auxiliaries
  scopes_.resize(nn);
  for (uint32_t n = 0; n < nn; ++n) {
    scopes_[n] = local_vars[n];
    for (uint32_t e : net.neighborhood_edges(n))
      scopes_[n].push_back(edge_var_[e]);
    for (uint32_t av : aux_vars_) scopes_[n].push_back(av);
  }

  // ground every node's command templates
  node_commands_.resize(nn);
  forbid_.reserve(nn);
  for (uint32_t n = 0; n < nn; ++n) {
    const ProcessDef& proc = model.process_of_node(n);
    NodeCtx ctx;
    ctx.model = &model;
    ctx.node = n;
    ctx.node_name = net.nodes()[n];
    ctx.proc = &proc;
    for (size_t i = 0; i < proc.locals.size(); ++i)
      ctx.names[proc.locals[i].name] = {local_vars[n][i], true, true};
    for (uint32_t e = 0; e < net.edge_count(); ++e) {
      bool in_nbhd = edge_var_[e] != UINT32_MAX &&
                     std::binary_search(net.neighborhood_edges(n).begin(),
                                        net.neighborhood_edges(n).end(), e);
      if (!in_nbhd) continue;
      ctx.names[net.edges()[e]] = {edge_var_[e], net.node_reads(n, e),
                                   net.node_writes(n, e)};
    }
    for (size_t a = 0; a < model.auxiliaries.size(); ++a) {
      if (!ctx.names.emplace(model.auxiliaries[a].name,
                             NodeCtx::Entry{aux_vars_[a], true, true})
               .second) {
        throw Error(ErrorKind::Duplicate,
                    "auxiliary '" + model.auxiliaries[a].name +
                        "' collides with a name visible to node '" +
                        ctx.node_name + "'");
      }
    }
    for (uint32_t e : net.neighborhood_edges(n))
      ctx.nbhd_edge_vars.push_back(edge_var_[e]);

    std::string node_where = "node '" + ctx.node_name + "'";
    for (size_t t = 0; t < proc.commands.size(); ++t) {
      const CommandTemplate& ct = proc.commands[t];
      std::string where = node_where + " command '" +
                          (ct.label.empty() ? std::to_string(t) : ct.label) + "'";
      std::vector<std::pair<std::string, uint32_t>> expansions;
      if (ct.binder) {
        if (ctx.lookup(*ct.binder))
          throw Error(ErrorKind::Duplicate,
                      where + ": binder '" + *ct.binder + "' shadows another name");
        for (uint32_t ev : ctx.nbhd_edge_vars)
          expansions.emplace_back(*ct.binder, ev);
      } else {
        expansions.emplace_back("", 0);
      }
      for (const auto& [sym, ev] : expansions) {
        if (!sym.empty()) ctx.bindings.emplace_back(sym, ev);
        GroundCommand gc;
        gc.owner = n;
        gc.label = ct.label;
        if (!sym.empty()) gc.label += "(" + vars_[ev].name + ")";
        gc.guard = to_guard(ground_tree(vars_, ctx, *ct.guard, where));
        for (const UpdateSpec& u : ct.updates) {
          uint32_t var;
          if (const uint32_t* b = ctx.binding(u.target)) {
            var = *b;
          } else if (const NodeCtx::Entry* e = ctx.lookup(u.target)) {
            if (!e->writable)
              throw Error(ErrorKind::Input, where + ": node '" + ctx.node_name +
                                                "' cannot write '" + u.target + "'");
            var = e->var;
          } else {
            throw Error(ErrorKind::UnknownId,
                        where + ": unknown update target '" + u.target + "'");
          }
          if (vars_[var].kind == VarKind::Edge &&
              !net.node_writes(n, vars_[var].owner))
            throw Error(ErrorKind::Input, where + ": node '" + ctx.node_name +
                                              "' cannot write '" + vars_[var].name +
                                              "'");
          uint8_t val = resolve_value(vars_, var, u.value, ctx, where);
          gc.updates.push_back({var, val});
        }
        std::sort(gc.updates.begin(), gc.updates.end());
        for (size_t k = 1; k < gc.updates.size(); ++k)
          if (gc.updates[k].var == gc.updates[k - 1].var)
            throw Error(ErrorKind::Duplicate,
                        where + ": two updates target '" +
                            vars_[gc.updates[k].var].name + "'");
        if (!sym.empty()) ctx.bindings.pop_back();
        node_commands_[n].push_back(std::move(gc));
      }
    }
    total_commands_ += static_cast<uint32_t>(node_commands_[n].size());

    // property predicate, grounded at this node; restricted to internal
    // variables and bound-edge atoms
    for (const std::string& v : free_vars(model.property.forbid)) {
      if (!ctx.lookup(v) || vars_[ctx.lookup(v)->var].kind != VarKind::Local)
        throw Error(ErrorKind::Input,
                    "property.forbid may mention only internal variables or "
                    "bound edges; '" +
                        v + "' is not a local of node '" + ctx.node_name + "'");
    }
    forbid_.push_back(
        to_guard(ground_tree(vars_, ctx, *model.property.forbid, "property.forbid")));
  }

  // pointing relation, auxiliaries folded in (they behave like an edge
  // connected to every node, making all pairs mutually pointing)
  bool have_aux = !aux_vars_.empty();
  pointing_in_.resize(nn);
  for (uint32_t i = 0; i < nn; ++i) {
    for (uint32_t j = 0; j < nn; ++j) {
      if (j == i) continue;
      bool points = have_aux;
      if (!points) {
        for (uint32_t e : net.neighborhood_edges(i)) {
          if (net.node_writes(j, e)) {
            points = true;
            break;
          }
        }
      }
      if (points) pointing_in_[i].push_back(j);
    }
  }

  bool all_pairs = model.property.scope == PropertyScope::AllPairs;
  for (uint32_t i = 0; i < nn; ++i) {
    for (uint32_t j = i + 1; j < nn; ++j) {
      if (all_pairs || model_adjacent(i, j)) property_pairs_.push_back({i, j});
    }
  }
}

const std::string& GroundModel::node_name(uint32_t n) const {
  return source_->network.nodes()[n];
}

bool GroundModel::model_points_to(uint32_t m, uint32_t n) const {
  if (!aux_vars_.empty()) return true;
  for (uint32_t e : source_->network.neighborhood_edges(n))
    if (source_->network.node_writes(m, e)) return true;
  return false;
}

bool GroundModel::model_adjacent(uint32_t m, uint32_t n) const {
  if (!aux_vars_.empty()) return true;
  return adjacent(source_->network, source_->network.nodes()[m],
                  source_->network.nodes()[n]);
}

const std::vector<uint32_t>& GroundModel::nbhd_edges(uint32_t node) const {
  return source_->network.neighborhood_edges(node);
}

uint8_t GroundModel::value_index(uint32_t var, const std::string& value) const {
  const auto& dom = vars_[var].domain;
  for (size_t i = 0; i < dom.size(); ++i)
    if (dom[i] == value) return static_cast<uint8_t>(i);
  throw Error(ErrorKind::Domain,
              "value '" + value + "' not in domain of '" + vars_[var].name + "'");
}

std::vector<GroundCommand> expand(const ModelFile& m, const std::string& node) {
  auto idx = m.network.node_index(node);
  if (!idx) throw Error(ErrorKind::UnknownId, "unknown node id '" + node + "'");
  GroundModel gm(m);
  return gm.commands(*idx);
}

GroundGuard GroundModel::ground_guard_at(const GuardPtr& g, uint32_t node) const {
  const ModelFile& model = *source_;
  const NetworkGraph& net = model.network;
  NodeCtx ctx;
  ctx.model = &model;
  ctx.node = node;
  ctx.node_name = net.nodes()[node];
  ctx.proc = &model.process_of_node(node);

  for (uint32_t v = 0; v < var_count(); ++v) {
    const GroundVar& gv = vars_[v];
    switch (gv.kind) {
      case VarKind::Local:
        if (gv.owner == node) {
          // strip the node qualifier for name resolution
          ctx.names[gv.name.substr(ctx.node_name.size() + 1)] = {v, true, true};
        }
        break;
      case VarKind::Edge: {
        const auto& nbhd = net.neighborhood_edges(node);
        if (std::binary_search(nbhd.begin(), nbhd.end(), gv.owner)) {
          ctx.names[gv.name] = {v, net.node_reads(node, gv.owner),
                                net.node_writes(node, gv.owner)};
        }
        break;
      }
      case VarKind::Aux:
        ctx.names[gv.name] = {v, true, true};
        break;
    }
  }
  for (uint32_t e : net.neighborhood_edges(node))
    ctx.nbhd_edge_vars.push_back(edge_var_[e]);
  return to_guard(
      ground_tree(vars_, ctx, *g, "predicate at node '" + ctx.node_name + "'"));
}

GroundGuard ground_predicate(const GroundModel& m, const GuardPtr& g, uint32_t node) {
  return m.ground_guard_at(g, node);
}

}  // namespace splitmc
