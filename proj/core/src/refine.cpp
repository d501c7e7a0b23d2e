#include "splitmc/refine.hpp"

#include <algorithm>
#include <set>

#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"

namespace splitmc {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Unknown: return "unknown";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

ModelFile add_last_auxiliary(const ModelFile& m, const std::string& var,
                             const std::string& value) {
  bool found = false;
  for (const auto& p : m.processes) {
    for (const auto& l : p.locals) {
      if (l.name == var) {
        found = true;
        if (std::find(l.domain.begin(), l.domain.end(), value) == l.domain.end())
          throw Error(ErrorKind::Domain, "trigger value '" + value +
                                             "' not in domain of '" + var + "'");
      }
    }
  }
  if (!found)
    throw Error(ErrorKind::UnknownId, "trigger variable '" + var + "' not found");

  ModelFile out = m;
  AuxVar last;
  last.name = "last";
  last.domain.push_back("0");
  for (const auto& n : m.network.nodes()) last.domain.push_back(n);
  last.init = "0";
  for (const auto& a : out.auxiliaries)
    if (a.name == last.name)
      throw Error(ErrorKind::Duplicate, "auxiliary 'last' already present");
  out.auxiliaries.push_back(std::move(last));

  for (auto& p : out.processes) {
    bool has_var = false;
    for (const auto& l : p.locals) has_var |= l.name == var;
    if (!has_var) continue;
    for (auto& c : p.commands) {
      bool triggers = false;
      for (const auto& u : c.updates)
        triggers |= u.target == var && u.value == value;
      if (triggers) c.updates.push_back({"last", kSelf});
    }
  }
  return out;
}

namespace {

std::string mirror_name(const std::string& node, const std::string& var) {
  return "exp." + node + "." + var;
}

}  // namespace

ModelFile expose(const ModelFile& m, const ExposureStep& step) {
  if (step.vars.empty()) return m;
  auto node_idx = m.network.node_index(step.node);
  if (!node_idx)
    throw Error(ErrorKind::UnknownId, "unknown node id '" + step.node + "'");
  const ProcessDef& proc = m.process_of_node(*node_idx);

  for (const auto& v : step.vars) {
    bool is_local = false;
    for (const auto& l : proc.locals) is_local |= l.name == v;
    if (!is_local)
      throw Error(ErrorKind::UnknownId, "'" + v + "' is not an internal variable of '" +
                                            step.node + "'");
    for (const auto& a : m.auxiliaries)
      if (a.name == mirror_name(step.node, v))
        throw Error(ErrorKind::Duplicate,
                    "'" + v + "' of '" + step.node + "' already exposed");
  }

  ModelFile out = m;

  // the node needs its own process copy so only its writes are mirrored
  int users = 0;
  for (const auto& pname : m.assignment) users += pname == proc.name;
  std::string target_name = proc.name;
  if (users > 1) {
    target_name = proc.name + "@" + step.node;
    if (m.process(target_name))
      throw Error(ErrorKind::Duplicate, "process '" + target_name + "' already exists");
    ProcessDef clone = proc;
    clone.name = target_name;
    out.processes.push_back(std::move(clone));
    std::sort(out.processes.begin(), out.processes.end(),
              [](const ProcessDef& a, const ProcessDef& b) { return a.name < b.name; });
    out.assignment[*node_idx] = target_name;
  }

  ProcessDef* target = nullptr;
  for (auto& p : out.processes)
    if (p.name == target_name) target = &p;

  for (const auto& v : step.vars) {
    const LocalVar* lv = nullptr;
    for (const auto& l : target->locals)
      if (l.name == v) lv = &l;
    out.auxiliaries.push_back({mirror_name(step.node, v), lv->domain, lv->init});
    for (auto& c : target->commands) {
      std::optional<std::string> written;
      for (const auto& u : c.updates)
        if (u.target == v) written = u.value;
      if (written) c.updates.push_back({mirror_name(step.node, v), *written});
    }
  }
  return out;
}

namespace {

// Internal variables of the property predicate, in first-occurrence order.
std::vector<std::string> forbid_vars(const ModelFile& m, uint32_t node) {
  std::vector<std::string> out;
  const ProcessDef& proc = m.process_of_node(node);
  for (const auto& v : free_vars(m.property.forbid)) {
    for (const auto& l : proc.locals)
      if (l.name == v) out.push_back(v);
  }
  return out;
}

bool already_exposed(const ModelFile& m, const std::string& node,
                     const std::string& var) {
  for (const auto& a : m.auxiliaries)
    if (a.name == mirror_name(node, var)) return true;
  return false;
}

// Strategy: expose the forbid variable of the lexicographically-first
// offending node that still has one hidden; once all offending nodes are
// done, continue with remaining internals in lexicographic node order.
std::optional<ExposureStep> pick_exposure(const ModelFile& m,
                                          const PropertyVerdict& pv) {
  std::vector<std::string> offenders;
  for (const auto& w : pv.witnesses) {
    offenders.push_back(m.network.nodes()[w.node_a]);
    offenders.push_back(m.network.nodes()[w.node_b]);
  }
  std::sort(offenders.begin(), offenders.end());
  offenders.erase(std::unique(offenders.begin(), offenders.end()), offenders.end());

  auto hidden_forbid_vars = [&](const std::string& node) {
    std::vector<std::string> vars;
    uint32_t idx = *m.network.node_index(node);
    for (const auto& v : forbid_vars(m, idx))
      if (!already_exposed(m, node, v)) vars.push_back(v);
    return vars;
  };
  for (const auto& node : offenders) {
    auto vars = hidden_forbid_vars(node);
    if (!vars.empty()) return ExposureStep{node, vars};
  }
  // everything property-relevant is shared already; fall back to the rest of
  // the internal state, one node at a time
  std::vector<std::string> all_nodes = m.network.nodes();
  std::sort(all_nodes.begin(), all_nodes.end());
  for (const auto& node : all_nodes) {
    uint32_t idx = *m.network.node_index(node);
    std::vector<std::string> vars;
    for (const auto& l : m.process_of_node(idx).locals)
      if (!already_exposed(m, node, l.name)) vars.push_back(l.name);
    if (!vars.empty()) return ExposureStep{node, vars};
  }
  return std::nullopt;
}

std::optional<std::pair<std::string, std::string>> forbid_trigger(const ModelFile& m) {
  // first positive atom of the property predicate
  std::vector<const GuardExpr*> stack{m.property.forbid.get()};
  while (!stack.empty()) {
    const GuardExpr* g = stack.back();
    stack.pop_back();
    if (g->kind == GuardExpr::Kind::Atom) {
      if (g->equal) return std::make_pair(g->var, g->value);
      continue;
    }
    for (auto it = g->children.rbegin(); it != g->children.rend(); ++it)
      stack.push_back(it->get());
    if (g->body) stack.push_back(g->body.get());
  }
  return std::nullopt;
}

// Bounded oracle escalation: definitive verdict unless the cap is hit.
void escalate(const GroundModel& gm, RefineResult& res, uint64_t cap) {
  res.trace.escalated = true;
  ReachResult r = reach(gm, cap, /*track_parents=*/true);
  for (uint32_t s = 0; s < r.states.size(); ++s) {
    auto st = r.states.at(s);
    for (auto [i, j] : gm.property_pairs()) {
      if (!gm.forbid(i).eval([&](uint32_t v) { return st[v]; })) continue;
      if (!gm.forbid(j).eval([&](uint32_t v) { return st[v]; })) continue;
      res.verdict = Verdict::Violated;
      CounterexamplePath cex;
      cex.node_a = i;
      cex.node_b = j;
      for (uint32_t idx : extract_path(r, s)) {
        auto sv = r.states.at(idx);
        cex.states.emplace_back(sv.begin(), sv.end());
        if (idx != 0) {
          CommandRef ref = r.parent_cmd[idx];
          cex.labels.push_back(gm.node_name(ref.node) + ":" +
                               gm.commands(ref.node)[ref.index].label);
        }
      }
      res.counterexample = std::move(cex);
      return;
    }
  }
  if (r.complete) {
    res.verdict = Verdict::Proved;
  } else {
    res.verdict = Verdict::Unknown;
    res.trace.oracle_complete = false;
  }
}

}  // namespace

RefineResult refine_loop(const ModelFile& m, const RefineOptions& opts) {
  if (opts.budget < 0) throw Error(ErrorKind::Input, "budget must be >= 0");
  RefineResult res;
  res.model = m;
  int steps_taken = 0;
  bool last_added = false;

  for (;;) {
    GroundModel gm(res.model);
    res.theta = strongest_split_invariant(gm, opts.mode);
    res.property = check_property(gm, res.theta);
    Verdict v = res.property.proved ? Verdict::Proved : Verdict::Unknown;
    if (!res.trace.steps.empty() && res.trace.steps.back().theta_sizes_after.empty()) {
      RefinementStep& prev = res.trace.steps.back();
      prev.verdict_after = v;
      for (const auto& c : res.theta.components)
        prev.theta_sizes_after.push_back(c.size());
    }
    if (v == Verdict::Proved) {
      res.verdict = Verdict::Proved;
      return res;
    }
    if (steps_taken >= opts.budget) {
      res.verdict = Verdict::Unknown;
      return res;
    }

    if (opts.strategy == RefineStrategy::AddLast) {
      auto trigger = forbid_trigger(res.model);
      if (last_added || !trigger) {
        escalate(GroundModel(res.model), res, opts.state_cap);
        return res;
      }
      res.model = add_last_auxiliary(res.model, trigger->first, trigger->second);
      last_added = true;
      RefinementStep step;
      step.kind = RefinementStep::Kind::AddLast;
      step.trigger = *trigger;
      res.trace.steps.push_back(std::move(step));
    } else {
      auto step = pick_exposure(res.model, res.property);
      if (!step) {
        escalate(GroundModel(res.model), res, opts.state_cap);
        return res;
      }
      res.model = expose(res.model, *step);
      RefinementStep rec;
      rec.kind = RefinementStep::Kind::Expose;
      rec.exposure = *step;
      res.trace.steps.push_back(std::move(rec));
    }
    ++steps_taken;
  }
}

}  // namespace splitmc
