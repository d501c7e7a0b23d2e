#include "splitmc/semantics.hpp"

#include <algorithm>
#include <ostream>

#include "splitmc/error.hpp"

namespace splitmc {

ValuationSet initial_states(const GroundModel& m) {
  ValuationSet out(m.var_count());
  std::vector<uint8_t> init(m.var_count());
  for (uint32_t v = 0; v < m.var_count(); ++v) init[v] = m.var(v).init;
  out.insert(init);
  return out;
}

std::vector<CommandRef> all_commands(const GroundModel& m) {
  std::vector<CommandRef> out;
  out.reserve(m.total_commands());
  for (uint32_t n = 0; n < m.node_count(); ++n)
    for (uint32_t c = 0; c < m.commands(n).size(); ++c) out.push_back({n, c});
  return out;
}

ValuationSet sp(const GroundModel& m, const std::vector<CommandRef>& ts,
                const ValuationSet& z) {
  ValuationSet out(z.width());
  std::vector<uint8_t> cur(z.width()), next(z.width());
  for (uint32_t i = 0; i < z.size(); ++i) {
    auto s = z.at(i);
    std::copy(s.begin(), s.end(), cur.begin());
    for (const CommandRef& ref : ts) {
      const GroundCommand& cmd = m.commands(ref.node)[ref.index];
      if (!cmd.guard.eval([&](uint32_t v) { return cur[v]; })) continue;
      next = cur;
      for (const GroundUpdate& u : cmd.updates) next[u.var] = u.value;
      out.insert(next);
    }
  }
  return out;
}

ReachResult reach(const GroundModel& m, uint64_t state_cap, bool track_parents) {
  if (state_cap == 0) throw Error(ErrorKind::Input, "state cap must be positive");
  ReachResult r{ValuationSet(m.var_count())};
  r.cap = state_cap;

  std::vector<uint8_t> init(m.var_count());
  for (uint32_t v = 0; v < m.var_count(); ++v) init[v] = m.var(v).init;
  r.states.insert(init);
  if (track_parents) {
    r.parent.push_back(UINT32_MAX);
    r.parent_cmd.push_back({UINT32_MAX, UINT32_MAX});
  }

  std::vector<const GroundCommand*> cmds;
  std::vector<CommandRef> refs;
  cmds.reserve(m.total_commands());
  for (uint32_t n = 0; n < m.node_count(); ++n)
    for (uint32_t c = 0; c < m.commands(n).size(); ++c) {
      cmds.push_back(&m.commands(n)[c]);
      refs.push_back({n, c});
    }

  std::vector<uint8_t> cur(m.var_count()), next(m.var_count());
  // insertion order is BFS order; the frontier is the unprocessed suffix
  for (uint32_t head = 0; head < r.states.size(); ++head) {
    auto s = r.states.at(head);
    std::copy(s.begin(), s.end(), cur.begin());
    for (size_t ci = 0; ci < cmds.size(); ++ci) {
      const GroundCommand& cmd = *cmds[ci];
      if (!cmd.guard.eval([&](uint32_t v) { return cur[v]; })) continue;
      next = cur;
      for (const GroundUpdate& u : cmd.updates) next[u.var] = u.value;
      if (r.states.contains(next)) continue;
      if (r.states.size() >= state_cap) {
        r.complete = false;
        return r;
      }
      r.states.insert(next);
      if (track_parents) {
        r.parent.push_back(head);
        r.parent_cmd.push_back(refs[ci]);
      }
    }
  }
  return r;
}

ValuationSet project(const GroundModel& m, const ValuationSet& z, uint32_t node) {
  const auto& scope = m.scope(node);
  ValuationSet out(static_cast<uint32_t>(scope.size()));
  std::vector<uint8_t> local(scope.size());
  for (uint32_t i = 0; i < z.size(); ++i) {
    auto s = z.at(i);
    for (size_t k = 0; k < scope.size(); ++k) local[k] = s[scope[k]];
    out.insert(local);
  }
  return out;
}

void dump_states(std::ostream& os, const GroundModel& m, const ValuationSet& z,
                 const std::vector<uint32_t>* vars) {
  // tuples are full global states when vars is null, otherwise valuations of
  // exactly the listed variables in that order
  std::vector<uint32_t> all;
  if (!vars) {
    all.resize(m.var_count());
    for (uint32_t v = 0; v < m.var_count(); ++v) all[v] = v;
    vars = &all;
  }
  std::vector<std::string> lines;
  lines.reserve(z.size());
  for (uint32_t i = 0; i < z.size(); ++i) {
    auto s = z.at(i);
    std::string line;
    for (size_t k = 0; k < vars->size(); ++k) {
      if (k) line += ' ';
      uint32_t v = (*vars)[k];
      line += m.var(v).name;
      line += '=';
      line += m.var(v).domain[s[k]];
    }
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) os << l << '\n';
}

std::vector<uint32_t> extract_path(const ReachResult& r, uint32_t target) {
  if (r.parent.empty())
    throw Error(ErrorKind::Input, "path extraction requires parent tracking");
  std::vector<uint32_t> path;
  for (uint32_t cur = target; cur != UINT32_MAX; cur = r.parent[cur])
    path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace splitmc
