#include "splitmc/symmetry.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"

namespace splitmc {

namespace {

uint32_t position_of_edge(const GroundModel& g, uint32_t node, uint32_t edge) {
  const auto& nbhd = g.nbhd_edges(node);
  auto it = std::lower_bound(nbhd.begin(), nbhd.end(), edge);
  if (it == nbhd.end() || *it != edge)
    throw Error(ErrorKind::Input, "edge not in neighborhood");
  return static_cast<uint32_t>(it - nbhd.begin());
}

bool direction_preserving(const GroundModel& g, uint32_t m, uint32_t n,
                          const std::vector<uint32_t>& edge_map) {
  const NetworkGraph& net = g.source().network;
  const auto& nm = g.nbhd_edges(m);
  for (size_t p = 0; p < nm.size(); ++p) {
    uint32_t e = nm[p];
    uint32_t f = edge_map[p];
    if (net.node_writes(m, e) != net.node_writes(n, f)) return false;
    if (net.node_reads(m, e) != net.node_reads(n, f)) return false;
  }
  return true;
}

// Value renaming for one edge pair: the source's id maps to the target's id,
// the opposite endpoint to the opposite endpoint, everything else unchanged.
// Auxiliaries and locals use the m/n transposition. Returns false when a
// renamed value is missing from the target domain.
bool edge_value_table(const GroundModel& g, uint32_t m, uint32_t n, uint32_t e,
                      uint32_t f, std::vector<uint8_t>& table) {
  const NetworkGraph& net = g.source().network;
  const std::string& mname = net.nodes()[m];
  const std::string& nname = net.nodes()[n];
  std::string e_other, f_other;
  for (uint32_t x : net.endpoints(e))
    if (x != m) e_other = net.nodes()[x];
  for (uint32_t x : net.endpoints(f))
    if (x != n) f_other = net.nodes()[x];
  if (e_other.empty()) e_other = mname;  // self-loop edge
  if (f_other.empty()) f_other = nname;

  const auto& dom_e = g.var(g.edge_var(e)).domain;
  const auto& dom_f = g.var(g.edge_var(f)).domain;
  table.assign(dom_e.size(), 0);
  for (size_t v = 0; v < dom_e.size(); ++v) {
    std::string target = dom_e[v];
    if (target == mname) {
      target = nname;
    } else if (target == e_other) {
      target = f_other;
    }
    auto it = std::find(dom_f.begin(), dom_f.end(), target);
    if (it == dom_f.end()) return false;
    table[v] = static_cast<uint8_t>(it - dom_f.begin());
  }
  return true;
}

bool transposition_table(const std::vector<std::string>& dom_src,
                         const std::vector<std::string>& dom_dst,
                         const std::string& mname, const std::string& nname,
                         std::vector<uint8_t>& table) {
  table.assign(dom_src.size(), 0);
  for (size_t v = 0; v < dom_src.size(); ++v) {
    std::string target = dom_src[v];
    if (target == mname) {
      target = nname;
    } else if (target == nname) {
      target = mname;
    }
    auto it = std::find(dom_dst.begin(), dom_dst.end(), target);
    if (it == dom_dst.end()) return false;
    table[v] = static_cast<uint8_t>(it - dom_dst.begin());
  }
  return true;
}

// Variable and value translation induced by a local symmetry, covering the
// whole scope of m (locals position-wise, edges through the map,
// auxiliaries fixed).
struct ScopeRenaming {
  std::vector<uint32_t> var_to_var;             // scope(m) position -> global var at n
  std::vector<std::vector<uint8_t>> value_map;  // per scope(m) position
};

bool build_renaming(const GroundModel& g, const LocalSymmetry& s, ScopeRenaming& out) {
  const NetworkGraph& net = g.source().network;
  const std::string& mname = net.nodes()[s.m];
  const std::string& nname = net.nodes()[s.n];
  const auto& sm = g.scope(s.m);
  const auto& sn = g.scope(s.n);
  if (sm.size() != sn.size()) return false;
  const auto& nm = g.nbhd_edges(s.m);
  if (s.edge_map.size() != nm.size()) return false;

  out.var_to_var.assign(sm.size(), 0);
  out.value_map.assign(sm.size(), {});
  size_t locals_m = 0;
  for (uint32_t v : sm)
    if (g.var(v).kind == VarKind::Local) ++locals_m;
  size_t locals_n = 0;
  for (uint32_t v : sn)
    if (g.var(v).kind == VarKind::Local) ++locals_n;
  if (locals_m != locals_n) return false;

  for (size_t p = 0; p < sm.size(); ++p) {
    const GroundVar& src = g.var(sm[p]);
    if (src.kind == VarKind::Local) {
      if (p >= locals_n || g.var(sn[p]).kind != VarKind::Local) return false;
      out.var_to_var[p] = sn[p];
      if (!transposition_table(src.domain, g.var(sn[p]).domain, mname, nname,
                               out.value_map[p]))
        return false;
    } else if (src.kind == VarKind::Edge) {
      uint32_t pos = position_of_edge(g, s.m, src.owner);
      uint32_t f = s.edge_map[pos];
      out.var_to_var[p] = g.edge_var(f);
      if (!edge_value_table(g, s.m, s.n, src.owner, f, out.value_map[p]))
        return false;
    } else {
      out.var_to_var[p] = sm[p];  // auxiliaries are globally named
      if (!transposition_table(src.domain, src.domain, mname, nname,
                               out.value_map[p]))
        return false;
    }
  }
  return true;
}

// Canonical byte string of a renamed command set, labels ignored.
std::string command_fingerprint(const GroundModel& g, uint32_t node,
                                const ScopeRenaming* rename, uint32_t src_node) {
  // rename == nullptr: fingerprint node's own commands verbatim
  std::unordered_map<uint32_t, uint32_t> var_to_pos;
  const auto& scope = g.scope(src_node);
  for (uint32_t p = 0; p < scope.size(); ++p) var_to_pos[scope[p]] = p;

  auto map_var = [&](uint32_t v) -> uint32_t {
    if (!rename) return v;
    return rename->var_to_var[var_to_pos.at(v)];
  };
  auto map_val = [&](uint32_t v, uint8_t val) -> uint8_t {
    if (!rename) return val;
    return rename->value_map[var_to_pos.at(v)][val];
  };

  std::vector<std::string> keys;
  for (const GroundCommand& c : g.commands(node)) {
    std::string k;
    auto put32 = [&k](uint32_t x) {
      for (int i = 0; i < 4; ++i) k.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
    };
    std::vector<GroundAtom> lits;
    for (const GroundAtom& a : c.guard.literals)
      lits.push_back({map_var(a.var), map_val(a.var, a.value), a.equal});
    std::sort(lits.begin(), lits.end());
    k.push_back(c.guard.conjunctive ? 'C' : 'P');
    put32(static_cast<uint32_t>(lits.size()));
    for (const GroundAtom& a : lits) {
      put32(a.var);
      k.push_back(static_cast<char>(a.value));
      k.push_back(a.equal ? '=' : '!');
    }
    for (const GroundGuard::Node& nd : c.guard.postfix) {
      k.push_back(static_cast<char>('0' + static_cast<int>(nd.op)));
      if (nd.op == GroundGuard::Op::Atom) {
        put32(map_var(nd.atom.var));
        k.push_back(static_cast<char>(map_val(nd.atom.var, nd.atom.value)));
        k.push_back(nd.atom.equal ? '=' : '!');
      }
    }
    std::vector<GroundUpdate> ups;
    for (const GroundUpdate& u : c.updates)
      ups.push_back({map_var(u.var), map_val(u.var, u.value)});
    std::sort(ups.begin(), ups.end());
    k.push_back('U');
    put32(static_cast<uint32_t>(ups.size()));
    for (const GroundUpdate& u : ups) {
      put32(u.var);
      k.push_back(static_cast<char>(u.value));
    }
    keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) {
    out += k;
    out.push_back('\xff');
  }
  return out;
}

bool process_compatible(const GroundModel& g, const LocalSymmetry& s) {
  ScopeRenaming ren;
  if (!build_renaming(g, s, ren)) return false;
  return command_fingerprint(g, s.m, &ren, s.m) ==
         command_fingerprint(g, s.n, nullptr, s.n);
}

}  // namespace

LocalSymmetry identity_symmetry(const GroundModel& g, uint32_t m) {
  return {m, m, g.nbhd_edges(m)};
}

LocalSymmetry inverse(const GroundModel& g, const LocalSymmetry& s) {
  const auto& nm = g.nbhd_edges(s.m);
  const auto& nn = g.nbhd_edges(s.n);
  LocalSymmetry inv{s.n, s.m, std::vector<uint32_t>(nn.size(), 0)};
  for (size_t p = 0; p < nm.size(); ++p) {
    uint32_t pos = position_of_edge(g, s.n, s.edge_map[p]);
    inv.edge_map[pos] = nm[p];
  }
  return inv;
}

LocalSymmetry compose(const GroundModel& g, const LocalSymmetry& second,
                      const LocalSymmetry& first) {
  if (first.n != second.m)
    throw Error(ErrorKind::Input, "composition endpoints do not match");
  LocalSymmetry out{first.m, second.n, {}};
  out.edge_map.reserve(first.edge_map.size());
  for (uint32_t f : first.edge_map) {
    uint32_t pos = position_of_edge(g, second.m, f);
    out.edge_map.push_back(second.edge_map[pos]);
  }
  return out;
}

std::vector<LocalSymmetry> groupoid(const GroundModel& g) {
  std::vector<LocalSymmetry> out;
  uint32_t nn = g.node_count();
  // per-node command fingerprints of the targets, reused across pairs
  std::vector<std::string> plain(nn);
  for (uint32_t n = 0; n < nn; ++n)
    plain[n] = command_fingerprint(g, n, nullptr, n);

  for (uint32_t m = 0; m < nn; ++m) {
    const auto& nm = g.nbhd_edges(m);
    for (uint32_t n = 0; n < nn; ++n) {
      const auto& nd = g.nbhd_edges(n);
      if (nm.size() != nd.size()) continue;
      // enumerate bijections as permutations of n's neighborhood
      std::vector<uint32_t> perm(nd.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        LocalSymmetry s{m, n, {}};
        s.edge_map.reserve(nd.size());
        for (uint32_t p : perm) s.edge_map.push_back(nd[p]);
        if (!direction_preserving(g, m, n, s.edge_map)) continue;
        ScopeRenaming ren;
        if (!build_renaming(g, s, ren)) continue;
        if (command_fingerprint(g, m, &ren, m) != plain[n]) continue;
        out.push_back(std::move(s));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return out;
}

bool closed_under_groupoid_laws(const GroundModel& g,
                                const std::vector<LocalSymmetry>& rel) {
  std::set<std::pair<std::pair<uint32_t, uint32_t>, std::vector<uint32_t>>> index;
  for (const auto& s : rel) index.insert({{s.m, s.n}, s.edge_map});
  auto has = [&](const LocalSymmetry& s) {
    return index.count({{s.m, s.n}, s.edge_map}) > 0;
  };
  for (uint32_t m = 0; m < g.node_count(); ++m)
    if (!has(identity_symmetry(g, m))) return false;
  for (const auto& s : rel)
    if (!has(inverse(g, s))) return false;
  for (const auto& a : rel) {
    for (const auto& b : rel) {
      if (a.n != b.m) continue;
      if (!has(compose(g, b, a))) return false;
    }
  }
  return true;
}

namespace {

// Shared-edge agreement between beta (at m) and delta (at k): on every edge
// common to both neighborhoods the two maps must coincide.
bool agree_on_shared(const GroundModel& g, uint32_t m,
                     const std::vector<uint32_t>& beta, uint32_t k,
                     const std::vector<uint32_t>& delta) {
  const auto& nm = g.nbhd_edges(m);
  const auto& nk = g.nbhd_edges(k);
  size_t pm = 0, pk = 0;
  while (pm < nm.size() && pk < nk.size()) {
    if (nm[pm] == nk[pk]) {
      if (beta[pm] != delta[pk]) return false;
      ++pm;
      ++pk;
    } else if (nm[pm] < nk[pk]) {
      ++pm;
    } else {
      ++pk;
    }
  }
  return true;
}

bool triple_balanced(const GroundModel& g, const LocalSymmetry& s,
                     const std::vector<std::vector<uint32_t>>& by_source,
                     const std::vector<LocalSymmetry>& triples,
                     const std::vector<char>& alive) {
  for (uint32_t k = 0; k < g.node_count(); ++k) {
    if (k == s.m || !g.model_points_to(k, s.m)) continue;
    bool witnessed = false;
    for (uint32_t t : by_source[k]) {
      if (!alive[t]) continue;
      const LocalSymmetry& cand = triples[t];
      if (!g.model_points_to(cand.n, s.n)) continue;
      if (agree_on_shared(g, s.m, s.edge_map, k, cand.edge_map)) {
        witnessed = true;
        break;
      }
    }
    if (!witnessed) return false;
  }
  return true;
}

}  // namespace

bool balanced(const GroundModel& g, const BalanceRelation& b) {
  std::vector<std::vector<uint32_t>> by_source(g.node_count());
  for (uint32_t t = 0; t < b.triples.size(); ++t)
    by_source[b.triples[t].m].push_back(t);
  std::vector<char> alive(b.triples.size(), 1);
  for (const auto& s : b.triples)
    if (!triple_balanced(g, s, by_source, b.triples, alive)) return false;
  return true;
}

BalanceRelation largest_balance(const GroundModel& g,
                                std::vector<LocalSymmetry> candidates) {
  std::vector<char> alive(candidates.size(), 1);
  std::vector<std::vector<uint32_t>> by_source(g.node_count());
  std::vector<std::vector<uint32_t>> by_pair_source(g.node_count());
  for (uint32_t t = 0; t < candidates.size(); ++t)
    by_source[candidates[t].m].push_back(t);

  for (;;) {
    // coinductive refinement: drop triples whose balance condition fails
    bool removed_any = false;
    std::deque<uint32_t> queue;
    std::vector<char> queued(candidates.size(), 1);
    for (uint32_t t = 0; t < candidates.size(); ++t)
      if (alive[t]) queue.push_back(t);
    while (!queue.empty()) {
      uint32_t t = queue.front();
      queue.pop_front();
      queued[t] = 0;
      if (!alive[t]) continue;
      if (triple_balanced(g, candidates[t], by_source, candidates, alive)) continue;
      alive[t] = 0;
      removed_any = true;
      // only triples whose witnesses may have included t need a re-check:
      // sources pointed to by t.m, targets pointed to by t.n
      for (uint32_t u = 0; u < candidates.size(); ++u) {
        if (!alive[u] || queued[u]) continue;
        if (g.model_points_to(candidates[t].m, candidates[u].m) &&
            g.model_points_to(candidates[t].n, candidates[u].n)) {
          queued[u] = 1;
          queue.push_back(u);
        }
      }
    }

    // re-establish sub-groupoid closure; removals feed back into refinement
    std::set<std::pair<std::pair<uint32_t, uint32_t>, std::vector<uint32_t>>> index;
    for (uint32_t t = 0; t < candidates.size(); ++t)
      if (alive[t]) index.insert({{candidates[t].m, candidates[t].n},
                                  candidates[t].edge_map});
    auto has = [&](const LocalSymmetry& s) {
      return index.count({{s.m, s.n}, s.edge_map}) > 0;
    };
    bool closure_removed = false;
    for (uint32_t t = 0; t < candidates.size(); ++t) {
      if (!alive[t]) continue;
      if (!has(inverse(g, candidates[t]))) {
        alive[t] = 0;
        closure_removed = true;
      }
    }
    for (uint32_t a = 0; a < candidates.size() && !closure_removed; ++a) {
      if (!alive[a]) continue;
      for (uint32_t b = 0; b < candidates.size(); ++b) {
        if (!alive[b] || candidates[a].n != candidates[b].m) continue;
        if (!has(compose(g, candidates[b], candidates[a]))) {
          alive[a] = alive[b] = 0;
          closure_removed = true;
          break;
        }
      }
    }
    if (!closure_removed && !removed_any) break;
    if (!closure_removed) break;
  }

  BalanceRelation out;
  for (uint32_t t = 0; t < candidates.size(); ++t)
    if (alive[t]) out.triples.push_back(candidates[t]);
  return out;
}

BalanceRelation induced_balance_from_group(const GroundModel& g,
                                           const std::vector<Automorphism>& group) {
  const NetworkGraph& net = g.source().network;
  std::set<std::pair<std::pair<uint32_t, uint32_t>, std::vector<uint32_t>>> seen;
  BalanceRelation out;
  for (const Automorphism& phi : group) {
    if (phi.node_map.size() != net.node_count() ||
        phi.edge_map.size() != net.edge_count())
      throw Error(ErrorKind::Input, "automorphism arity mismatch");
    // permutation + connection preservation check
    std::vector<char> seen_node(net.node_count(), 0), seen_edge(net.edge_count(), 0);
    for (uint32_t x : phi.node_map) {
      if (x >= net.node_count() || seen_node[x])
        throw Error(ErrorKind::Input, "node map is not a permutation");
      seen_node[x] = 1;
    }
    for (uint32_t e : phi.edge_map) {
      if (e >= net.edge_count() || seen_edge[e])
        throw Error(ErrorKind::Input, "edge map is not a permutation");
      seen_edge[e] = 1;
    }
    for (uint32_t x = 0; x < net.node_count(); ++x) {
      for (uint32_t e = 0; e < net.edge_count(); ++e) {
        if (net.node_writes(x, e) != net.node_writes(phi.node_map[x], phi.edge_map[e]) ||
            net.node_reads(x, e) != net.node_reads(phi.node_map[x], phi.edge_map[e]))
          throw Error(ErrorKind::Input, "input does not preserve connections");
      }
    }
    for (uint32_t m = 0; m < net.node_count(); ++m) {
      LocalSymmetry s{m, phi.node_map[m], {}};
      for (uint32_t e : g.nbhd_edges(m)) s.edge_map.push_back(phi.edge_map[e]);
      if (!process_compatible(g, s))
        throw Error(ErrorKind::Input,
                    "automorphism is not compatible with the process assignment");
      if (seen.insert({{s.m, s.n}, s.edge_map}).second)
        out.triples.push_back(std::move(s));
    }
  }
  if (!balanced(g, out))
    throw Error(ErrorKind::Input, "induced triples fail the balance condition");
  return out;
}

ValuationSet apply_symmetry(const GroundModel& g, const LocalSymmetry& s,
                            const ValuationSet& theta_m) {
  ScopeRenaming ren;
  if (!build_renaming(g, s, ren))
    throw Error(ErrorKind::Domain, "incompatible domains under symmetry");
  const auto& sn = g.scope(s.n);
  std::unordered_map<uint32_t, uint32_t> pos_n;
  for (uint32_t p = 0; p < sn.size(); ++p) pos_n[sn[p]] = p;

  std::vector<uint32_t> target_pos(ren.var_to_var.size());
  for (size_t p = 0; p < ren.var_to_var.size(); ++p)
    target_pos[p] = pos_n.at(ren.var_to_var[p]);

  ValuationSet out(static_cast<uint32_t>(sn.size()));
  std::vector<uint8_t> mapped(sn.size());
  for (uint32_t i = 0; i < theta_m.size(); ++i) {
    auto t = theta_m.at(i);
    for (size_t p = 0; p < target_pos.size(); ++p)
      mapped[target_pos[p]] = ren.value_map[p][t[p]];
    out.insert(mapped);
  }
  return out;
}

OrbitPartition orbits(const GroundModel& g, const BalanceRelation& b) {
  uint32_t nn = g.node_count();
  OrbitPartition part;
  part.representative.assign(nn, 0);
  part.witness.reserve(nn);

  // adjacency over triples, traversed from the smallest unvisited node so
  // representatives are minimal and witnesses deterministic
  std::vector<std::vector<uint32_t>> out_triples(nn);
  for (uint32_t t = 0; t < b.triples.size(); ++t)
    out_triples[b.triples[t].m].push_back(t);

  std::vector<char> visited(nn, 0);
  std::vector<LocalSymmetry> witness(nn);
  for (uint32_t root = 0; root < nn; ++root) {
    if (visited[root]) continue;
    std::vector<uint32_t> members;
    std::deque<uint32_t> queue{root};
    visited[root] = 1;
    witness[root] = identity_symmetry(g, root);
    while (!queue.empty()) {
      uint32_t u = queue.front();
      queue.pop_front();
      members.push_back(u);
      for (uint32_t t : out_triples[u]) {
        const LocalSymmetry& s = b.triples[t];
        if (visited[s.n]) continue;
        visited[s.n] = 1;
        witness[s.n] = compose(g, s, witness[u]);
        queue.push_back(s.n);
      }
    }
    std::sort(members.begin(), members.end());
    for (uint32_t v : members) part.representative[v] = root;
    part.classes.push_back(std::move(members));
  }
  part.witness = std::move(witness);
  return part;
}

SplitInvariant reduced_fixpoint(const GroundModel& g, const BalanceRelation& b,
                                FixpointMode mode) {
  OrbitPartition part = orbits(g, b);
  SplitInvariant theta = empty_invariant(g);

  auto refresh_members = [&](uint32_t rep) {
    for (uint32_t v = 0; v < g.node_count(); ++v) {
      if (v == rep || part.representative[v] != rep) continue;
      theta.components[v] = apply_symmetry(g, part.witness[v], theta.components[rep]);
    }
  };

  for (;;) {
    bool changed = false;
    for (const auto& cls : part.classes) {
      uint32_t rep = cls.front();
      ValuationSet res = f_step(g, theta, rep, mode);
      ValuationSet& cur = theta.components[rep];
      bool grew = false;
      for (uint32_t k = 0; k < res.size(); ++k)
        if (cur.insert(res.at(k)).second) grew = true;
      if (grew) {
        refresh_members(rep);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return theta;
}

void orbit_dot(std::ostream& os, const GroundModel& g, const OrbitPartition& p) {
  static const char* palette[] = {"#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3",
                                  "#a6d854", "#ffd92f", "#e5c494", "#b3b3b3"};
  const NetworkGraph& net = g.source().network;
  std::vector<uint32_t> class_of(net.node_count(), 0);
  for (uint32_t c = 0; c < p.classes.size(); ++c)
    for (uint32_t v : p.classes[c]) class_of[v] = c;

  os << "graph network {\n  node [style=filled];\n";
  for (uint32_t n = 0; n < net.node_count(); ++n) {
    os << "  \"" << net.nodes()[n] << "\" [shape=circle, fillcolor=\""
       << palette[class_of[n] % 8] << "\"];\n";
  }
  for (uint32_t e = 0; e < net.edge_count(); ++e) {
    os << "  \"" << net.edges()[e]
       << "\" [shape=box, fillcolor=\"#eeeeee\", height=0.2];\n";
  }
  std::set<std::pair<uint32_t, uint32_t>> drawn;
  for (uint32_t n = 0; n < net.node_count(); ++n) {
    for (uint32_t e : net.neighborhood_edges(n)) {
      if (drawn.insert({n, e}).second)
        os << "  \"" << net.nodes()[n] << "\" -- \"" << net.edges()[e] << "\";\n";
    }
  }
  os << "}\n";
}

}  // namespace splitmc
