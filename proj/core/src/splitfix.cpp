#include "splitmc/splitfix.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <random>
#include <unordered_map>

#include "splitmc/error.hpp"
#include "splitmc/semantics.hpp"

namespace splitmc {

SplitInvariant empty_invariant(const GroundModel& m) {
  SplitInvariant inv;
  for (uint32_t n = 0; n < m.node_count(); ++n)
    inv.components.emplace_back(static_cast<uint32_t>(m.scope(n).size()));
  return inv;
}

SplitInvariant full_invariant(const GroundModel& m) {
  SplitInvariant inv = empty_invariant(m);
  for (uint32_t n = 0; n < m.node_count(); ++n) {
    const auto& scope = m.scope(n);
    std::vector<uint8_t> tuple(scope.size(), 0);
    for (;;) {
      inv.components[n].insert(tuple);
      size_t k = scope.size();
      while (k > 0) {
        --k;
        if (++tuple[k] < m.var(scope[k]).domain.size()) break;
        tuple[k] = 0;
        if (k == 0) goto done;
      }
      if (scope.empty()) break;
    }
  done:;
  }
  return inv;
}

bool invariant_equal(const SplitInvariant& a, const SplitInvariant& b) {
  if (a.components.size() != b.components.size()) return false;
  for (size_t n = 0; n < a.components.size(); ++n)
    if (!set_equal(a.components[n], b.components[n])) return false;
  return true;
}

bool invariant_includes(const SplitInvariant& big, const SplitInvariant& small) {
  if (big.components.size() != small.components.size()) return false;
  for (size_t n = 0; n < big.components.size(); ++n)
    if (!big.components[n].includes(small.components[n])) return false;
  return true;
}

namespace {

// Rewrites variable ids to tuple positions so GroundGuard::eval can run
// directly on component tuples.
GroundGuard translate_guard(const GroundGuard& g,
                            const std::unordered_map<uint32_t, uint32_t>& pos) {
  GroundGuard out = g;
  for (GroundAtom& a : out.literals) a.var = pos.at(a.var);
  for (GroundGuard::Node& n : out.postfix)
    if (n.op == GroundGuard::Op::Atom) n.atom.var = pos.at(n.atom.var);
  return out;
}

struct PosCommand {
  GroundGuard guard;
  std::vector<GroundUpdate> updates;  // var = tuple position
};

std::vector<PosCommand> translate_commands(
    const std::vector<GroundCommand>& cmds,
    const std::unordered_map<uint32_t, uint32_t>& pos) {
  std::vector<PosCommand> out;
  out.reserve(cmds.size());
  for (const GroundCommand& c : cmds) {
    PosCommand pc;
    pc.guard = translate_guard(c.guard, pos);
    for (const GroundUpdate& u : c.updates) pc.updates.push_back({pos.at(u.var), u.value});
    out.push_back(std::move(pc));
  }
  return out;
}

std::unordered_map<uint32_t, uint32_t> position_map(const std::vector<uint32_t>& scope) {
  std::unordered_map<uint32_t, uint32_t> pos;
  pos.reserve(scope.size());
  for (uint32_t k = 0; k < scope.size(); ++k) pos.emplace(scope[k], k);
  return pos;
}

// Geometry of a joint component over V_i ∪ V_j plus j's commands rewritten
// into joint positions.
struct JointLayout {
  std::vector<uint32_t> scope;       // ascending global var ids
  std::vector<uint32_t> from_i;      // joint position of scope(i)[k]
  std::vector<uint32_t> from_j;
  std::vector<uint32_t> shared_in_i; // positions within scope(i) of shared vars
  std::vector<uint32_t> shared_in_j;
  std::vector<PosCommand> j_commands;

  std::string key_i(std::span<const uint8_t> a) const {
    std::string k;
    k.reserve(shared_in_i.size());
    for (uint32_t p : shared_in_i) k.push_back(static_cast<char>(a[p]));
    return k;
  }
  std::string key_j(std::span<const uint8_t> b) const {
    std::string k;
    k.reserve(shared_in_j.size());
    for (uint32_t p : shared_in_j) k.push_back(static_cast<char>(b[p]));
    return k;
  }
  void merge(std::span<const uint8_t> a, std::span<const uint8_t> b,
             std::vector<uint8_t>& out) const {
    out.resize(scope.size());
    for (size_t k = 0; k < from_i.size(); ++k) out[from_i[k]] = a[k];
    for (size_t k = 0; k < from_j.size(); ++k) out[from_j[k]] = b[k];
  }
};

JointLayout make_layout(const GroundModel& m, uint32_t i, uint32_t j) {
  JointLayout L;
  const auto& si = m.scope(i);
  const auto& sj = m.scope(j);
  L.scope = si;
  L.scope.insert(L.scope.end(), sj.begin(), sj.end());
  std::sort(L.scope.begin(), L.scope.end());
  L.scope.erase(std::unique(L.scope.begin(), L.scope.end()), L.scope.end());
  auto joint_pos = position_map(L.scope);
  auto pos_i = position_map(si);
  for (uint32_t v : si) L.from_i.push_back(joint_pos.at(v));
  for (uint32_t v : sj) L.from_j.push_back(joint_pos.at(v));
  for (uint32_t k = 0; k < sj.size(); ++k) {
    auto it = pos_i.find(sj[k]);
    if (it != pos_i.end()) {
      L.shared_in_i.push_back(it->second);
      L.shared_in_j.push_back(k);
    }
  }
  L.j_commands = translate_commands(m.commands(j), joint_pos);
  return L;
}

}  // namespace

std::vector<uint32_t> joint_scope(const GroundModel& m, uint32_t i, uint32_t j) {
  return make_layout(m, i, j).scope;
}

ValuationSet join(const GroundModel& m, uint32_t i, const ValuationSet& a,
                  uint32_t j, const ValuationSet& b) {
  if (i == j) throw Error(ErrorKind::Input, "join requires distinct nodes");
  JointLayout L = make_layout(m, i, j);
  ValuationSet out(static_cast<uint32_t>(L.scope.size()));
  std::unordered_map<std::string, std::vector<uint32_t>> buckets;
  for (uint32_t bi = 0; bi < b.size(); ++bi)
    buckets[L.key_j(b.at(bi))].push_back(bi);
  std::vector<uint8_t> joint;
  for (uint32_t ai = 0; ai < a.size(); ++ai) {
    auto it = buckets.find(L.key_i(a.at(ai)));
    if (it == buckets.end()) continue;
    for (uint32_t bi : it->second) {
      L.merge(a.at(ai), b.at(bi), joint);
      out.insert(joint);
    }
  }
  return out;
}

namespace {

// Pairwise-consistency filter for the split-form constraints: a tuple over
// `scope` survives if for every other component sharing variables there is a
// member state agreeing on the shared part.
bool consistent_with_rest(const GroundModel& m, const SplitInvariant& theta,
                          std::span<const uint8_t> tuple,
                          const std::vector<uint32_t>& scope,
                          std::initializer_list<uint32_t> exempt) {
  auto pos = position_map(scope);
  for (uint32_t k = 0; k < m.node_count(); ++k) {
    if (std::find(exempt.begin(), exempt.end(), k) != exempt.end()) continue;
    const auto& sk = m.scope(k);
    std::vector<std::pair<uint32_t, uint32_t>> shared;  // (pos in tuple, pos in sk)
    for (uint32_t t = 0; t < sk.size(); ++t) {
      auto it = pos.find(sk[t]);
      if (it != pos.end()) shared.push_back({it->second, t});
    }
    if (shared.empty()) continue;
    const ValuationSet& comp = theta.components[k];
    bool found = false;
    for (uint32_t c = 0; c < comp.size() && !found; ++c) {
      auto cs = comp.at(c);
      found = true;
      for (auto [tp, kp] : shared) {
        if (tuple[tp] != cs[kp]) {
          found = false;
          break;
        }
      }
    }
    if (!found) return false;
  }
  return true;
}

void insert_initial_projection(const GroundModel& m, uint32_t i, ValuationSet& out) {
  const auto& scope = m.scope(i);
  std::vector<uint8_t> init(scope.size());
  for (size_t k = 0; k < scope.size(); ++k) init[k] = m.var(scope[k]).init;
  out.insert(init);
}

}  // namespace

ValuationSet f_step(const GroundModel& m, const SplitInvariant& theta, uint32_t i,
                    FixpointMode mode) {
  const auto& scope = m.scope(i);
  ValuationSet out(static_cast<uint32_t>(scope.size()));
  insert_initial_projection(m, i, out);

  auto own = translate_commands(m.commands(i), position_map(scope));
  std::vector<uint8_t> next;
  const ValuationSet& comp = theta.components[i];
  for (uint32_t a = 0; a < comp.size(); ++a) {
    auto tuple = comp.at(a);
    if (mode == FixpointMode::SplitForm &&
        !consistent_with_rest(m, theta, tuple, scope, {i}))
      continue;
    for (const PosCommand& c : own) {
      if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
      next.assign(tuple.begin(), tuple.end());
      for (const GroundUpdate& u : c.updates) next[u.var] = u.value;
      out.insert(next);
    }
  }

  std::vector<uint8_t> joint, proj(scope.size());
  for (uint32_t j : m.pointing_in(i)) {
    JointLayout L = make_layout(m, i, j);
    ValuationSet joined = join(m, i, theta.components[i], j, theta.components[j]);
    for (uint32_t q = 0; q < joined.size(); ++q) {
      auto tuple = joined.at(q);
      if (mode == FixpointMode::SplitForm &&
          !consistent_with_rest(m, theta, tuple, L.scope, {i, j}))
        continue;
      for (const PosCommand& c : L.j_commands) {
        if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
        joint.assign(tuple.begin(), tuple.end());
        for (const GroundUpdate& u : c.updates) joint[u.var] = u.value;
        for (size_t k = 0; k < scope.size(); ++k) proj[k] = joint[L.from_i[k]];
        out.insert(proj);
      }
    }
  }
  return out;
}

namespace {

// Frontier (semi-naive) worklist engine for the assume-guarantee constraints:
// each component evaluation touches only tuples and joint pairs that appeared
// since the last visit, so total work is proportional to what is discovered,
// not to the number of rounds.
class WorklistEngine {
public:
  WorklistEngine(const GroundModel& m, const SplitInvariant* start)
      : m_(m), theta_(empty_invariant(m)) {
    uint32_t nn = m.node_count();
    own_.resize(nn);
    own_mark_.assign(nn, 0);
    init_done_.assign(nn, false);
    pairs_.resize(nn);
    for (uint32_t i = 0; i < nn; ++i) {
      own_[i] = translate_commands(m.commands(i), position_map(m.scope(i)));
      for (uint32_t j : m.pointing_in(i)) {
        pairs_[i].push_back(PairRec{j, make_layout(m, i, j)});
      }
    }
    if (start) {
      for (uint32_t i = 0; i < nn; ++i) {
        const ValuationSet& s = start->components[i];
        for (uint32_t k = 0; k < s.size(); ++k) theta_.components[i].insert(s.at(k));
      }
    }
  }

  SplitInvariant run(FixpointStats* stats) {
    std::deque<uint32_t> queue;
    std::vector<char> queued(m_.node_count(), 1);
    for (uint32_t i = 0; i < m_.node_count(); ++i) queue.push_back(i);
    uint64_t evals = 0;
    while (!queue.empty()) {
      uint32_t i = queue.front();
      queue.pop_front();
      queued[i] = 0;
      ++evals;
      if (!process(i)) continue;
      // growth here can only matter to components this node points to
      for (uint32_t k = 0; k < m_.node_count(); ++k) {
        if (k != i && !queued[k] && m_.model_points_to(i, k)) {
          // only useful if i actually interferes with k
          queued[k] = 1;
          queue.push_back(k);
        }
      }
    }
    if (stats) stats->component_evals = evals;
    return std::move(theta_);
  }

private:
  struct PairRec {
    uint32_t j;
    JointLayout layout;
    std::unordered_map<std::string, std::vector<uint32_t>> bucket_i, bucket_j;
    uint32_t mark_i = 0, mark_j = 0;
  };

  bool process(uint32_t i) {
    ValuationSet& comp = theta_.components[i];
    size_t before = comp.size();
    if (!init_done_[i]) {
      insert_initial_projection(m_, i, comp);
      init_done_[i] = true;
    }
    for (;;) {
      bool grew = false;
      // own steps over the unprocessed suffix
      std::vector<uint8_t> next;
      while (own_mark_[i] < comp.size()) {
        uint32_t idx = own_mark_[i]++;
        std::vector<uint8_t> tuple(comp.at(idx).begin(), comp.at(idx).end());
        for (const PosCommand& c : own_[i]) {
          if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
          next.assign(tuple.begin(), tuple.end());
          for (const GroundUpdate& u : c.updates) next[u.var] = u.value;
          if (comp.insert(next).second) grew = true;
        }
      }
      // interference from new joint pairs
      for (PairRec& pr : pairs_[i]) {
        if (apply_new_pairs(i, pr)) grew = true;
      }
      if (!grew) break;
    }
    return comp.size() > before;
  }

  bool apply_new_pairs(uint32_t i, PairRec& pr) {
    ValuationSet& ci = theta_.components[i];
    const ValuationSet& cj = theta_.components[pr.j];
    const JointLayout& L = pr.layout;
    uint32_t ci_size = static_cast<uint32_t>(ci.size());
    uint32_t cj_size = static_cast<uint32_t>(cj.size());
    bool grew = false;

    std::vector<uint8_t> joint, succ, proj(m_.scope(i).size());
    auto fire = [&](std::span<const uint8_t> a, std::span<const uint8_t> b) {
      L.merge(a, b, joint);
      for (const PosCommand& c : L.j_commands) {
        if (!c.guard.eval([&](uint32_t p) { return joint[p]; })) continue;
        succ = joint;
        for (const GroundUpdate& u : c.updates) succ[u.var] = u.value;
        for (size_t k = 0; k < proj.size(); ++k) proj[k] = succ[L.from_i[k]];
        if (ci.insert(proj).second) grew = true;
      }
    };

    // extend j's bucket first: the delta of a must meet old and new b alike
    for (uint32_t b = pr.mark_j; b < cj_size; ++b)
      pr.bucket_j[L.key_j(cj.at(b))].push_back(b);
    // new a against everything of b, then new b against old a
    for (uint32_t a = pr.mark_i; a < ci_size; ++a) {
      auto it = pr.bucket_j.find(L.key_i(ci.at(a)));
      if (it == pr.bucket_j.end()) continue;
      std::vector<uint8_t> av(ci.at(a).begin(), ci.at(a).end());
      for (uint32_t b : it->second) fire(av, cj.at(b));
    }
    for (uint32_t b = pr.mark_j; b < cj_size; ++b) {
      auto it = pr.bucket_i.find(L.key_j(cj.at(b)));
      if (it == pr.bucket_i.end()) continue;
      std::vector<uint8_t> bv(cj.at(b).begin(), cj.at(b).end());
      for (uint32_t a : it->second) fire(ci.at(a), bv);  // bucket_i holds old a only
    }
    // now extend i's bucket and the watermarks; tuples inserted by fire sit
    // beyond ci_size and are picked up on the next sweep
    for (uint32_t a = pr.mark_i; a < ci_size; ++a)
      pr.bucket_i[L.key_i(ci.at(a))].push_back(a);
    pr.mark_i = ci_size;
    pr.mark_j = cj_size;
    return grew;
  }

  const GroundModel& m_;
  SplitInvariant theta_;
  std::vector<std::vector<PosCommand>> own_;
  std::vector<uint32_t> own_mark_;
  std::vector<char> init_done_;
  std::vector<std::vector<PairRec>> pairs_;
};

SplitInvariant naive_fixpoint(const GroundModel& m, FixpointMode mode,
                              const FixpointSchedule& schedule,
                              const SplitInvariant* start, FixpointStats* stats) {
  SplitInvariant theta = start ? *start : empty_invariant(m);
  std::mt19937_64 rng(schedule.seed);
  uint64_t rounds = 0;
  for (;;) {
    ++rounds;
    bool changed = false;
    std::vector<uint32_t> order(m.node_count());
    for (uint32_t i = 0; i < m.node_count(); ++i) order[i] = i;
    if (schedule.kind == FixpointSchedule::Kind::RandomPermutation)
      std::shuffle(order.begin(), order.end(), rng);

    if (schedule.kind == FixpointSchedule::Kind::SynchronousRounds) {
      std::vector<ValuationSet> next;
      for (uint32_t i = 0; i < m.node_count(); ++i) next.push_back(f_step(m, theta, i, mode));
      for (uint32_t i = 0; i < m.node_count(); ++i) {
        ValuationSet& cur = theta.components[i];
        for (uint32_t k = 0; k < next[i].size(); ++k)
          if (cur.insert(next[i].at(k)).second) changed = true;
      }
    } else {
      for (uint32_t i : order) {
        ValuationSet res = f_step(m, theta, i, mode);
        ValuationSet& cur = theta.components[i];
        for (uint32_t k = 0; k < res.size(); ++k)
          if (cur.insert(res.at(k)).second) changed = true;
      }
    }
    if (!changed) break;
  }
  if (stats) stats->rounds = rounds;
  return theta;
}

}  // namespace

SplitInvariant strongest_split_invariant(const GroundModel& m, FixpointMode mode,
                                         FixpointSchedule schedule,
                                         const SplitInvariant* start,
                                         FixpointStats* stats) {
  if (mode == FixpointMode::AssumeGuarantee &&
      schedule.kind == FixpointSchedule::Kind::Worklist) {
    WorklistEngine eng(m, start);
    return eng.run(stats);
  }
  // the split-form consistency filter is non-local, so it always runs the
  // plain chaotic iteration
  return naive_fixpoint(m, mode, schedule, start, stats);
}

bool verify_inductive(const GroundModel& m, const SplitInvariant& theta,
                      FixpointMode constraints) {
  if (theta.components.size() != m.node_count()) return false;
  for (uint32_t i = 0; i < m.node_count(); ++i) {
    const auto& scope = m.scope(i);
    const ValuationSet& comp = theta.components[i];
    if (comp.width() != scope.size()) return false;

    // initiality
    std::vector<uint8_t> init(scope.size());
    for (size_t k = 0; k < scope.size(); ++k) init[k] = m.var(scope[k]).init;
    if (!comp.contains(init)) return false;

    // step
    auto own = translate_commands(m.commands(i), position_map(scope));
    std::vector<uint8_t> next;
    for (uint32_t a = 0; a < comp.size(); ++a) {
      auto tuple = comp.at(a);
      if (constraints == FixpointMode::SplitForm &&
          !consistent_with_rest(m, theta, tuple, scope, {i}))
        continue;
      for (const PosCommand& c : own) {
        if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
        next.assign(tuple.begin(), tuple.end());
        for (const GroundUpdate& u : c.updates) next[u.var] = u.value;
        if (!comp.contains(next)) return false;
      }
    }

    // non-interference
    for (uint32_t j : m.pointing_in(i)) {
      JointLayout L = make_layout(m, i, j);
      ValuationSet joined = join(m, i, comp, j, theta.components[j]);
      std::vector<uint8_t> succ, proj(scope.size());
      for (uint32_t q = 0; q < joined.size(); ++q) {
        auto tuple = joined.at(q);
        if (constraints == FixpointMode::SplitForm &&
            !consistent_with_rest(m, theta, tuple, L.scope, {i, j}))
          continue;
        for (const PosCommand& c : L.j_commands) {
          if (!c.guard.eval([&](uint32_t p) { return tuple[p]; })) continue;
          succ.assign(tuple.begin(), tuple.end());
          for (const GroundUpdate& u : c.updates) succ[u.var] = u.value;
          for (size_t k = 0; k < scope.size(); ++k) proj[k] = succ[L.from_i[k]];
          if (!comp.contains(proj)) return false;
        }
      }
    }
  }
  return true;
}

PropertyVerdict check_property(const GroundModel& m, const SplitInvariant& theta) {
  PropertyVerdict verdict;
  verdict.proved = true;
  for (auto [i, j] : m.property_pairs()) {
    const ValuationSet& ci = theta.components[i];
    const ValuationSet& cj = theta.components[j];
    auto forbid_i = translate_guard(m.forbid(i), position_map(m.scope(i)));
    auto forbid_j = translate_guard(m.forbid(j), position_map(m.scope(j)));

    JointLayout L = make_layout(m, i, j);
    // bucket j's offending states by shared key, then probe with i's
    std::unordered_map<std::string, uint32_t> first_j;
    for (uint32_t b = 0; b < cj.size(); ++b) {
      auto t = cj.at(b);
      if (!forbid_j.eval([&](uint32_t p) { return t[p]; })) continue;
      first_j.emplace(L.key_j(t), b);
    }
    if (first_j.empty()) continue;
    for (uint32_t a = 0; a < ci.size(); ++a) {
      auto t = ci.at(a);
      if (!forbid_i.eval([&](uint32_t p) { return t[p]; })) continue;
      auto it = first_j.find(L.key_i(t));
      if (it == first_j.end()) continue;
      PropertyWitness w;
      w.node_a = i;
      w.node_b = j;
      w.scope = L.scope;
      L.merge(t, cj.at(it->second), w.values);
      verdict.witnesses.push_back(std::move(w));
      verdict.proved = false;
      break;  // one witness per offending pair
    }
  }
  return verdict;
}

void dump_invariant(std::ostream& os, const GroundModel& m,
                    const SplitInvariant& theta) {
  for (uint32_t n = 0; n < m.node_count(); ++n) {
    os << "node " << m.node_name(n) << " (" << theta.components[n].size()
       << " states)\n";
    dump_states(os, m, theta.components[n], &m.scope(n));
  }
}

}  // namespace splitmc
