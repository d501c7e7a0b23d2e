#include <doctest.h>

#include <random>

#include "splitmc/generators.hpp"
#include "splitmc/refine.hpp"
#include "splitmc/semantics.hpp"
#include "splitmc/splitfix.hpp"
#include "support.hpp"

using namespace splitmc;

namespace {

// Positions of the original model's variables inside the augmented model,
// matched by name.
std::vector<uint32_t> original_positions(const GroundModel& orig,
                                         const GroundModel& aug) {
  std::vector<uint32_t> out;
  for (uint32_t v = 0; v < orig.var_count(); ++v) {
    bool found = false;
    for (uint32_t w = 0; w < aug.var_count(); ++w) {
      if (aug.var(w).name == orig.var(v).name) {
        out.push_back(w);
        found = true;
        break;
      }
    }
    REQUIRE(found);
  }
  return out;
}

ValuationSet restrict_set(const ValuationSet& s, const std::vector<uint32_t>& pos) {
  ValuationSet out(static_cast<uint32_t>(pos.size()));
  std::vector<uint8_t> t(pos.size());
  for (uint32_t i = 0; i < s.size(); ++i) {
    auto row = s.at(i);
    for (size_t k = 0; k < pos.size(); ++k) t[k] = row[pos[k]];
    out.insert(t);
  }
  return out;
}

ModelFile broken_mutex(int n) {
  ModelFile m = gen_mutex(n, false);
  // drop the test on x: mutual exclusion genuinely fails
  m.processes[0].commands[1].guard = parse_guard("l=H");
  return m;
}

}  // namespace

TEST_CASE("add_last_auxiliary reproduces the augmented mutex program") {
  ModelFile plain = gen_mutex(2, false);
  ModelFile aug = add_last_auxiliary(plain, "l", "E");
  REQUIRE(aug.auxiliaries.size() == 2);
  CHECK(aug.auxiliaries[1].name == "last");
  CHECK(aug.auxiliaries[1].domain == std::vector<std::string>{"0", "1", "2"});
  CHECK(aug.auxiliaries[1].init == "0");
  const ProcessDef& p = aug.processes[0];
  // only the command entering E records the node
  CHECK(p.commands[0].updates == std::vector<UpdateSpec>{{"l", "H"}});
  CHECK(p.commands[1].updates ==
        std::vector<UpdateSpec>{{"x", "false"}, {"l", "E"}, {"last", "self"}});
  CHECK(p.commands[2].updates == std::vector<UpdateSpec>{{"x", "true"}, {"l", "T"}});
  CHECK(aug == gen_mutex(2, true));

  CHECK_THROWS_AS(add_last_auxiliary(plain, "nosuch", "E"), Error);
  CHECK_THROWS_AS(add_last_auxiliary(plain, "l", "Z"), Error);
  CHECK_THROWS_AS(add_last_auxiliary(aug, "l", "E"), Error);  // 'last' taken
}

TEST_CASE("a trigger value never assigned leaves only a dead auxiliary") {
  ModelFile m = gen_mutex(2, false);
  // no command ever assigns l := H through this trigger's value H? it does;
  // use a model where the value genuinely never appears on the right side
  ModelFile custom = m;
  custom.processes[0].locals[0].domain.push_back("Z");
  ModelFile aug = add_last_auxiliary(custom, "l", "Z");
  CHECK(aug.processes == custom.processes);  // commands untouched
  CHECK(aug.auxiliaries.size() == custom.auxiliaries.size() + 1);
}

TEST_CASE("dining last tracks the most recent eater on random runs") {
  ModelFile m = add_last_auxiliary(gen_dining(make_ring(3)), "L", "E");
  GroundModel g(m);
  uint32_t last_var = UINT32_MAX;
  for (uint32_t v = 0; v < g.var_count(); ++v)
    if (g.var(v).name == "last") last_var = v;
  REQUIRE(last_var != UINT32_MAX);

  std::mt19937 rng(99);
  for (int run = 0; run < 20; ++run) {
    ValuationSet init = initial_states(g);
    std::vector<uint8_t> state(init.at(0).begin(), init.at(0).end());
    std::string most_recent = "0";
    for (int step = 0; step < 300; ++step) {
      std::vector<std::pair<uint32_t, const GroundCommand*>> enabled;
      for (uint32_t n = 0; n < g.node_count(); ++n)
        for (const GroundCommand& c : g.commands(n))
          if (c.guard.eval([&](uint32_t v) { return state[v]; }))
            enabled.push_back({n, &c});
      REQUIRE(!enabled.empty());
      auto [owner, cmd] = enabled[rng() % enabled.size()];
      bool enters_e = false;
      for (const GroundUpdate& u : *&cmd->updates) {
        state[u.var] = u.value;
        if (g.var(u.var).kind == VarKind::Local &&
            g.var(u.var).name == g.node_name(owner) + ".L" &&
            g.render_value(u.var, u.value) == "E")
          enters_e = true;
      }
      if (enters_e) most_recent = g.node_name(owner);
      CHECK(g.render_value(last_var, state[last_var]) == most_recent);
    }
  }
}

TEST_CASE("expose: empty step is the identity") {
  ModelFile m = gen_mutex(2, false);
  CHECK(expose(m, {"1", {}}) == m);
}

TEST_CASE("expose mirrors writes and validates") {
  ModelFile m = gen_mutex(2, false);
  ModelFile e1 = expose(m, {"1", {"l"}});
  validate_model(e1);
  REQUIRE(e1.auxiliaries.size() == 2);
  CHECK(e1.auxiliaries[1].name == "exp.1.l");
  CHECK(e1.auxiliaries[1].domain == std::vector<std::string>{"T", "H", "E"});
  // node 1 now runs its own specialized process
  CHECK(e1.assignment[0] != e1.assignment[1]);
  const ProcessDef& p = *e1.process(e1.assignment[0]);
  for (const auto& c : p.commands) {
    bool writes_l = false, writes_mirror = false;
    for (const auto& u : c.updates) {
      writes_l |= u.target == "l";
      writes_mirror |= u.target == "exp.1.l";
    }
    CHECK(writes_l == writes_mirror);
  }
  CHECK_THROWS_AS(expose(e1, {"1", {"l"}}), Error);   // already exposed
  CHECK_THROWS_AS(expose(m, {"1", {"zz"}}), Error);   // not a local
  CHECK_THROWS_AS(expose(m, {"9", {"l"}}), Error);    // unknown node
}

TEST_CASE("exposure preserves observable behavior") {
  for (ModelFile base : {gen_mutex(2, false), gen_dining(make_ring(3))}) {
    std::string var = base.processes[0].locals[0].name;
    ModelFile aug = expose(base, {base.network.nodes()[0], {var}});
    GroundModel g0(base), g1(aug);
    ReachResult r0 = reach(g0);
    ReachResult r1 = reach(g1);
    REQUIRE(r0.complete);
    REQUIRE(r1.complete);
    auto pos = original_positions(g0, g1);
    CHECK(set_equal(restrict_set(r1.states, pos), r0.states));
  }
}

TEST_CASE("exposure never weakens the invariant on original variables") {
  for (ModelFile base : {gen_mutex(3, false), gen_dining(make_ring(3))}) {
    std::string var = base.processes[0].locals[0].name;
    ModelFile aug = expose(base, {base.network.nodes()[0], {var}});
    GroundModel g0(base), g1(aug);
    SplitInvariant t0 = strongest_split_invariant(g0);
    SplitInvariant t1 = strongest_split_invariant(g1);
    for (uint32_t n = 0; n < g0.node_count(); ++n) {
      // map scope positions of the original component into the augmented one
      std::vector<uint32_t> pos;
      for (uint32_t v : g0.scope(n)) {
        const std::string& name = g0.var(v).name;
        for (uint32_t k = 0; k < g1.scope(n).size(); ++k)
          if (g1.var(g1.scope(n)[k]).name == name) pos.push_back(k);
      }
      REQUIRE(pos.size() == g0.scope(n).size());
      CHECK(t0.components[n].includes(restrict_set(t1.components[n], pos)));
    }
  }
}

TEST_CASE("full exposure makes the verdict match the oracle") {
  for (int n : {2, 3}) {
    ModelFile m = gen_mutex(n, false);
    for (const auto& node : m.network.nodes()) m = expose(m, {node, {"l"}});
    GroundModel g(m);
    SplitInvariant theta = strongest_split_invariant(g);
    bool proved = check_property(g, theta).proved;
    // the oracle agrees: exclusion really holds
    ReachResult r = reach(g);
    REQUIRE(r.complete);
    bool holds = true;
    for (uint32_t s = 0; s < r.states.size() && holds; ++s) {
      auto st = r.states.at(s);
      for (auto [i, j] : g.property_pairs())
        if (g.forbid(i).eval([&](uint32_t v) { return st[v]; }) &&
            g.forbid(j).eval([&](uint32_t v) { return st[v]; }))
          holds = false;
    }
    CHECK(holds);
    CHECK(proved == holds);
  }
}

TEST_CASE("one-sided exposure is not enough for three processes") {
  ModelFile m = expose(gen_mutex(3, false), {"1", {"l"}});
  GroundModel g(m);
  CHECK_FALSE(check_property(g, strongest_split_invariant(g)).proved);
}

TEST_CASE("refine_loop proves mutex by exposure") {
  RefineOptions opts;
  opts.strategy = RefineStrategy::ExposeForbidVar;
  RefineResult res = refine_loop(gen_mutex(3, false), opts);
  CHECK(res.verdict == Verdict::Proved);
  CHECK(!res.trace.steps.empty());
  CHECK(res.trace.steps.size() <= 3);
  CHECK_FALSE(res.trace.escalated);
  // first step exposes the lexicographically-first offender
  CHECK(res.trace.steps[0].exposure.node == "1");
  CHECK(res.trace.steps[0].exposure.vars == std::vector<std::string>{"l"});
  CHECK(res.trace.steps.back().verdict_after == Verdict::Proved);
}

TEST_CASE("refine_loop proves mutex with the last strategy") {
  RefineOptions opts;
  opts.strategy = RefineStrategy::AddLast;
  RefineResult res = refine_loop(gen_mutex(3, false), opts);
  CHECK(res.verdict == Verdict::Proved);
  REQUIRE(res.trace.steps.size() == 1);
  CHECK(res.trace.steps[0].kind == RefinementStep::Kind::AddLast);
  CHECK(res.trace.steps[0].trigger == std::pair<std::string, std::string>{"l", "E"});
  bool has_last = false;
  for (const auto& a : res.model.auxiliaries) has_last |= a.name == "last";
  CHECK(has_last);
}

TEST_CASE("dining needs no refinement at all") {
  RefineResult res = refine_loop(gen_dining(make_ring(4)), {});
  CHECK(res.verdict == Verdict::Proved);
  CHECK(res.trace.steps.empty());
}

TEST_CASE("budget exhaustion reports unknown honestly") {
  RefineOptions opts;
  opts.budget = 0;
  RefineResult res = refine_loop(gen_mutex(3, false), opts);
  CHECK(res.verdict == Verdict::Unknown);
  CHECK(res.trace.steps.empty());
  CHECK_FALSE(res.trace.escalated);
}

TEST_CASE("a genuinely broken protocol escalates to a real counterexample") {
  for (RefineStrategy strat :
       {RefineStrategy::ExposeForbidVar, RefineStrategy::AddLast}) {
    RefineOptions opts;
    opts.strategy = strat;
    RefineResult res = refine_loop(broken_mutex(3), opts);
    CHECK(res.verdict == Verdict::Violated);
    CHECK(res.trace.escalated);
    REQUIRE(res.counterexample.has_value());
    const CounterexamplePath& cex = *res.counterexample;
    REQUIRE(cex.states.size() >= 2);
    CHECK(cex.labels.size() == cex.states.size() - 1);

    // replay: every step is a real transition of the checked model
    GroundModel g(res.model);
    ValuationSet init = initial_states(g);
    CHECK(std::equal(cex.states[0].begin(), cex.states[0].end(),
                     init.at(0).begin()));
    for (size_t k = 0; k + 1 < cex.states.size(); ++k) {
      bool matched = false;
      for (uint32_t n = 0; n < g.node_count() && !matched; ++n) {
        for (const GroundCommand& c : g.commands(n)) {
          if (!c.guard.eval([&](uint32_t v) { return cex.states[k][v]; })) continue;
          std::vector<uint8_t> succ = cex.states[k];
          for (const GroundUpdate& u : c.updates) succ[u.var] = u.value;
          if (succ == cex.states[k + 1]) {
            matched = true;
            break;
          }
        }
      }
      CHECK(matched);
    }
    // the final state violates the property at the reported pair
    const auto& final = cex.states.back();
    CHECK(g.forbid(cex.node_a).eval([&](uint32_t v) { return final[v]; }));
    CHECK(g.forbid(cex.node_b).eval([&](uint32_t v) { return final[v]; }));
  }
}

TEST_CASE("refinement trace records per-step sizes") {
  RefineOptions opts;
  opts.strategy = RefineStrategy::AddLast;
  RefineResult res = refine_loop(gen_mutex(2, false), opts);
  REQUIRE(res.trace.steps.size() == 1);
  CHECK(res.trace.steps[0].theta_sizes_after == std::vector<size_t>{9, 9});
}
