#include <doctest.h>

#include <random>
#include <sstream>

#include "splitmc/generators.hpp"
#include "splitmc/semantics.hpp"
#include "splitmc/splitfix.hpp"
#include "support.hpp"

using namespace splitmc;
using test::Assignment;
using test::local_state;

namespace {

ValuationSet set_of(const GroundModel& g, uint32_t node,
                    std::initializer_list<Assignment> states) {
  ValuationSet out(static_cast<uint32_t>(g.scope(node).size()));
  for (const auto& a : states) out.insert(local_state(g, node, a));
  return out;
}

bool sound_against_oracle(const GroundModel& g, const SplitInvariant& theta,
                          uint64_t cap = 1'000'000) {
  ReachResult r = reach(g, cap);
  if (!r.complete) return true;  // nothing to check against
  for (uint32_t n = 0; n < g.node_count(); ++n)
    if (!theta.components[n].includes(project(g, r.states, n))) return false;
  return true;
}

}  // namespace

TEST_CASE("join: disjoint scopes give the product") {
  GroundModel g(gen_dining(make_line(3)));  // n0 and n2 share nothing
  ValuationSet a = set_of(g, 0, {{{"L", "T"}, {"e0_1", "bot"}},
                                 {{"L", "H"}, {"e0_1", "n0"}}});
  ValuationSet b = set_of(g, 2, {{{"L", "T"}, {"e1_2", "bot"}},
                                 {{"L", "E"}, {"e1_2", "n2"}},
                                 {{"L", "R"}, {"e1_2", "n2"}}});
  CHECK(join(g, 0, a, 2, b).size() == 6);
  CHECK_THROWS_AS(join(g, 0, a, 0, a), Error);
}

TEST_CASE("join: disagreement on a shared fork is empty") {
  GroundModel g(gen_dining(make_ring(3)));
  ValuationSet a = set_of(g, 0, {{{"L", "H"}, {"f0_1", "n0"}, {"f2_0", "bot"}}});
  ValuationSet b = set_of(g, 1, {{{"L", "H"}, {"f0_1", "n1"}, {"f1_2", "bot"}}});
  CHECK(join(g, 0, a, 1, b).size() == 0);
  // agreement gives exactly the merged state
  ValuationSet b2 = set_of(g, 1, {{{"L", "H"}, {"f0_1", "n0"}, {"f1_2", "bot"}}});
  CHECK(join(g, 0, a, 1, b2).size() == 1);
}

TEST_CASE("join: the last-variable exclusion argument") {
  // both nodes claim to be the last entrant: no consistent joint state
  GroundModel g(gen_mutex(2, true));
  ValuationSet a = set_of(g, 0, {{{"l", "E"}, {"x", "false"}, {"last", "1"}}});
  ValuationSet b = set_of(g, 1, {{{"l", "E"}, {"x", "false"}, {"last", "2"}}});
  CHECK(join(g, 0, a, 1, b).size() == 0);
}

TEST_CASE("f_step from the empty vector is the initial projection") {
  GroundModel g(gen_dining(make_ring(3)));
  SplitInvariant empty = empty_invariant(g);
  for (uint32_t i = 0; i < 3; ++i) {
    ValuationSet r = f_step(g, empty, i);
    REQUIRE(r.size() == 1);
    CHECK(r.contains(local_state(
        g, i, {{"L", "T"},
               {g.source().network.edges()[i], "bot"},
               {g.source().network.edges()[(i + 2) % 3], "bot"}})));
  }
}

TEST_CASE("dining ring fixpoint: 23 states per component, eating owns forks") {
  GroundModel g(gen_dining(make_ring(3)));
  SplitInvariant theta = strongest_split_invariant(g);
  for (uint32_t n = 0; n < 3; ++n) {
    CHECK(theta.components[n].size() == 23);
    // no eating state without both adjacent forks
    const auto& comp = theta.components[n];
    uint8_t eating = g.value_index(g.scope(n)[0], "E");
    for (uint32_t i = 0; i < comp.size(); ++i) {
      auto s = comp.at(i);
      if (s[0] != eating) continue;
      CHECK(g.render_value(g.scope(n)[1], s[1]) == g.node_name(n));
      CHECK(g.render_value(g.scope(n)[2], s[2]) == g.node_name(n));
    }
  }
  CHECK(check_property(g, theta).proved);
  CHECK(sound_against_oracle(g, theta));
}

TEST_CASE("mutex without auxiliary state is the full local space") {
  for (int n : {2, 3}) {
    GroundModel g(gen_mutex(n, false));
    SplitInvariant theta = strongest_split_invariant(g);
    for (uint32_t i = 0; i < static_cast<uint32_t>(n); ++i)
      CHECK(theta.components[i].size() == 6);  // l in {T,H,E} x x in {t,f}
    PropertyVerdict pv = check_property(g, theta);
    CHECK_FALSE(pv.proved);
    REQUIRE(!pv.witnesses.empty());
    // the witness has both nodes eating and agrees on x
    const PropertyWitness& w = pv.witnesses.front();
    auto value_at = [&](uint32_t node, const char* local) {
      for (size_t k = 0; k < w.scope.size(); ++k) {
        if (g.var(w.scope[k]).name == g.node_name(node) + "." + local)
          return g.render_value(w.scope[k], w.values[k]);
      }
      return std::string();
    };
    CHECK(value_at(w.node_a, "l") == "E");
    CHECK(value_at(w.node_b, "l") == "E");
  }
}

TEST_CASE("mutex with last proves exclusion") {
  GroundModel g2(gen_mutex(2, true));
  SplitInvariant t2 = strongest_split_invariant(g2);
  CHECK(t2.components[0].size() == 9);
  CHECK(t2.components[1].size() == 9);
  CHECK(check_property(g2, t2).proved);

  GroundModel g3(gen_mutex(3, true));
  SplitInvariant t3 = strongest_split_invariant(g3);
  for (int i = 0; i < 3; ++i) CHECK(t3.components[i].size() == 13);
  CHECK(check_property(g3, t3).proved);

  // each component pins eating to "x is taken and I took it last"
  for (uint32_t i = 0; i < 3; ++i) {
    const auto& comp = t3.components[i];
    const auto& scope = g3.scope(i);
    uint8_t eating = g3.value_index(scope[0], "E");
    int eating_states = 0;
    for (uint32_t k = 0; k < comp.size(); ++k) {
      auto s = comp.at(k);
      if (s[0] != eating) continue;
      ++eating_states;
      CHECK(g3.render_value(scope[1], s[1]) == "false");
      CHECK(g3.render_value(scope[2], s[2]) == g3.node_name(i));
    }
    CHECK(eating_states == 1);
  }
  CHECK(sound_against_oracle(g3, t3));
}

TEST_CASE("soundness of the over-approximation across the model suite") {
  std::vector<ModelFile> models;
  for (int n : {2, 3, 4, 5}) models.push_back(gen_dining(make_ring(n)));
  models.push_back(gen_dining(make_star(3)));
  models.push_back(gen_dining(make_line(4)));
  models.push_back(test::dining_line4_isolated());
  for (int n : {2, 3}) {
    models.push_back(gen_mutex(n, false));
    models.push_back(gen_mutex(n, true));
  }
  for (const ModelFile& m : models) {
    GroundModel g(m);
    CHECK(sound_against_oracle(g, strongest_split_invariant(g)));
    CHECK(sound_against_oracle(
        g, strongest_split_invariant(g, FixpointMode::SplitForm)));
  }
}

TEST_CASE("verify_inductive accepts fixpoints and the full space") {
  GroundModel g(gen_dining(make_ring(3)));
  SplitInvariant theta = strongest_split_invariant(g);
  CHECK(verify_inductive(g, theta));
  CHECK(verify_inductive(g, full_invariant(g)));

  // dropping any state from the least fixpoint must break a constraint
  for (uint32_t drop : {0u, 5u, 22u}) {
    SplitInvariant weak = empty_invariant(g);
    for (uint32_t n = 0; n < 3; ++n) {
      for (uint32_t i = 0; i < theta.components[n].size(); ++i) {
        if (n == 0 && i == drop) continue;
        weak.components[n].insert(theta.components[n].at(i));
      }
    }
    CHECK_FALSE(verify_inductive(g, weak));
  }
}

TEST_CASE("leastness: any inductive weakening contains the fixpoint") {
  GroundModel g(gen_dining(make_ring(3)));
  SplitInvariant theta = strongest_split_invariant(g);
  std::mt19937 rng(23);
  for (int round = 0; round < 8; ++round) {
    SplitInvariant seed = theta;
    for (uint32_t n = 0; n < g.node_count(); ++n) {
      const auto& scope = g.scope(n);
      for (int extra = 0; extra < 3; ++extra) {
        std::vector<uint8_t> s(scope.size());
        for (size_t k = 0; k < scope.size(); ++k)
          s[k] = static_cast<uint8_t>(rng() % g.var(scope[k]).domain.size());
        seed.components[n].insert(s);
      }
    }
    SplitInvariant closed =
        strongest_split_invariant(g, FixpointMode::AssumeGuarantee, {}, &seed);
    CHECK(verify_inductive(g, closed));
    CHECK(invariant_includes(closed, theta));
  }
}

TEST_CASE("every schedule reaches the same fixpoint") {
  for (ModelFile m : {gen_dining(make_ring(4)), gen_dining(make_star(3)),
                      gen_mutex(3, true)}) {
    GroundModel g(m);
    SplitInvariant worklist = strongest_split_invariant(g);
    FixpointSchedule sync{FixpointSchedule::Kind::SynchronousRounds, 0};
    CHECK(invariant_equal(
        worklist, strongest_split_invariant(g, FixpointMode::AssumeGuarantee, sync)));
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
      FixpointSchedule rnd{FixpointSchedule::Kind::RandomPermutation, seed};
      CHECK(invariant_equal(
          worklist, strongest_split_invariant(g, FixpointMode::AssumeGuarantee, rnd)));
    }
  }
}

TEST_CASE("assume-guarantee and split-form coincide on shared-state models") {
  for (int n = 2; n <= 5; ++n) {
    for (bool with_last : {false, true}) {
      GroundModel g(gen_mutex(n, with_last));
      SplitInvariant ag = strongest_split_invariant(g);
      SplitInvariant sf = strongest_split_invariant(g, FixpointMode::SplitForm);
      CHECK(invariant_equal(ag, sf));
    }
  }
}

TEST_CASE("assume-guarantee fixpoints satisfy the split-form constraints") {
  for (ModelFile m : {gen_dining(make_ring(4)), gen_dining(make_line(4)),
                      gen_dining(make_torus(2, 2))}) {
    GroundModel g(m);
    SplitInvariant ag = strongest_split_invariant(g);
    CHECK(verify_inductive(g, ag, FixpointMode::SplitForm));
  }
}

TEST_CASE("single-node property holds vacuously") {
  GroundModel g(gen_mutex(1, false));
  SplitInvariant theta = strongest_split_invariant(g);
  CHECK(g.property_pairs().empty());
  CHECK(check_property(g, theta).proved);
}

TEST_CASE("invariant dump is deterministic") {
  GroundModel g(gen_mutex(2, false));
  SplitInvariant theta = strongest_split_invariant(g);
  std::ostringstream a, b;
  dump_invariant(a, g, theta);
  dump_invariant(b, g, theta);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("node 1 (6 states)") != std::string::npos);
}
