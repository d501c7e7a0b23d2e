#include <doctest.h>

#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"
#include "splitmc/ground.hpp"
#include "splitmc/model.hpp"
#include "support.hpp"

using namespace splitmc;

TEST_CASE("dining generator shape") {
  ModelFile m = gen_dining(make_ring(3));
  validate_model(m);
  REQUIRE(m.edge_specs.size() == 3);
  CHECK(m.edge_specs[0].domain == std::vector<std::string>{"n0", "n1", "bot"});
  CHECK(m.edge_specs[0].init == "bot");
  REQUIRE(m.processes.size() == 1);
  CHECK(m.processes[0].locals[0].domain ==
        std::vector<std::string>{"T", "H", "E", "R"});
  CHECK(m.property.scope == PropertyScope::AdjacentPairs);
  CHECK(print_guard(m.property.forbid) == "L=E");
}

TEST_CASE("dining ring node expands to ten ground commands") {
  ModelFile m = gen_dining(make_ring(3));
  // per 2-edge node: hungry, 2x acquire, 2x putdown, eat, done, 2x release,
  // think
  for (const auto& node : m.network.nodes()) {
    auto cmds = expand(m, node);
    CHECK(cmds.size() == 10);
  }
  GroundModel gm(m);
  // eat needs both forks; grounded as a 3-literal conjunction
  const auto& cmds = gm.commands(0);
  int eat = -1;
  for (size_t i = 0; i < cmds.size(); ++i)
    if (cmds[i].label == "eat") eat = static_cast<int>(i);
  REQUIRE(eat >= 0);
  CHECK(cmds[eat].guard.conjunctive);
  CHECK(cmds[eat].guard.literals.size() == 3);
}

TEST_CASE("dining on an isolated node") {
  ModelFile m = gen_dining(make_line(1));
  auto cmds = expand(m, "n0");
  // per-edge templates expand to nothing; the universal eat guard is
  // vacuously true
  REQUIRE(cmds.size() == 4);
  CHECK(cmds[1].label == "eat");
  CHECK(cmds[1].guard.conjunctive);
  CHECK(cmds[1].guard.literals.size() == 1);  // only L=H remains
}

TEST_CASE("mutex generator") {
  ModelFile m = gen_mutex(2, false);
  validate_model(m);
  CHECK(m.network.nodes() == std::vector<std::string>{"1", "2"});
  CHECK(m.network.edges().empty());
  REQUIRE(m.auxiliaries.size() == 1);
  CHECK(m.auxiliaries[0].name == "x");
  CHECK(m.auxiliaries[0].init == "true");
  CHECK(m.property.scope == PropertyScope::AllPairs);

  ModelFile ml = gen_mutex(2, true);
  validate_model(ml);
  REQUIRE(ml.auxiliaries.size() == 2);
  CHECK(ml.auxiliaries[1].name == "last");
  CHECK(ml.auxiliaries[1].domain == std::vector<std::string>{"0", "1", "2"});
  CHECK(ml.auxiliaries[1].init == "0");
  // the enter command records the entering node
  const ProcessDef& p = ml.processes[0];
  REQUIRE(p.commands[1].label == "enter");
  CHECK(p.commands[1].updates.back() == UpdateSpec{"last", "self"});

  // template without binder expands to itself
  CHECK(expand(ml, "1").size() == 3);
  CHECK_THROWS_AS(gen_mutex(0, false), Error);
}

TEST_CASE("model round-trips through canonical text") {
  for (ModelFile m : {gen_dining(make_ring(3)), gen_dining(make_star(3)),
                      gen_mutex(3, false), gen_mutex(2, true),
                      gen_dining(make_torus(2, 2)), test::dining_line4_isolated()}) {
    std::string text = print_model(m);
    ModelFile back = parse_model(text);
    CHECK(back == m);
    CHECK(print_model(back) == text);
  }
}

TEST_CASE("generator output is reproducible byte for byte") {
  CHECK(print_model(gen_dining(make_ring(4))) ==
        print_model(gen_dining(make_ring(4))));
  CHECK(print_model(gen_mutex(3, true)) == print_model(gen_mutex(3, true)));
}

TEST_CASE("parse diagnostics") {
  CHECK_THROWS_AS(parse_model("{not json"), Error);
  CHECK_THROWS_AS(parse_model("{}"), Error);  // missing sections

  // value outside the local's domain is a domain mismatch
  ModelFile m = gen_dining(make_ring(3));
  m.processes[0].commands[0].guard = parse_guard("L=X");
  CHECK_THROWS_WITH_AS(parse_model(print_model(m)),
                       doctest::Contains("not in domain"), Error);

  // unknown identifier in a guard
  m = gen_dining(make_ring(3));
  m.processes[0].commands[0].guard = parse_guard("nosuch=T");
  CHECK_THROWS_WITH_AS(parse_model(print_model(m)),
                       doctest::Contains("unknown identifier"), Error);

  // duplicate local definition
  m = gen_dining(make_ring(3));
  m.processes[0].locals.push_back(m.processes[0].locals[0]);
  CHECK_THROWS_AS(validate_model(m), Error);

  // auxiliary colliding with an edge name
  m = gen_dining(make_ring(3));
  m.auxiliaries.push_back({"f0_1", {"a"}, "a"});
  CHECK_THROWS_AS(validate_model(m), Error);
}

TEST_CASE("guard syntax errors point into the guard string") {
  ModelFile m = gen_dining(make_ring(3));
  std::string text = print_model(m);
  auto at = text.find("L=T");
  REQUIRE(at != std::string::npos);
  text.replace(at, 3, "L=&");
  try {
    parse_model(text);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
    CHECK(std::string(e.what()).find("commands") != std::string::npos);
  }
}

TEST_CASE("read and write discipline is enforced") {
  // n0 may only read e; the process tries to write it
  NetworkGraph g({"n0"}, {"e"}, {{"e", "n0"}});
  ModelFile m;
  m.network = g;
  m.edge_specs.push_back({"e", {"a", "b"}, "a"});
  ProcessDef p;
  p.name = "w";
  p.locals.push_back({"v", {"a"}, "a"});
  p.commands.push_back({"bad", std::nullopt, parse_guard("e=a"), {{"e", "b"}}});
  m.processes.push_back(p);
  m.assignment = {"w"};
  m.property.scope = PropertyScope::AllPairs;
  m.property.forbid = parse_guard("v=a");
  CHECK_THROWS_WITH_AS(validate_model(m), doctest::Contains("cannot write"), Error);

  // write-only edge cannot be read
  NetworkGraph g2({"n0"}, {"e"}, {{"n0", "e"}});
  m.network = g2;
  m.processes[0].commands[0] = {"bad2", std::nullopt, parse_guard("e=a"), {}};
  CHECK_THROWS_WITH_AS(validate_model(m), doctest::Contains("cannot read"), Error);
}

TEST_CASE("explicit edge outside the neighborhood is rejected") {
  ModelFile m = gen_dining(make_line(3));
  // command naming a concrete edge: fine for its owners, an error elsewhere
  m.processes[0].commands.push_back(
      {"grab0", std::nullopt, parse_guard("e0_1=bot"), {{"e0_1", "self"}}});
  CHECK_THROWS_WITH_AS(validate_model(m), doctest::Contains("unknown identifier"),
                       Error);
}

TEST_CASE("auxiliaries connect every pair") {
  GroundModel gm(gen_mutex(3, false));
  for (uint32_t i = 0; i < 3; ++i)
    for (uint32_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(gm.model_points_to(i, j));
      CHECK(gm.model_adjacent(i, j));
    }
  CHECK(gm.property_pairs().size() == 3);
}

TEST_CASE("ground scope order is locals, neighborhood edges, auxiliaries") {
  GroundModel gm(gen_mutex(2, true));
  const auto& scope = gm.scope(0);
  REQUIRE(scope.size() == 3);
  CHECK(gm.var(scope[0]).kind == VarKind::Local);
  CHECK(gm.var(scope[1]).name == "x");
  CHECK(gm.var(scope[2]).name == "last");
}
