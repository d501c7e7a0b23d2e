#include <doctest.h>

#include <set>
#include <sstream>

#include "splitmc/generators.hpp"
#include "splitmc/splitfix.hpp"
#include "splitmc/symmetry.hpp"
#include "support.hpp"

using namespace splitmc;

namespace {

// Two-node line whose endpoints run different (but isomorphic-looking)
// processes; only the identities survive.
ModelFile asymmetric_pair() {
  NetworkGraph g = make_line(2);
  ModelFile m = gen_dining(g);
  ProcessDef other = m.processes[0];
  other.name = "stubborn";
  other.commands.erase(other.commands.begin());  // never leaves T
  m.processes.push_back(other);
  std::sort(m.processes.begin(), m.processes.end(),
            [](const ProcessDef& a, const ProcessDef& b) { return a.name < b.name; });
  m.assignment[1] = "stubborn";
  return m;
}

int count_pairs(const std::vector<LocalSymmetry>& g, uint32_t m, uint32_t n) {
  int c = 0;
  for (const auto& s : g) c += (s.m == m && s.n == n);
  return c;
}

}  // namespace

TEST_CASE("ring groupoid: two symmetries per ordered pair") {
  GroundModel g(gen_dining(make_ring(3)));
  auto gr = groupoid(g);
  CHECK(gr.size() == 18);  // 9 ordered pairs, orientation keeping + reversing
  CHECK(gr.size() >= 9);   // at least one per ordered pair
  for (uint32_t m = 0; m < 3; ++m)
    for (uint32_t n = 0; n < 3; ++n) CHECK(count_pairs(gr, m, n) == 2);
  CHECK(closed_under_groupoid_laws(g, gr));
  // identity triples present
  for (uint32_t m = 0; m < 3; ++m) {
    bool found = false;
    for (const auto& s : gr)
      found |= s.m == m && s.n == m && s.edge_map == g.nbhd_edges(m);
    CHECK(found);
  }
}

TEST_CASE("degree mismatch admits no symmetry") {
  GroundModel g(gen_dining(make_star(3)));
  auto gr = groupoid(g);
  uint32_t hub = *g.source().network.node_index("hub");
  for (const auto& s : gr) {
    CHECK((s.m == hub) == (s.n == hub));
  }
}

TEST_CASE("groupoid respects process assignment") {
  GroundModel g(asymmetric_pair());
  auto gr = groupoid(g);
  REQUIRE(gr.size() == 2);  // identities only
  for (const auto& s : gr) CHECK(s.m == s.n);
  BalanceRelation b = largest_balance(g, gr);
  CHECK(b.triples.size() == 2);
  OrbitPartition p = orbits(g, b);
  CHECK(p.classes.size() == 2);
}

TEST_CASE("largest balance on rings keeps everything and one orbit") {
  for (int n : {3, 4, 5}) {
    GroundModel g(gen_dining(make_ring(n)));
    auto gr = groupoid(g);
    BalanceRelation b = largest_balance(g, gr);
    CHECK(b.triples.size() == gr.size());
    CHECK(balanced(g, b));
    CHECK(closed_under_groupoid_laws(g, b.triples));
    OrbitPartition p = orbits(g, b);
    CHECK(p.classes.size() == 1);
    CHECK(p.classes[0].size() == static_cast<size_t>(n));
  }
}

TEST_CASE("star: hub and leaves are never balanced, leaves are") {
  GroundModel g(gen_dining(make_star(3)));
  BalanceRelation b = largest_balance(g, groupoid(g));
  CHECK(balanced(g, b));
  uint32_t hub = *g.source().network.node_index("hub");
  bool cross = false, leaf_pair = false;
  for (const auto& s : b.triples) {
    if ((s.m == hub) != (s.n == hub)) cross = true;
    if (s.m != s.n && s.m != hub && s.n != hub) leaf_pair = true;
  }
  CHECK_FALSE(cross);
  CHECK(leaf_pair);
  OrbitPartition p = orbits(g, b);
  CHECK(p.classes.size() == 2);  // {hub}, {leaves}
}

TEST_CASE("mutex star family collapses to one orbit") {
  GroundModel g(gen_mutex(3, true));
  BalanceRelation b = largest_balance(g, groupoid(g));
  CHECK(b.triples.size() == 9);  // empty neighborhoods, all pairs compatible
  OrbitPartition p = orbits(g, b);
  CHECK(p.classes.size() == 1);
}

TEST_CASE("rotation group of the 4-ring induces a balance relation") {
  GroundModel g(gen_dining(make_ring(4)));
  std::vector<Automorphism> rotations;
  for (uint32_t k = 0; k < 4; ++k) {
    Automorphism a;
    for (uint32_t i = 0; i < 4; ++i) a.node_map.push_back((i + k) % 4);
    for (uint32_t e = 0; e < 4; ++e) a.edge_map.push_back((e + k) % 4);
    rotations.push_back(a);
  }
  BalanceRelation b = induced_balance_from_group(g, rotations);
  CHECK(b.triples.size() == 16);
  CHECK(balanced(g, b));

  // identity-only group gives identity triples
  BalanceRelation id = induced_balance_from_group(g, {rotations[0]});
  CHECK(id.triples.size() == 4);
  for (const auto& s : id.triples) CHECK(s.m == s.n);

  // adding the reflections still satisfies the balance condition
  std::vector<Automorphism> dihedral = rotations;
  Automorphism refl;
  for (uint32_t i = 0; i < 4; ++i) refl.node_map.push_back((4 - i) % 4);
  for (uint32_t e = 0; e < 4; ++e) refl.edge_map.push_back((3 - e) % 4);
  dihedral.push_back(refl);
  BalanceRelation d = induced_balance_from_group(g, dihedral);
  CHECK(d.triples.size() == 20);
  CHECK(balanced(g, d));

  // a non-automorphism is rejected
  Automorphism bogus = rotations[1];
  std::swap(bogus.edge_map[0], bogus.edge_map[1]);
  CHECK_THROWS_AS(induced_balance_from_group(g, {bogus}), Error);
}

TEST_CASE("apply_symmetry: identity and empty sets") {
  GroundModel g(gen_dining(make_ring(3)));
  SplitInvariant theta = strongest_split_invariant(g);
  ValuationSet mapped = apply_symmetry(g, identity_symmetry(g, 0), theta.components[0]);
  CHECK(set_equal(mapped, theta.components[0]));
  ValuationSet empty(static_cast<uint32_t>(g.scope(0).size()));
  CHECK(apply_symmetry(g, identity_symmetry(g, 0), empty).size() == 0);
}

TEST_CASE("balanced components are isomorphic images of each other") {
  // the heart of the reduction: theta_n equals the beta-image of theta_m
  for (ModelFile m : {gen_dining(make_ring(3)), gen_dining(make_ring(5)),
                      gen_dining(make_torus(2, 2)), gen_mutex(3, true)}) {
    GroundModel g(m);
    SplitInvariant theta = strongest_split_invariant(g);
    BalanceRelation b = largest_balance(g, groupoid(g));
    for (const auto& s : b.triples) {
      ValuationSet image = apply_symmetry(g, s, theta.components[s.m]);
      CHECK(set_equal(image, theta.components[s.n]));
    }
  }
}

TEST_CASE("reduced fixpoint equals the full fixpoint") {
  for (ModelFile m :
       {gen_dining(make_ring(3)), gen_dining(make_ring(6)),
        gen_dining(make_star(3)), gen_dining(make_torus(2, 2)),
        gen_mutex(3, true), test::dining_line4_isolated()}) {
    GroundModel g(m);
    BalanceRelation b = largest_balance(g, groupoid(g));
    SplitInvariant reduced = reduced_fixpoint(g, b);
    SplitInvariant full = strongest_split_invariant(g);
    CHECK(invariant_equal(reduced, full));
  }
}

TEST_CASE("trivial balance degenerates to the plain engine") {
  GroundModel g(gen_dining(make_ring(3)));
  BalanceRelation identities;
  for (uint32_t n = 0; n < 3; ++n)
    identities.triples.push_back(identity_symmetry(g, n));
  CHECK(balanced(g, identities));
  SplitInvariant reduced = reduced_fixpoint(g, identities);
  CHECK(invariant_equal(reduced, strongest_split_invariant(g)));
  OrbitPartition p = orbits(g, identities);
  CHECK(p.classes.size() == 3);
}

TEST_CASE("orbit relation is an equivalence") {
  GroundModel g(gen_dining(make_torus(2, 3)));
  BalanceRelation b = largest_balance(g, groupoid(g));
  OrbitPartition p = orbits(g, b);
  std::set<uint32_t> covered;
  for (const auto& cls : p.classes) {
    REQUIRE(!cls.empty());
    for (uint32_t v : cls) CHECK(covered.insert(v).second);
    // witnesses map the representative onto each member
    for (uint32_t v : cls) {
      CHECK(p.witness[v].m == p.representative[v]);
      CHECK(p.witness[v].n == v);
    }
  }
  CHECK(covered.size() == g.node_count());
}

TEST_CASE("composition and inverse behave like a groupoid") {
  GroundModel g(gen_dining(make_ring(4)));
  auto gr = groupoid(g);
  for (const auto& s : gr) {
    LocalSymmetry inv = inverse(g, s);
    LocalSymmetry round = compose(g, inv, s);
    CHECK(round.m == s.m);
    CHECK(round.n == s.m);
    CHECK(round.edge_map == g.nbhd_edges(s.m));
  }
}

TEST_CASE("orbit DOT colors nodes") {
  GroundModel g(gen_dining(make_star(3)));
  BalanceRelation b = largest_balance(g, groupoid(g));
  OrbitPartition p = orbits(g, b);
  std::ostringstream os;
  orbit_dot(os, g, p);
  CHECK(os.str().find("graph network") != std::string::npos);
  CHECK(os.str().find("\"hub\"") != std::string::npos);
  CHECK(os.str().find("fillcolor") != std::string::npos);
}
