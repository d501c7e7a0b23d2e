#include <doctest.h>

#include "splitmc/error.hpp"
#include "splitmc/network.hpp"

using namespace splitmc;

TEST_CASE("ring structure and neighborhoods") {
  NetworkGraph g = make_ring(3);
  CHECK(g.nodes().size() == 3);
  CHECK(g.edges().size() == 3);
  CHECK(g.connections().size() == 12);

  Neighborhood nb = neighborhood(g, "n1");
  CHECK(nb.read_edges == std::vector<std::string>{"f0_1", "f1_2"});
  CHECK(nb.write_edges == std::vector<std::string>{"f0_1", "f1_2"});

  CHECK_THROWS_AS(neighborhood(g, "nope"), Error);
}

TEST_CASE("ring of size 2 keeps two distinct edges") {
  NetworkGraph g = make_ring(2);
  CHECK(g.nodes().size() == 2);
  CHECK(g.edges().size() == 2);
  CHECK(g.connections().size() == 8);
  Neighborhood nb = neighborhood(g, "n0");
  CHECK(nb.read_edges.size() == 2);
  CHECK_THROWS_AS(make_ring(1), Error);
}

TEST_CASE("star and line shapes") {
  NetworkGraph star = make_star(4);
  CHECK(star.nodes().size() == 5);
  CHECK(star.edges().size() == 4);
  CHECK(neighborhood(star, "leaf2").read_edges == std::vector<std::string>{"s2"});
  CHECK(neighborhood(star, "hub").read_edges.size() == 4);

  NetworkGraph line1 = make_line(1);
  CHECK(neighborhood(line1, "n0").read_edges.empty());
  CHECK(neighborhood(line1, "n0").write_edges.empty());
}

TEST_CASE("torus 2x2 wraparound doubles edges") {
  NetworkGraph g = make_torus(2, 2);
  CHECK(g.nodes().size() == 4);
  CHECK(g.edges().size() == 8);
  for (const auto& n : g.nodes())
    CHECK(neighborhood(g, n).read_edges.size() == 4);
  CHECK_THROWS_AS(make_torus(1, 3), Error);
}

TEST_CASE("points_to on rings") {
  NetworkGraph g4 = make_ring(4);
  CHECK(points_to(g4, "n0", "n1"));
  CHECK(points_to(g4, "n1", "n0"));
  CHECK_FALSE(points_to(g4, "n0", "n2"));  // non-adjacent pair
  CHECK(points_to(g4, "n0", "n0"));        // writes an edge it also reads
  CHECK_THROWS_AS(points_to(g4, "n0", "zz"), Error);
}

TEST_CASE("points_to follows connection direction") {
  // n0 only reads e, n1 only writes it
  NetworkGraph g({"n0", "n1"}, {"e"}, {{"e", "n0"}, {"n1", "e"}});
  CHECK(points_to(g, "n1", "n0"));
  CHECK_FALSE(points_to(g, "n0", "n0"));
  CHECK_FALSE(points_to(g, "n0", "n1"));
}

TEST_CASE("adjacency") {
  NetworkGraph ring = make_ring(4);
  CHECK(adjacent(ring, "n0", "n1"));
  CHECK_FALSE(adjacent(ring, "n0", "n2"));

  // star in the sense of one shared central variable: every process node is
  // attached to the same edge, so any two of them are adjacent
  NetworkGraph shared({"p1", "p2", "p3"}, {"hub"},
                      {{"p1", "hub"}, {"hub", "p1"}, {"p2", "hub"},
                       {"hub", "p2"}, {"p3", "hub"}, {"hub", "p3"}});
  CHECK(adjacent(shared, "p1", "p2"));
  CHECK(points_to(shared, "p1", "p2"));

  // disjoint components
  NetworkGraph two({"a", "b"}, {}, {});
  CHECK_FALSE(adjacent(two, "a", "b"));
}

TEST_CASE("bidirectional generators make points_to and adjacency coincide") {
  for (const NetworkGraph& g :
       {make_ring(5), make_star(3), make_torus(2, 3), make_line(4),
        make_degree_graph({1, 2, 2, 1, 0})}) {
    for (const auto& a : g.nodes())
      for (const auto& b : g.nodes())
        CHECK(points_to(g, a, b) == adjacent(g, a, b));
    for (const auto& a : g.nodes())
      for (const auto& b : g.nodes())
        CHECK(adjacent(g, a, b) == adjacent(g, b, a));
  }
}

TEST_CASE("degree-sequence generator") {
  NetworkGraph g = make_degree_graph({1, 2, 2, 1, 0});
  CHECK(g.nodes().size() == 5);
  CHECK(g.edges().size() == 3);
  CHECK(neighborhood(g, "n4").read_edges.empty());
  CHECK(neighborhood(g, "n1").read_edges.size() == 2);
  CHECK_THROWS_AS(make_degree_graph({3, 1}), Error);
  CHECK_THROWS_AS(make_degree_graph({1, 1, 1}), Error);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(NetworkGraph({"a", "a"}, {}, {}), Error);
  CHECK_THROWS_AS(NetworkGraph({"a"}, {"e"}, {{"a", "zz"}}), Error);
  CHECK_THROWS_AS(NetworkGraph({"a"}, {"e"}, {{"a", "e"}, {"a", "e"}}), Error);
  // node-node connections are malformed
  CHECK_THROWS_AS(NetworkGraph({"a", "b"}, {"e"}, {{"a", "b"}}), Error);
}
