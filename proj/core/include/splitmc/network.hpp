#ifndef SPLITMC_NETWORK_HPP
#define SPLITMC_NETWORK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace splitmc {

// One directed attachment between a node and an edge. A (node,edge)
// connection lets the node write the edge variable; (edge,node) lets it
// read. The generators always emit both directions.
struct Connection {
  std::string from;
  std::string to;
  bool operator==(const Connection&) const = default;
};

struct Neighborhood {
  std::string node;
  std::vector<std::string> read_edges;   // edge declaration order
  std::vector<std::string> write_edges;  // edge declaration order
  bool operator==(const Neighborhood&) const = default;
};

// Process-network graph: nodes, shared-state edges, and the connectivity
// relation between them. Immutable after construction; iteration order over
// nodes and edges is declaration order throughout.
class NetworkGraph {
public:
  NetworkGraph() = default;
  // Validates: endpoints exist, one endpoint is a node and the other an
  // edge, no duplicate connections, no duplicate ids.
  NetworkGraph(std::vector<std::string> nodes, std::vector<std::string> edges,
               std::vector<Connection> connections);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<std::string>& edges() const { return edges_; }
  const std::vector<Connection>& connections() const { return connections_; }

  uint32_t node_count() const { return static_cast<uint32_t>(nodes_.size()); }
  uint32_t edge_count() const { return static_cast<uint32_t>(edges_.size()); }

  std::optional<uint32_t> node_index(const std::string& id) const;
  std::optional<uint32_t> edge_index(const std::string& id) const;

  bool node_writes(uint32_t node, uint32_t edge) const;  // (node,edge) in C
  bool node_reads(uint32_t node, uint32_t edge) const;   // (edge,node) in C

  // Edge indices attached to the node in either direction, ascending.
  const std::vector<uint32_t>& neighborhood_edges(uint32_t node) const;
  // Node indices attached to the edge, ascending.
  const std::vector<uint32_t>& endpoints(uint32_t edge) const;

  bool operator==(const NetworkGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ &&
           connections_ == other.connections_;
  }

private:
  std::vector<std::string> nodes_;
  std::vector<std::string> edges_;
  std::vector<Connection> connections_;

  std::vector<std::vector<uint32_t>> node_edges_;   // per node
  std::vector<std::vector<uint32_t>> edge_nodes_;   // per edge
  std::vector<std::vector<uint32_t>> write_edges_;  // per node, ascending
  std::vector<std::vector<uint32_t>> read_edges_;   // per node, ascending
};

// Shared variable carried by an edge.
struct EdgeSpec {
  std::string edge;
  std::vector<std::string> domain;  // finite, ordered, nonempty
  std::string init;                 // element of domain
  bool operator==(const EdgeSpec&) const = default;
};

Neighborhood neighborhood(const NetworkGraph& g, const std::string& node);
// True iff m writes some edge in n's neighborhood.
bool points_to(const NetworkGraph& g, const std::string& m, const std::string& n);
// True iff the neighborhoods of m and n share an edge.
bool adjacent(const NetworkGraph& g, const std::string& m, const std::string& n);

// Built-in families. All connectivity is bidirectional.
NetworkGraph make_ring(int size);                 // size >= 2; size 2 uses two distinct edges
NetworkGraph make_star(int leaves);               // leaves >= 1; hub plus leaves
NetworkGraph make_torus(int rows, int cols);      // rows, cols >= 2; wraparound grid
NetworkGraph make_line(int size);                 // size >= 1; size 1 is an isolated node
NetworkGraph make_degree_graph(const std::vector<int>& degrees);  // Havel–Hakimi

}  // namespace splitmc

#endif
