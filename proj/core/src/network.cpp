#include "splitmc/network.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "splitmc/error.hpp"

namespace splitmc {

namespace {

std::unordered_map<std::string, uint32_t> index_of(const std::vector<std::string>& ids,
                                                   const char* what) {
  std::unordered_map<std::string, uint32_t> m;
  m.reserve(ids.size());
  for (uint32_t i = 0; i < ids.size(); ++i) {
    if (!m.emplace(ids[i], i).second) {
      throw Error(ErrorKind::Duplicate,
                  std::string("duplicate ") + what + " id '" + ids[i] + "'");
    }
  }
  return m;
}

}  // namespace

NetworkGraph::NetworkGraph(std::vector<std::string> nodes,
                           std::vector<std::string> edges,
                           std::vector<Connection> connections)
    : nodes_(std::move(nodes)), edges_(std::move(edges)),
      connections_(std::move(connections)) {
  auto node_idx = index_of(nodes_, "node");
  auto edge_idx = index_of(edges_, "edge");
  node_edges_.resize(nodes_.size());
  edge_nodes_.resize(edges_.size());
  write_edges_.resize(nodes_.size());
  read_edges_.resize(nodes_.size());

  std::set<std::pair<std::string, std::string>> seen;
  for (const Connection& c : connections_) {
    if (!seen.emplace(c.from, c.to).second) {
      throw Error(ErrorKind::Duplicate,
                  "duplicate connection (" + c.from + ", " + c.to + ")");
    }
    auto nf = node_idx.find(c.from);
    auto et = edge_idx.find(c.to);
    if (nf != node_idx.end() && et != edge_idx.end()) {
      write_edges_[nf->second].push_back(et->second);
      node_edges_[nf->second].push_back(et->second);
      edge_nodes_[et->second].push_back(nf->second);
      continue;
    }
    auto ef = edge_idx.find(c.from);
    auto nt = node_idx.find(c.to);
    if (ef != edge_idx.end() && nt != node_idx.end()) {
      read_edges_[nt->second].push_back(ef->second);
      node_edges_[nt->second].push_back(ef->second);
      edge_nodes_[ef->second].push_back(nt->second);
      continue;
    }
    throw Error(ErrorKind::UnknownId, "connection (" + c.from + ", " + c.to +
                                          ") must join an existing node and edge");
  }
  auto dedup_sort = [](std::vector<uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& v : node_edges_) dedup_sort(v);
  for (auto& v : edge_nodes_) dedup_sort(v);
  for (auto& v : write_edges_) dedup_sort(v);
  for (auto& v : read_edges_) dedup_sort(v);
}

std::optional<uint32_t> NetworkGraph::node_index(const std::string& id) const {
  for (uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i] == id) return i;
  return std::nullopt;
}

std::optional<uint32_t> NetworkGraph::edge_index(const std::string& id) const {
  for (uint32_t i = 0; i < edges_.size(); ++i)
    if (edges_[i] == id) return i;
  return std::nullopt;
}

bool NetworkGraph::node_writes(uint32_t node, uint32_t edge) const {
  const auto& w = write_edges_[node];
  return std::binary_search(w.begin(), w.end(), edge);
}

bool NetworkGraph::node_reads(uint32_t node, uint32_t edge) const {
  const auto& r = read_edges_[node];
  return std::binary_search(r.begin(), r.end(), edge);
}

const std::vector<uint32_t>& NetworkGraph::neighborhood_edges(uint32_t node) const {
  return node_edges_[node];
}

const std::vector<uint32_t>& NetworkGraph::endpoints(uint32_t edge) const {
  return edge_nodes_[edge];
}

namespace {

uint32_t require_node(const NetworkGraph& g, const std::string& id) {
  auto i = g.node_index(id);
  if (!i) throw Error(ErrorKind::UnknownId, "unknown node id '" + id + "'");
  return *i;
}

}  // namespace

Neighborhood neighborhood(const NetworkGraph& g, const std::string& node) {
  uint32_t n = require_node(g, node);
  Neighborhood out;
  out.node = node;
  for (uint32_t e : g.neighborhood_edges(n)) {
    if (g.node_reads(n, e)) out.read_edges.push_back(g.edges()[e]);
    if (g.node_writes(n, e)) out.write_edges.push_back(g.edges()[e]);
  }
  return out;
}

bool points_to(const NetworkGraph& g, const std::string& m, const std::string& n) {
  uint32_t mi = require_node(g, m);
  uint32_t ni = require_node(g, n);
  for (uint32_t e : g.neighborhood_edges(ni)) {
    if (g.node_writes(mi, e)) return true;
  }
  return false;
}

bool adjacent(const NetworkGraph& g, const std::string& m, const std::string& n) {
  uint32_t mi = require_node(g, m);
  uint32_t ni = require_node(g, n);
  const auto& a = g.neighborhood_edges(mi);
  const auto& b = g.neighborhood_edges(ni);
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    (*ia < *ib) ? ++ia : ++ib;
  }
  return false;
}

namespace {

NetworkGraph bidirectional(std::vector<std::string> nodes,
                           std::vector<std::string> edges,
                           const std::vector<std::pair<uint32_t, uint32_t>>& incidence) {
  // incidence: (node index, edge index); emits both connection directions
  std::vector<Connection> conns;
  conns.reserve(incidence.size() * 2);
  for (auto [n, e] : incidence) {
    conns.push_back({nodes[n], edges[e]});
    conns.push_back({edges[e], nodes[n]});
  }
  return NetworkGraph(std::move(nodes), std::move(edges), std::move(conns));
}

}  // namespace

NetworkGraph make_ring(int size) {
  if (size < 2) throw Error(ErrorKind::Input, "ring size must be >= 2");
  std::vector<std::string> nodes, edges;
  std::vector<std::pair<uint32_t, uint32_t>> inc;
  for (int i = 0; i < size; ++i) nodes.push_back("n" + std::to_string(i));
  // edge i joins node i and node (i+1) % size; for size 2 this yields the
  // two distinct edges that keep both nodes at degree 2
  for (int i = 0; i < size; ++i) {
    int j = (i + 1) % size;
    edges.push_back("f" + std::to_string(i) + "_" + std::to_string(j));
    inc.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(i)});
    inc.push_back({static_cast<uint32_t>(j), static_cast<uint32_t>(i)});
  }
  return bidirectional(std::move(nodes), std::move(edges), inc);
}

NetworkGraph make_star(int leaves) {
  if (leaves < 1) throw Error(ErrorKind::Input, "star needs at least one leaf");
  std::vector<std::string> nodes{"hub"};
  std::vector<std::string> edges;
  std::vector<std::pair<uint32_t, uint32_t>> inc;
  for (int i = 1; i <= leaves; ++i) {
    nodes.push_back("leaf" + std::to_string(i));
    edges.push_back("s" + std::to_string(i));
    inc.push_back({0, static_cast<uint32_t>(i - 1)});
    inc.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(i - 1)});
  }
  return bidirectional(std::move(nodes), std::move(edges), inc);
}

NetworkGraph make_torus(int rows, int cols) {
  if (rows < 2 || cols < 2)
    throw Error(ErrorKind::Input, "torus needs rows >= 2 and cols >= 2");
  std::vector<std::string> nodes, edges;
  std::vector<std::pair<uint32_t, uint32_t>> inc;
  auto id = [&](int r, int c) { return static_cast<uint32_t>(r * cols + c); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      nodes.push_back("n" + std::to_string(r) + "_" + std::to_string(c));
  // one rightward and one downward edge per node; wraparound means a 2-row
  // (or 2-column) torus gets two distinct edges between the same pair
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      uint32_t h = static_cast<uint32_t>(edges.size());
      edges.push_back("h" + std::to_string(r) + "_" + std::to_string(c));
      inc.push_back({id(r, c), h});
      inc.push_back({id(r, (c + 1) % cols), h});
      uint32_t v = static_cast<uint32_t>(edges.size());
      edges.push_back("v" + std::to_string(r) + "_" + std::to_string(c));
      inc.push_back({id(r, c), v});
      inc.push_back({id((r + 1) % rows, c), v});
    }
  }
  return bidirectional(std::move(nodes), std::move(edges), inc);
}

NetworkGraph make_line(int size) {
  if (size < 1) throw Error(ErrorKind::Input, "line size must be >= 1");
  std::vector<std::string> nodes, edges;
  std::vector<std::pair<uint32_t, uint32_t>> inc;
  for (int i = 0; i < size; ++i) nodes.push_back("n" + std::to_string(i));
  for (int i = 0; i + 1 < size; ++i) {
    edges.push_back("e" + std::to_string(i) + "_" + std::to_string(i + 1));
    inc.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(i)});
    inc.push_back({static_cast<uint32_t>(i + 1), static_cast<uint32_t>(i)});
  }
  return bidirectional(std::move(nodes), std::move(edges), inc);
}

NetworkGraph make_degree_graph(const std::vector<int>& degrees) {
  if (degrees.empty()) throw Error(ErrorKind::Input, "empty degree sequence");
  for (int d : degrees)
    if (d < 0) throw Error(ErrorKind::Input, "negative degree");
  // Havel–Hakimi, ties broken by node index: deterministic output
  size_t n = degrees.size();
  std::vector<int> residual = degrees;
  std::vector<std::pair<uint32_t, uint32_t>> pairs;  // node-node links
  for (;;) {
    std::vector<uint32_t> order(n);
    for (uint32_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      return residual[a] > residual[b];
    });
    uint32_t head = order[0];
    int d = residual[head];
    if (d == 0) break;
    if (static_cast<size_t>(d) >= n)
      throw Error(ErrorKind::Input, "degree sequence is not graphical");
    residual[head] = 0;
    for (int k = 1; k <= d; ++k) {
      uint32_t other = order[k];
      if (residual[other] <= 0)
        throw Error(ErrorKind::Input, "degree sequence is not graphical");
      --residual[other];
      pairs.push_back({std::min(head, other), std::max(head, other)});
    }
  }
  std::vector<std::string> nodes, edges;
  std::vector<std::pair<uint32_t, uint32_t>> inc;
  for (size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
  std::sort(pairs.begin(), pairs.end());
  for (size_t k = 0; k < pairs.size(); ++k) {
    edges.push_back("e" + std::to_string(k));
    inc.push_back({pairs[k].first, static_cast<uint32_t>(k)});
    inc.push_back({pairs[k].second, static_cast<uint32_t>(k)});
  }
  return bidirectional(std::move(nodes), std::move(edges), inc);
}

}  // namespace splitmc
