#include "netopt/graph.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <string>

#include "netopt/errors.hpp"

namespace netopt {

namespace {

// Rank of the first pair (i, i+1) in row i.
std::size_t row_offset(Node i, std::size_t n) { return i * n - i * (i + 1) / 2; }

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

std::size_t edge_index(Node i, Node j, std::size_t n) {
  if (!(i < j && j < n)) {
    throw InvalidPairError("invalid pair (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") for n = " + std::to_string(n));
  }
  return row_offset(i, n) + (j - i - 1);
}

NodePair pair_of(std::size_t index, std::size_t n) {
  if (index >= pair_count(n)) {
    throw InvalidPairError("pair index " + std::to_string(index) + " out of range for n = " + std::to_string(n));
  }
  Node i = 0;
  while (row_offset(i + 1, n) <= index) ++i;
  return {i, i + 1 + (index - row_offset(i, n))};
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::size_t n) : n_(n), words_(words_for(netopt::pair_count(n)), 0) {
  if (n == 0) throw ModelError("graph needs at least one node");
}

Graph Graph::from_edges(std::size_t n, std::span<const NodePair> edges) {
  Graph g(n);
  for (auto [i, j] : edges) g.set_edge(i, j);
  return g;
}

Graph Graph::from_mask(std::size_t n, std::uint64_t mask) {
  Graph g(n);
  if (!g.words_.empty()) {
    const std::size_t bits = g.pair_count();
    g.words_[0] = bits >= 64 ? mask : (mask & ((std::uint64_t{1} << bits) - 1));
  }
  return g;
}

Graph Graph::complete(std::size_t n) {
  Graph g(n);
  for (std::size_t e = 0; e < g.pair_count(); ++e) g.set_edge_at(e, true);
  return g;
}

Graph Graph::star(std::size_t n, Node center) {
  Graph g(n);
  for (Node v = 0; v < n; ++v) {
    if (v != center) g.set_edge(center, v);
  }
  return g;
}

Graph Graph::path(std::size_t n) {
  Graph g(n);
  for (Node v = 0; v + 1 < n; ++v) g.set_edge(v, v + 1);
  return g;
}

Graph Graph::cycle(std::size_t n) {
  Graph g = path(n);
  if (n >= 3) g.set_edge(0, n - 1);
  return g;
}

std::size_t Graph::edge_count() const {
  std::size_t count = 0;
  for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

void Graph::check_pair(Node i, Node j) const {
  if (i == j || i >= n_ || j >= n_) {
    throw InvalidPairError("invalid pair (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") for n = " + std::to_string(n_));
  }
}

bool Graph::has_edge(Node i, Node j) const {
  check_pair(i, j);
  return i < j ? has_edge_at(edge_index(i, j, n_)) : has_edge_at(edge_index(j, i, n_));
}

void Graph::set_edge(Node i, Node j, bool present) {
  check_pair(i, j);
  set_edge_at(i < j ? edge_index(i, j, n_) : edge_index(j, i, n_), present);
}

void Graph::set_edge_at(std::size_t index, bool present) {
  const std::uint64_t bit = std::uint64_t{1} << (index % 64);
  if (present) {
    words_[index / 64] |= bit;
  } else {
    words_[index / 64] &= ~bit;
  }
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  std::size_t index = 0;
  for (Node i = 0; i < n_; ++i) {
    for (Node j = i + 1; j < n_; ++j, ++index) {
      if (has_edge_at(index)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<std::vector<Node>> Graph::adjacency_lists() const {
  std::vector<std::vector<Node>> adj(n_);
  for (auto [i, j] : edges()) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

bool Graph::lexicographically_less(const Graph& other) const {
  if (n_ != other.n_) return n_ < other.n_;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t diff = words_[w] ^ other.words_[w];
    if (diff != 0) {
      const std::uint64_t lowest = diff & (~diff + 1);
      return (other.words_[w] & lowest) != 0;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// AdjacencyRows

AdjacencyRows::AdjacencyRows(std::size_t n) : n_(n), stride_(words_for(n)), bits_(n * stride_, 0) {}

AdjacencyRows::AdjacencyRows(const Graph& g) : AdjacencyRows(g.node_count()) {
  for (auto [i, j] : g.edges()) {
    set(i, j, true);
  }
}

void AdjacencyRows::set(Node i, Node j, bool present) {
  const std::uint64_t bit_j = std::uint64_t{1} << (j % 64);
  const std::uint64_t bit_i = std::uint64_t{1} << (i % 64);
  if (present) {
    row(i)[j / 64] |= bit_j;
    row(j)[i / 64] |= bit_i;
  } else {
    row(i)[j / 64] &= ~bit_j;
    row(j)[i / 64] &= ~bit_i;
  }
}

std::size_t AdjacencyRows::degree(Node i) const {
  std::size_t d = 0;
  for (auto w : row(i)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::size_t AdjacencyRows::common_neighbors(Node i, Node j) const {
  const auto a = row(i);
  const auto b = row(j);
  std::size_t count = 0;
  for (std::size_t w = 0; w < stride_; ++w) count += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return count;
}

bool AdjacencyRows::reachable(Node from, Node to, std::optional<NodePair> skip_edge) const {
  if (from == to) return true;
  std::vector<std::uint64_t> seen(stride_, 0);
  std::vector<Node> stack{from};
  seen[from / 64] |= std::uint64_t{1} << (from % 64);
  while (!stack.empty()) {
    const Node u = stack.back();
    stack.pop_back();
    const auto r = row(u);
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t fresh = r[w] & ~seen[w];
      while (fresh != 0) {
        const Node v = w * 64 + static_cast<Node>(std::countr_zero(fresh));
        fresh &= fresh - 1;
        if (skip_edge && ((u == skip_edge->first && v == skip_edge->second) ||
                          (u == skip_edge->second && v == skip_edge->first))) {
          continue;
        }
        if (v == to) return true;
        seen[v / 64] |= std::uint64_t{1} << (v % 64);
        stack.push_back(v);
      }
    }
  }
  return false;
}

bool AdjacencyRows::connected() const {
  if (n_ <= 1) return true;
  std::vector<std::uint64_t> seen(stride_, 0);
  std::vector<Node> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const Node u = stack.back();
    stack.pop_back();
    const auto r = row(u);
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t fresh = r[w] & ~seen[w];
      seen[w] |= fresh;
      while (fresh != 0) {
        stack.push_back(w * 64 + static_cast<Node>(std::countr_zero(fresh)));
        fresh &= fresh - 1;
        ++visited;
      }
    }
  }
  return visited == n_;
}

std::uint64_t AdjacencyRows::triangle_count() const {
  // Each triangle i<j<k counted once: for every edge i<j, neighbours k > j.
  std::uint64_t total = 0;
  for (Node i = 0; i < n_; ++i) {
    const auto ri = row(i);
    for (Node j = i + 1; j < n_; ++j) {
      if (!test(i, j)) continue;
      const auto rj = row(j);
      for (std::size_t w = (j + 1) / 64; w < stride_; ++w) {
        std::uint64_t common = ri[w] & rj[w];
        if (w == (j + 1) / 64) {
          const std::size_t shift = (j + 1) % 64;
          common &= shift == 0 ? ~std::uint64_t{0} : ~((std::uint64_t{1} << shift) - 1);
        }
        total += static_cast<std::uint64_t>(std::popcount(common));
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Metrics

std::uint64_t count_triangles(const Graph& g) { return AdjacencyRows(g).triangle_count(); }

std::uint64_t count_connected_triples(const Graph& g) {
  const AdjacencyRows adj(g);
  std::uint64_t total = 0;
  for (Node v = 0; v < g.node_count(); ++v) {
    const std::uint64_t d = adj.degree(v);
    total += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  return total;
}

bool is_connected(const Graph& g) { return AdjacencyRows(g).connected(); }

std::vector<std::optional<std::size_t>> bfs_distances(const Graph& g, Node source) {
  const auto adj = g.adjacency_lists();
  std::vector<std::optional<std::size_t>> dist(g.node_count());
  std::queue<Node> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Node u = frontier.front();
    frontier.pop();
    for (Node v : adj[u]) {
      if (!dist[v]) {
        dist[v] = *dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

std::uint64_t total_path_length(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto adj = g.adjacency_lists();
  std::uint64_t total = 0;
  std::vector<std::size_t> dist(n);
  std::vector<Node> queue(n);
  constexpr std::size_t unseen = static_cast<std::size_t>(-1);
  for (Node s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), unseen);
    dist[s] = 0;
    std::size_t head = 0;
    std::size_t tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const Node u = queue[head++];
      for (Node v : adj[u]) {
        if (dist[v] == unseen) {
          dist[v] = dist[u] + 1;
          total += dist[v];
          queue[tail++] = v;
        }
      }
    }
    if (tail != n) throw DisconnectedGraphError("shortest paths undefined: graph is disconnected");
  }
  return total;
}

Rational average_path_length(const Graph& g) {
  const std::size_t n = g.node_count();
  const std::uint64_t total = total_path_length(g);
  if (n < 2) return Rational(0);
  return Rational(static_cast<std::int64_t>(total), static_cast<std::int64_t>(n * (n - 1)));
}

Rational clustering_coefficient(const Graph& g) {
  const std::uint64_t triples = count_connected_triples(g);
  if (triples == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(3 * count_triangles(g)), static_cast<std::int64_t>(triples));
}

Rational average_local_clustering(const Graph& g) {
  const AdjacencyRows adj(g);
  const std::size_t n = g.node_count();
  Rational sum(0);
  for (Node v = 0; v < n; ++v) {
    const std::size_t d = adj.degree(v);
    if (d < 2) continue;
    // closed wedges at v: edges among neighbours of v
    std::int64_t links = 0;
    for (Node u = 0; u < n; ++u) {
      if (adj.test(v, u)) links += static_cast<std::int64_t>(adj.common_neighbors(v, u));
    }
    sum += Rational(links, static_cast<std::int64_t>(d * (d - 1)));
  }
  return sum / static_cast<std::int64_t>(n);
}

Rational density(const Graph& g) {
  if (g.pair_count() == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(g.edge_count()), static_cast<std::int64_t>(g.pair_count()));
}

GraphMetrics compute_metrics(const Graph& g) {
  GraphMetrics m;
  m.node_count = g.node_count();
  m.edge_count = g.edge_count();
  m.triangle_count = count_triangles(g);
  m.density = density(g);
  m.clustering_coefficient = clustering_coefficient(g);
  m.average_local_clustering = average_local_clustering(g);
  m.connected = is_connected(g);
  if (m.connected) m.average_path_length = average_path_length(g);
  return m;
}

}  // namespace netopt
