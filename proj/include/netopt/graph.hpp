#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "netopt/rational.hpp"

namespace netopt {

using Node = std::size_t;
using NodePair = std::pair<Node, Node>;

/// Number of unordered pairs n(n-1)/2.
constexpr std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

/// Lexicographic rank of (i, j) among {(a, b) : 0 <= a < b < n}.
/// Throws InvalidPairError unless i < j < n.
std::size_t edge_index(Node i, Node j, std::size_t n);

/// Inverse of edge_index.
NodePair pair_of(std::size_t index, std::size_t n);

/// Undirected simple graph on nodes 0..n-1. Edges live in a bitset indexed by
/// the lexicographic pair rank, so loops and parallel edges are unrepresentable.
class Graph {
 public:
  explicit Graph(std::size_t n);

  static Graph from_edges(std::size_t n, std::span<const NodePair> edges);
  /// Bit b of mask is pair b; only meaningful while pair_count(n) <= 64.
  static Graph from_mask(std::size_t n, std::uint64_t mask);
  static Graph complete(std::size_t n);
  static Graph star(std::size_t n, Node center = 0);
  static Graph path(std::size_t n);
  static Graph cycle(std::size_t n);

  std::size_t node_count() const { return n_; }
  std::size_t pair_count() const { return netopt::pair_count(n_); }
  std::size_t edge_count() const;

  bool has_edge(Node i, Node j) const;
  bool has_edge_at(std::size_t index) const { return (words_[index / 64] >> (index % 64)) & 1U; }

  void set_edge(Node i, Node j, bool present = true);
  void set_edge_at(std::size_t index, bool present);
  void toggle_edge_at(std::size_t index) { words_[index / 64] ^= std::uint64_t{1} << (index % 64); }

  /// Present edges in lexicographic order.
  std::vector<NodePair> edges() const;
  std::vector<std::vector<Node>> adjacency_lists() const;

  /// Raw pair bitset, 64 pairs per word, unused high bits zero.
  std::span<const std::uint64_t> words() const { return words_; }

  /// Order on the pair bitset read from index 0 upward, absent < present.
  bool lexicographically_less(const Graph& other) const;

  friend bool operator==(const Graph& a, const Graph& b) = default;

 private:
  void check_pair(Node i, Node j) const;

  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

/// Per-node neighbour bitsets. Derived from a Graph when the algorithms need
/// row intersections (triangles, traversals, incremental toggles).
class AdjacencyRows {
 public:
  explicit AdjacencyRows(std::size_t n);
  explicit AdjacencyRows(const Graph& g);

  std::size_t node_count() const { return n_; }
  bool test(Node i, Node j) const { return (row(i)[j / 64] >> (j % 64)) & 1U; }
  void set(Node i, Node j, bool present);
  std::size_t degree(Node i) const;
  std::size_t common_neighbors(Node i, Node j) const;
  /// Is j reachable from i? When skip_edge is set, that edge is treated as absent.
  bool reachable(Node from, Node to, std::optional<NodePair> skip_edge = std::nullopt) const;
  bool connected() const;
  std::uint64_t triangle_count() const;

  std::span<const std::uint64_t> row(Node i) const { return {bits_.data() + i * stride_, stride_}; }

 private:
  std::span<std::uint64_t> row(Node i) { return {bits_.data() + i * stride_, stride_}; }

  std::size_t n_;
  std::size_t stride_;
  std::vector<std::uint64_t> bits_;
};

std::uint64_t count_triangles(const Graph& g);

/// Paths of length two, sum over nodes of C(deg, 2).
std::uint64_t count_connected_triples(const Graph& g);

bool is_connected(const Graph& g);

/// BFS hop counts from `source`; std::nullopt for unreachable nodes.
std::vector<std::optional<std::size_t>> bfs_distances(const Graph& g, Node source);

/// Sum of shortest-path hop counts over ordered pairs. Throws DisconnectedGraphError.
std::uint64_t total_path_length(const Graph& g);

/// Mean shortest-path length over ordered pairs i != j. Throws
/// DisconnectedGraphError when some pair is unreachable. Zero for n = 1.
Rational average_path_length(const Graph& g);

/// Global transitivity 3 * triangles / connected triples, 0 without triples.
Rational clustering_coefficient(const Graph& g);

/// Watts-Strogatz mean of local coefficients; nodes of degree < 2 count as 0.
Rational average_local_clustering(const Graph& g);

/// edge_count / pair_count, 0 when n = 1.
Rational density(const Graph& g);

struct GraphMetrics {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::uint64_t triangle_count = 0;
  Rational density;
  Rational clustering_coefficient;
  Rational average_local_clustering;
  std::optional<Rational> average_path_length;  // empty when disconnected
  bool connected = false;
};

GraphMetrics compute_metrics(const Graph& g);

}  // namespace netopt
