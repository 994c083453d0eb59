#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netopt/graph.hpp"
#include "netopt/rational.hpp"

namespace netopt {

/// Symmetric, zero-diagonal, nonnegative matrix of nodal distances.
class DistanceMatrix {
 public:
  /// Validates shape, symmetry (exact), zero diagonal and nonnegativity.
  explicit DistanceMatrix(std::vector<std::vector<Rational>> rows);

  /// n points uniform in the unit square from a seeded mt19937_64; entries are
  /// Euclidean distances rounded to multiples of 1e-6.
  static DistanceMatrix random_unit_square(std::size_t n, std::uint64_t seed);
  static DistanceMatrix uniform(std::size_t n, const Rational& value);

  std::size_t size() const { return n_; }
  const Rational& at(Node i, Node j) const { return values_[i * n_ + j]; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<Rational> values_;
};

/// Text form: n on the first line, then n rows of n decimals or fractions.
DistanceMatrix read_distance_matrix(std::istream& in);
DistanceMatrix read_distance_matrix(const std::filesystem::path& path);
void write_distance_matrix(const DistanceMatrix& m, std::ostream& out);

enum class StatisticKind { NonEdges, Triangles, PhysicalDistance, FlowDistance };

std::string to_string(StatisticKind kind);

struct StatisticSpec {
  StatisticKind kind = StatisticKind::NonEdges;
  std::shared_ptr<const DistanceMatrix> distances;  // set iff kind == PhysicalDistance

  static StatisticSpec non_edges() { return {StatisticKind::NonEdges, nullptr}; }
  static StatisticSpec triangles() { return {StatisticKind::Triangles, nullptr}; }
  static StatisticSpec flow_distance() { return {StatisticKind::FlowDistance, nullptr}; }
  static StatisticSpec physical_distance(DistanceMatrix m);

  /// Connectivity is a precondition (flow distance is infinite otherwise).
  bool requires_connected() const { return kind == StatisticKind::FlowDistance; }
};

/// n(n-1)/2 - |E|.
std::uint64_t s_non_edges(const Graph& g);
std::uint64_t s_triangles(const Graph& g);
/// Sum of delta_ij over present edges. Throws ModelError on size mismatch.
Rational s_physical_distance(const Graph& g, const DistanceMatrix& delta);
/// Minimum total multicommodity flow delivering one unit between every ordered
/// pair; equals the sum of BFS hop counts. Throws DisconnectedGraphError.
std::uint64_t s_flow_distance(const Graph& g);

Rational evaluate(const StatisticSpec& spec, const Graph& g);

enum class HamiltonianForm { Linear, MaxMin };
enum class Sense { Maximize, Minimize };

struct HamiltonianTerm {
  Rational theta;
  StatisticSpec statistic;
};

/// Objective over graphs built from weighted statistics.
///
///   Linear:  sum_j theta_j S_j(x)
///   MaxMin:  min_j theta_j S_j(x) when maximized, and the mirrored
///            max_j theta_j S_j(x) when minimized (the min-max variant used
///            for two distance statistics with positive weights).
///
/// With alpha set the form is MaxMin over exactly two terms whose weights are
/// (alpha, 1 - alpha).
class Hamiltonian {
 public:
  static Hamiltonian linear(std::vector<HamiltonianTerm> terms, Sense sense = Sense::Maximize);
  static Hamiltonian max_min(std::vector<HamiltonianTerm> terms);
  static Hamiltonian max_min(const Rational& alpha, StatisticSpec first, StatisticSpec second);
  /// alpha = theta1 / (theta1 + theta2) for positive weights.
  static Hamiltonian max_min_rescaled(const Rational& theta1, const Rational& theta2, StatisticSpec first,
                                      StatisticSpec second);
  static Hamiltonian min_max(const Rational& alpha, StatisticSpec first, StatisticSpec second);

  HamiltonianForm form() const { return form_; }
  Sense sense() const { return sense_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const std::optional<Rational>& alpha() const { return alpha_; }
  bool requires_connected() const;

  /// Aggregates per-term statistic values (unweighted S_j) into the objective.
  Rational combine(std::span<const Rational> statistic_values) const;
  /// Strictly better in this objective's sense.
  bool better(const Rational& a, const Rational& b) const {
    return sense_ == Sense::Maximize ? b < a : a < b;
  }

 private:
  Hamiltonian(HamiltonianForm form, Sense sense, std::vector<HamiltonianTerm> terms, std::optional<Rational> alpha);

  HamiltonianForm form_;
  Sense sense_;
  std::vector<HamiltonianTerm> terms_;
  std::optional<Rational> alpha_;
};

/// Unweighted S_j(g) for every term, in term order.
std::vector<Rational> statistic_values(const Hamiltonian& h, const Graph& g);
Rational eval_hamiltonian(const Hamiltonian& h, const Graph& g);

/// Sample space: optional connectivity and optional fixed edge count.
struct SampleSpace {
  bool connected = true;
  std::optional<std::size_t> edge_count;

  static SampleSpace all() { return {false, std::nullopt}; }
  static SampleSpace connected_graphs() { return {true, std::nullopt}; }
  static SampleSpace fixed_density(std::size_t d, bool connected = false) { return {connected, d}; }

  bool contains(const Graph& g) const;
  std::string describe() const;
};

void validate_alpha(const Rational& alpha);

}  // namespace netopt
