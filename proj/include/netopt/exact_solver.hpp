#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netopt/graph.hpp"
#include "netopt/rational.hpp"
#include "netopt/statistics.hpp"

namespace netopt {

enum class SolveStatus { Optimal, Incumbent, Infeasible };

std::string to_string(SolveStatus status);

struct SolveResult {
  std::optional<Graph> graph;            // empty iff infeasible
  Rational objective;                    // eval_hamiltonian(h, *graph)
  std::vector<Rational> statistic_values;  // unweighted S_j per term
  SolveStatus status = SolveStatus::Infeasible;
  std::uint64_t nodes_explored = 0;
  std::chrono::duration<double> wall_time{0};
  std::optional<Rational> bound_at_root;
};

/// Side constraint sum_j theta_j S_j(x) >= minimum (the robust second-stage row).
struct ValueFloor {
  std::vector<HamiltonianTerm> terms;
  Rational minimum;

  bool satisfied_by(const Graph& g) const;
};

struct Problem {
  std::size_t n = 0;
  SampleSpace space;
  Hamiltonian objective;
  std::optional<ValueFloor> floor;

  /// In the sample space, statistic preconditions hold, floor satisfied.
  bool feasible(const Graph& g) const;
};

constexpr std::size_t kBruteForceMaxNodes = 7;

struct BruteForceResult {
  SolveResult best;
  std::vector<Graph> optimizers;  // every graph attaining best.objective, enumeration order
};

/// Enumerates all 2^(n(n-1)/2) graphs. Throws ModelError for n > 7.
BruteForceResult brute_force(const Problem& problem);

/// Lower bound on triangles and edges of every optimum of the two-term
/// non-edges/triangles max-min over connected graphs.
struct Prop1Bound {
  std::size_t h = 0;
  std::size_t min_edges = 0;
};

/// h = min(n - 1, floor(alpha (n-2)(n-1)/2)), min_edges = n - 1 + h.
Prop1Bound prop1(std::size_t n, const Rational& alpha);

/// Number of distinct chords star_plus_chords can place: consecutive leaf
/// pairs of the circular leaf order 1, 2, ..., n-1, 1.
std::size_t max_chords(std::size_t n);

/// Star centred on node 0 plus h chords (1,2), (2,3), ..., closing (n-1, 1).
/// Each chord closes a triangle with the centre. Throws ModelError when h
/// exceeds max_chords(n).
Graph star_plus_chords(std::size_t n, std::size_t h);

/// The Prop. 1 style objective floor min((1-alpha) h, alpha (N - (n-1) - h)).
Rational star_plus_chords_guarantee(std::size_t n, const Rational& alpha, std::size_t h);

struct BnbOptions {
  std::optional<Graph> incumbent;
  std::uint64_t node_limit = 10'000'000;
  std::chrono::duration<double> time_limit{300.0};
};

/// Per-pair decision during the search.
enum class PairState : std::int8_t { Undecided = -1, Absent = 0, Present = 1 };

/// Optimistic objective value over every completion of `partial` (in the
/// objective's sense), ignoring feasibility. Exposed for admissibility checks.
Rational optimistic_bound(const Problem& problem, std::span<const PairState> partial);

/// Depth-first branch and bound over pair variables in lexicographic order,
/// present-branch first. Nodes are pruned when their optimistic bound cannot
/// strictly beat the incumbent, when the graph with every undecided pair
/// present is disconnected (connected spaces), when the density target is
/// out of reach, or when the floor row cannot be met.
SolveResult branch_and_bound(const Problem& problem, const BnbOptions& options = {});

enum class Stage1Objective { Linear, MaxMin };
enum class ExactMethod { BruteForce, BranchAndBound };

struct TwoStageResult {
  Rational p_star;
  Stage1Objective stage1_objective;
  SolveResult stage1;
  SolveResult stage2;
};

/// Stage 1 computes P* as the maximum of sum_j theta_j S_j (Linear) or of
/// min_j theta_j S_j (MaxMin). Stage 2 maximizes min_j theta_j S_j subject to
/// sum_j theta_j S_j >= gamma P*.
TwoStageResult solve_two_stage(std::size_t n, const SampleSpace& space, const std::vector<HamiltonianTerm>& terms,
                               const Rational& gamma, Stage1Objective stage1 = Stage1Objective::Linear,
                               ExactMethod method = ExactMethod::BranchAndBound, const BnbOptions& options = {});

}  // namespace netopt
