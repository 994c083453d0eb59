#pragma once

#include <cstdint>
#include <optional>

#include "netopt/exact_solver.hpp"
#include "netopt/graph.hpp"
#include "netopt/statistics.hpp"

namespace netopt {

enum class StartKind { Star, StarPlusChords, RandomConnected, Given };

struct SearchConfig {
  std::uint64_t seed = 0;
  std::size_t max_iterations = 1'000'000;  // accepted moves per restart
  std::size_t restarts = 1;
  StartKind start = StartKind::Star;
  std::optional<Graph> given;  // required iff start == Given
  unsigned threads = 0;        // 0: hardware concurrency

  /// Throws ModelError on restarts == 0, max_iterations == 0 or a missing given graph.
  void validate() const;
};

/// Seed of restart r; restart 0 keeps the configured seed.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

/// Builds the start graph for one restart. RandomConnected draws a random
/// recursive tree and then keeps each remaining pair with a probability drawn
/// once per call. StarPlusChords uses prop1's chord count when the objective
/// carries alpha, and no chords otherwise.
Graph make_start(std::size_t n, const Hamiltonian& h, const SearchConfig& cfg, std::uint64_t seed);

/// First-improve hill climbing over single-pair toggles. Each scan visits the
/// pairs in a freshly shuffled order (seeded by cfg.seed) and applies the
/// first toggle that strictly improves the objective and keeps the graph in
/// `space`. Stops after a scan without improvement or after
/// cfg.max_iterations accepted moves. status is always Incumbent;
/// nodes_explored counts evaluated toggles.
SolveResult first_improve(const Graph& start, const Hamiltonian& h, const SampleSpace& space, const SearchConfig& cfg);

/// cfg.restarts independent first_improve runs from make_start(restart_seed(seed, r)),
/// possibly in parallel. Best objective wins; ties go to the lexicographically
/// smallest pair bitset, so the result does not depend on the thread count.
SolveResult multi_restart(std::size_t n, const Hamiltonian& h, const SampleSpace& space, const SearchConfig& cfg);

/// Does any single toggle strictly improve while staying feasible? Exhaustive,
/// evaluated from scratch; used to certify local optimality.
bool has_improving_toggle(const Graph& g, const Hamiltonian& h, const SampleSpace& space);

}  // namespace netopt
