#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "netopt/exact_solver.hpp"
#include "netopt/local_search.hpp"
#include "netopt/statistics.hpp"

namespace netopt {

enum class ModelKind { TriadsVsNonEdges, DistanceVsFlow };
enum class SolverKind { Brute, BranchAndBound, LocalSearch };

std::string to_string(ModelKind model);
std::string to_string(SolverKind solver);
ModelKind parse_model(std::string_view text);
SolverKind parse_solver(std::string_view text);
StartKind parse_start(std::string_view text);

/// "connected", "all", "density=D" or "connected,density=D" (the inverse of
/// SampleSpace::describe).
SampleSpace parse_space(std::string_view text);

/// Where the physical distances of the distance/flow model come from: a
/// matrix file, or random points in the unit square drawn from `seed`.
struct DeltaSource {
  std::optional<std::filesystem::path> file;
  std::uint64_t seed = 0;
};

struct ExperimentSpec {
  std::size_t n = 0;
  ModelKind model = ModelKind::TriadsVsNonEdges;
  Rational alpha{1, 2};
  SampleSpace space = SampleSpace::connected_graphs();
  SolverKind solver = SolverKind::BranchAndBound;
  std::optional<Rational> gamma;  // two-stage robust solve when set (triads model, exact solvers)
  Stage1Objective stage1 = Stage1Objective::Linear;
  std::uint64_t seed = 0;
  std::optional<DeltaSource> delta;  // required iff model == DistanceVsFlow
  std::uint64_t node_limit = 10'000'000;
  std::chrono::duration<double> time_limit{300.0};
  std::size_t restarts = 10;
  StartKind start = StartKind::RandomConnected;
  unsigned threads = 0;
  std::string label;  // first table column; alpha as a decimal when empty

  /// Throws ModelError on an inconsistent spec.
  void validate() const;
};

struct ExperimentReport {
  ExperimentSpec spec;
  SolveResult result;
  std::optional<Rational> p_star;
  std::optional<DistanceMatrix> delta;
  std::optional<GraphMetrics> metrics;
};

/// Objective of the spec's model (stage-2 objective when gamma is set).
Hamiltonian experiment_hamiltonian(const ExperimentSpec& spec, const std::optional<DistanceMatrix>& delta);

ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Deterministic result document. Everything except telemetry.wall_time_seconds
/// is a function of the spec.
nlohmann::ordered_json report_json(const ExperimentReport& report);

/// The spec's label, or alpha as a short decimal ("0.7") when empty.
std::string row_label(const ExperimentSpec& spec);

/// "label & density & CC & APL \\" with 5 decimals; APL is "n/a" when disconnected.
std::string metrics_row(const std::string& label, const GraphMetrics& metrics);

/// Writes <stem>.json, <stem>.row.txt, <stem>.dot, <stem>.edges (and
/// <stem>.delta.txt for the distance/flow model) into `dir`.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir, const std::string& stem);

/// Deterministic DOT with nodes 0..n-1 and sorted edges.
void export_dot(const Graph& g, const std::filesystem::path& path);

/// 0 optimal, 2 incumbent only, 3 infeasible.
int exit_code(SolveStatus status);

}  // namespace netopt
