#include "netopt/report.hpp"

#include <fstream>

#include "netopt/errors.hpp"
#include "netopt/graph_io.hpp"

namespace netopt {

std::string to_string(ModelKind model) {
  return model == ModelKind::TriadsVsNonEdges ? "triads_vs_nonedges" : "distance_vs_flow";
}

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::Brute: return "brute";
    case SolverKind::BranchAndBound: return "bnb";
    case SolverKind::LocalSearch: return "local_search";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view text) {
  if (text == "triads_vs_nonedges" || text == "triads") return ModelKind::TriadsVsNonEdges;
  if (text == "distance_vs_flow" || text == "distance") return ModelKind::DistanceVsFlow;
  throw ModelError("unknown model '" + std::string(text) + "'");
}

SolverKind parse_solver(std::string_view text) {
  if (text == "brute") return SolverKind::Brute;
  if (text == "bnb") return SolverKind::BranchAndBound;
  if (text == "local_search" || text == "heuristic") return SolverKind::LocalSearch;
  throw ModelError("unknown solver '" + std::string(text) + "'");
}

StartKind parse_start(std::string_view text) {
  if (text == "star") return StartKind::Star;
  if (text == "star_plus_chords") return StartKind::StarPlusChords;
  if (text == "random_connected" || text == "random") return StartKind::RandomConnected;
  throw ModelError("unknown start '" + std::string(text) + "'");
}

SampleSpace parse_space(std::string_view text) {
  SampleSpace space = SampleSpace::all();
  bool saw_base = false;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view part = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (part == "connected" || part == "all") {
      if (saw_base) throw ModelError("space names 'connected'/'all' twice");
      saw_base = true;
      space.connected = part == "connected";
    } else if (part.starts_with("density=")) {
      const Rational d = parse_rational(part.substr(8));
      if (d.denominator() != 1 || d < 0) throw ModelError("density must be a nonnegative edge count");
      space.edge_count = static_cast<std::size_t>(d.numerator());
    } else {
      throw ModelError("unknown space component '" + std::string(part) + "'");
    }
  }
  return space;
}

void ExperimentSpec::validate() const {
  if (n < 2) throw ModelError("experiments need n >= 2");
  validate_alpha(alpha);
  if ((model == ModelKind::DistanceVsFlow) != delta.has_value())
    throw ModelError("a distance source is required for distance_vs_flow and only there");
  if (solver == SolverKind::Brute && n > kBruteForceMaxNodes)
    throw ModelError("brute force is capped at n = " + std::to_string(kBruteForceMaxNodes));
  if (gamma) {
    if (*gamma < 0 || *gamma > 1) throw ModelError("gamma must lie in [0,1]");
    if (model != ModelKind::TriadsVsNonEdges) throw ModelError("the robust two-stage solve needs the triads model");
    if (solver == SolverKind::LocalSearch) throw ModelError("the robust two-stage solve needs an exact solver");
  }
  if (restarts == 0) throw ModelError("restarts must be >= 1");
  if (space.edge_count && *space.edge_count > pair_count(n)) throw ModelError("density exceeds the number of pairs");
}

namespace {

std::vector<HamiltonianTerm> triad_terms(const Rational& alpha) {
  return {{alpha, StatisticSpec::non_edges()}, {1 - alpha, StatisticSpec::triangles()}};
}

std::string short_decimal(const Rational& value) {
  std::string s = to_decimal_string(value, 12);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

nlohmann::ordered_json number(const Rational& value) {
  return {{"fraction", to_fraction_string(value)}, {"decimal", to_decimal_string(value, 5)}};
}

std::string stage1_name(Stage1Objective s) { return s == Stage1Objective::Linear ? "linear" : "max_min"; }

std::optional<Graph> warm_start(const ExperimentSpec& spec, const Problem& problem) {
  Graph candidate = Graph::star(spec.n, 0);
  if (spec.model == ModelKind::TriadsVsNonEdges)
    candidate = star_plus_chords(spec.n, std::min(prop1(spec.n, spec.alpha).h, max_chords(spec.n)));
  if (problem.feasible(candidate)) return candidate;
  return std::nullopt;
}

}  // namespace

Hamiltonian experiment_hamiltonian(const ExperimentSpec& spec, const std::optional<DistanceMatrix>& delta) {
  if (spec.model == ModelKind::TriadsVsNonEdges)
    return Hamiltonian::max_min(spec.alpha, StatisticSpec::non_edges(), StatisticSpec::triangles());
  if (!delta) throw ModelError("distance_vs_flow needs a distance matrix");
  return Hamiltonian::min_max(spec.alpha, StatisticSpec::physical_distance(*delta), StatisticSpec::flow_distance());
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  if (spec.delta) {
    report.delta = spec.delta->file ? read_distance_matrix(*spec.delta->file)
                                    : DistanceMatrix::random_unit_square(spec.n, spec.delta->seed);
    if (report.delta->size() != spec.n) throw ModelError("distance matrix size does not match n");
  }
  const Hamiltonian h = experiment_hamiltonian(spec, report.delta);
  const Problem problem{spec.n, spec.space, h, std::nullopt};

  BnbOptions options;
  options.node_limit = spec.node_limit;
  options.time_limit = spec.time_limit;

  if (spec.gamma) {
    const ExactMethod method = spec.solver == SolverKind::Brute ? ExactMethod::BruteForce : ExactMethod::BranchAndBound;
    TwoStageResult two = solve_two_stage(spec.n, spec.space, triad_terms(spec.alpha), *spec.gamma, spec.stage1, method,
                                         options);
    report.p_star = two.p_star;
    report.result = std::move(two.stage2);
  } else {
    switch (spec.solver) {
      case SolverKind::Brute: report.result = brute_force(problem).best; break;
      case SolverKind::BranchAndBound:
        options.incumbent = warm_start(spec, problem);
        report.result = branch_and_bound(problem, options);
        break;
      case SolverKind::LocalSearch: {
        SearchConfig cfg;
        cfg.seed = spec.seed;
        cfg.restarts = spec.restarts;
        cfg.start = spec.start;
        cfg.threads = spec.threads;
        report.result = multi_restart(spec.n, h, spec.space, cfg);
        break;
      }
    }
  }
  if (report.result.graph) report.metrics = compute_metrics(*report.result.graph);
  return report;
}

nlohmann::ordered_json report_json(const ExperimentReport& report) {
  const ExperimentSpec& spec = report.spec;
  nlohmann::ordered_json j;
  auto& s = j["spec"];
  s["n"] = spec.n;
  s["model"] = to_string(spec.model);
  s["alpha"] = to_fraction_string(spec.alpha);
  s["space"] = spec.space.describe();
  s["solver"] = to_string(spec.solver);
  s["seed"] = spec.seed;
  if (spec.gamma) {
    s["gamma"] = to_fraction_string(*spec.gamma);
    s["stage1_objective"] = stage1_name(spec.stage1);
  }
  if (spec.delta) {
    if (spec.delta->file)
      s["delta"] = {{"file", spec.delta->file->string()}};
    else
      s["delta"] = {{"random_unit_square_seed", spec.delta->seed}};
  }
  if (spec.solver == SolverKind::LocalSearch) {
    s["restarts"] = spec.restarts;
  } else {
    s["node_limit"] = spec.node_limit;
  }

  const SolveResult& r = report.result;
  j["status"] = to_string(r.status);
  if (r.graph) {
    j["objective"] = number(r.objective);
    const Hamiltonian h = experiment_hamiltonian(spec, report.delta);
    auto& stats = j["statistics"];
    stats = nlohmann::ordered_json::object();
    for (std::size_t t = 0; t < r.statistic_values.size(); ++t)
      stats[to_string(h.terms()[t].statistic.kind)] = number(r.statistic_values[t]);
    auto& edges = j["edges"];
    edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : r.graph->edges()) edges.push_back({a, b});
  } else {
    j["objective"] = nullptr;
  }
  if (report.p_star) j["p_star"] = number(*report.p_star);
  if (report.metrics) {
    const GraphMetrics& m = *report.metrics;
    auto& mj = j["metrics"];
    mj["edges"] = m.edge_count;
    mj["triangles"] = m.triangle_count;
    mj["connected"] = m.connected;
    mj["density"] = to_decimal_string(m.density, 5);
    mj["clustering_coefficient"] = to_decimal_string(m.clustering_coefficient, 5);
    mj["average_local_clustering"] = to_decimal_string(m.average_local_clustering, 5);
    mj["average_path_length"] = m.average_path_length ? nlohmann::ordered_json(to_decimal_string(*m.average_path_length, 5))
                                                      : nlohmann::ordered_json(nullptr);
  }
  auto& t = j["telemetry"];
  t["nodes_explored"] = r.nodes_explored;
  if (r.bound_at_root) t["bound_at_root"] = to_fraction_string(*r.bound_at_root);
  t["wall_time_seconds"] = r.wall_time.count();
  return j;
}

std::string row_label(const ExperimentSpec& spec) { return spec.label.empty() ? short_decimal(spec.alpha) : spec.label; }

std::string metrics_row(const std::string& label, const GraphMetrics& m) {
  const std::string apl = m.average_path_length ? to_decimal_string(*m.average_path_length, 5) : "n/a";
  return label + " & " + to_decimal_string(m.density, 5) + " & " + to_decimal_string(m.clustering_coefficient, 5) +
         " & " + apl + " \\\\";
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (stem + ".json"));
    if (!out) throw std::runtime_error("cannot write " + (dir / (stem + ".json")).string());
    out << report_json(report).dump(2) << '\n';
  }
  if (report.metrics) {
    std::ofstream out(dir / (stem + ".row.txt"));
    out << metrics_row(row_label(report.spec), *report.metrics) << '\n';
  }
  if (report.result.graph) {
    export_dot(*report.result.graph, dir / (stem + ".dot"));
    write_edge_list(*report.result.graph, dir / (stem + ".edges"));
  }
  if (report.delta) {
    std::ofstream out(dir / (stem + ".delta.txt"));
    write_distance_matrix(*report.delta, out);
  }
}

void export_dot(const Graph& g, const std::filesystem::path& path) { write_dot(g, path); }

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return 0;
    case SolveStatus::Incumbent: return 2;
    case SolveStatus::Infeasible: return 3;
  }
  return 1;
}

}  // namespace netopt
