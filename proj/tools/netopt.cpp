// netopt: command-line front end for the graph Hamiltonian optimizers.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "netopt/errors.hpp"
#include "netopt/graph_io.hpp"
#include "netopt/lp_builder.hpp"
#include "netopt/report.hpp"

namespace {

using namespace netopt;

constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 4;

struct CommonOptions {
  std::size_t n = 0;
  std::string alpha = "1/2";
  std::string space = "connected";
  std::string model = "triads";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> delta_file;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_model = true) {
  cmd->add_option("--n", o.n, "Number of nodes")->required()->check(CLI::Range(1, 100000));
  cmd->add_option("--alpha", o.alpha, "Weight alpha as p/q or decimal")->capture_default_str();
  cmd->add_option("--space", o.space, "connected | all | density=D | connected,density=D")->capture_default_str();
  if (with_model) {
    cmd->add_option("--model", o.model, "triads | distance")->capture_default_str();
    cmd->add_option("--delta-file", o.delta_file, "Distance matrix for the distance model");
  }
  cmd->add_option("--seed", o.seed, "Seed (falls back to NETOPT_SEED, then 0)");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NETOPT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ModelError("NETOPT_SEED is not an unsigned integer");
  }
  return 0;
}

ExperimentSpec base_spec(const CommonOptions& o) {
  ExperimentSpec spec;
  spec.n = o.n;
  spec.alpha = parse_rational(o.alpha);
  spec.space = parse_space(o.space);
  spec.model = parse_model(o.model);
  spec.seed = resolve_seed(o.seed);
  if (spec.model == ModelKind::DistanceVsFlow) {
    DeltaSource source;
    if (o.delta_file) source.file = *o.delta_file;
    source.seed = spec.seed;
    spec.delta = source;
  } else if (o.delta_file) {
    throw ModelError("--delta-file only applies to the distance model");
  }
  return spec;
}

DistanceMatrix load_delta(const ExperimentSpec& spec) {
  return spec.delta->file ? read_distance_matrix(*spec.delta->file)
                          : DistanceMatrix::random_unit_square(spec.n, spec.delta->seed);
}

int emit(const ExperimentReport& report, const std::optional<std::string>& out_dir, const std::string& stem) {
  if (out_dir) {
    write_report(report, *out_dir, stem);
    std::cout << to_string(report.result.status);
    if (report.result.graph) std::cout << ' ' << to_fraction_string(report.result.objective);
    std::cout << '\n';
    if (report.metrics) {
      std::cout << metrics_row(row_label(report.spec), *report.metrics) << '\n';
    }
  } else {
    std::cout << report_json(report).dump(2) << '\n';
  }
  return exit_code(report.result.status);
}

ConstraintSystem build_model(const ExperimentSpec& spec) {
  if (spec.model == ModelKind::TriadsVsNonEdges) return build_maxmin(spec.n, spec.alpha, spec.space);
  return build_minmax_distance_flow(spec.n, spec.alpha, load_delta(spec), spec.space);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and heuristic optimization of graph Hamiltonians"};
  app.require_subcommand(1);

  // bound
  CommonOptions bound_o;
  auto* bound = app.add_subcommand("bound", "Triangle and edge lower bounds for the triads model");
  add_common(bound, bound_o, false);

  // solve / heuristic
  CommonOptions solve_o;
  std::string solver = "bnb";
  std::optional<std::string> gamma, out_dir;
  std::string stage1 = "linear", label;
  std::uint64_t node_limit = 10'000'000;
  double time_limit = 300.0;
  auto* solve = app.add_subcommand("solve", "Exact solve (brute force or branch and bound)");
  add_common(solve, solve_o);
  solve->add_option("--solver", solver, "brute | bnb")->capture_default_str();
  solve->add_option("--gamma", gamma, "Robust second stage with floor gamma * P*");
  solve->add_option("--stage1", stage1, "Objective defining P*: linear | max_min")->capture_default_str();
  solve->add_option("--node-limit", node_limit)->capture_default_str();
  solve->add_option("--time-limit", time_limit, "Seconds")->capture_default_str();
  solve->add_option("--out-dir", out_dir, "Write JSON, table row, DOT and edge list here");
  solve->add_option("--label", label, "First column of the table row");
  std::string solve_stem = "solve";
  solve->add_option("--stem", solve_stem, "File name stem inside --out-dir")->capture_default_str();

  CommonOptions heur_o;
  std::size_t restarts = 10;
  std::string start = "random_connected";
  unsigned threads = 0;
  std::optional<std::string> heur_out;
  std::string heur_label;
  auto* heuristic = app.add_subcommand("heuristic", "Multi-restart first-improve local search");
  add_common(heuristic, heur_o);
  heuristic->add_option("--restarts", restarts)->capture_default_str();
  heuristic->add_option("--start", start, "star | star_plus_chords | random_connected")->capture_default_str();
  heuristic->add_option("--threads", threads, "0 uses every core")->capture_default_str();
  heuristic->add_option("--out-dir", heur_out, "Write JSON, table row, DOT and edge list here");
  heuristic->add_option("--label", heur_label, "First column of the table row");
  std::string heur_stem = "heuristic";
  heuristic->add_option("--stem", heur_stem, "File name stem inside --out-dir")->capture_default_str();

  // export-lp
  CommonOptions lp_o;
  std::string format = "lp";
  std::optional<std::string> lp_out, lp_gamma, lp_pstar;
  auto* export_cmd = app.add_subcommand("export-lp", "Write the mixed-integer model");
  add_common(export_cmd, lp_o);
  export_cmd->add_option("--format", format, "lp | json")->capture_default_str();
  export_cmd->add_option("--gamma", lp_gamma, "Export the robust second stage (needs --p-star)");
  export_cmd->add_option("--p-star", lp_pstar, "Stage-one optimum for the robust row");
  export_cmd->add_option("--output,-o", lp_out, "File (stdout when absent)");

  // metrics
  std::string graph_file, metrics_label = "graph";
  auto* metrics = app.add_subcommand("metrics", "Density, clustering coefficient and average path length");
  metrics->add_option("graph", graph_file, "Edge list or DOT file")->required()->check(CLI::ExistingFile);
  metrics->add_option("--label", metrics_label)->capture_default_str();

  // check
  CommonOptions check_o;
  std::optional<std::string> assignment_file, check_graph;
  auto* check = app.add_subcommand("check", "Verify an assignment against the model's rows");
  add_common(check, check_o);
  auto* assignment_opt = check->add_option("--assignment", assignment_file, "'name value' lines")->check(CLI::ExistingFile);
  check->add_option("--graph", check_graph, "Check the canonical completion of this edge list instead")
      ->check(CLI::ExistingFile)
      ->excludes(assignment_opt);

  // oracle-compare
  CommonOptions cmp_o;
  auto* compare = app.add_subcommand("oracle-compare", "Branch and bound against brute force");
  add_common(compare, cmp_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bound) {
      const Rational alpha = parse_rational(bound_o.alpha);
      validate_alpha(alpha);
      if (bound_o.n < 2) throw ModelError("bound needs n >= 2");
      const Prop1Bound b = prop1(bound_o.n, alpha);
      const std::size_t chords = std::min(b.h, max_chords(bound_o.n));
      std::cout << "h " << b.h << '\n'
                << "min_edges " << b.min_edges << '\n'
                << "incumbent_chords " << chords << '\n'
                << "incumbent_guarantee " << to_fraction_string(star_plus_chords_guarantee(bound_o.n, alpha, chords))
                << '\n';
      return 0;
    }
    if (*solve) {
      ExperimentSpec spec = base_spec(solve_o);
      spec.solver = parse_solver(solver);
      if (spec.solver == SolverKind::LocalSearch) throw ModelError("use the heuristic subcommand for local search");
      if (gamma) spec.gamma = parse_rational(*gamma);
      if (stage1 == "linear")
        spec.stage1 = Stage1Objective::Linear;
      else if (stage1 == "max_min")
        spec.stage1 = Stage1Objective::MaxMin;
      else
        throw ModelError("--stage1 must be linear or max_min");
      spec.node_limit = node_limit;
      spec.time_limit = std::chrono::duration<double>(time_limit);
      spec.label = label;
      return emit(run_experiment(spec), out_dir, solve_stem);
    }
    if (*heuristic) {
      ExperimentSpec spec = base_spec(heur_o);
      spec.solver = SolverKind::LocalSearch;
      spec.restarts = restarts;
      spec.start = parse_start(start);
      spec.threads = threads;
      spec.label = heur_label;
      return emit(run_experiment(spec), heur_out, heur_stem);
    }
    if (*export_cmd) {
      ExperimentSpec spec = base_spec(lp_o);
      spec.validate();
      ConstraintSystem cs = build_model(spec);
      if (lp_gamma) {
        if (spec.model != ModelKind::TriadsVsNonEdges) throw ModelError("the robust model needs the triads model");
        const std::vector<StatisticSpec> stats{StatisticSpec::non_edges(), StatisticSpec::triangles()};
        const std::vector<Rational> theta{spec.alpha, 1 - spec.alpha};
        std::optional<Rational> p_star;
        if (lp_pstar) p_star = parse_rational(*lp_pstar);
        cs = build_robust_second_stage(build_statistics_model(spec.n, stats, spec.space), theta, p_star,
                                       parse_rational(*lp_gamma));
      }
      const std::string text = format == "json" ? to_json(cs).dump(2) + "\n"
                               : format == "lp" ? to_lp_string(cs)
                                                : throw ModelError("--format must be lp or json");
      if (lp_out) {
        std::ofstream out(*lp_out);
        if (!(out << text)) throw std::runtime_error("cannot write " + *lp_out);
      } else {
        std::cout << text;
      }
      return 0;
    }
    if (*metrics) {
      Graph g(1);
      if (graph_file.ends_with(".dot")) {
        std::ifstream in(graph_file);
        g = read_dot(in);
      } else {
        g = read_edge_list(std::filesystem::path(graph_file));
      }
      std::cout << metrics_row(metrics_label, compute_metrics(g)) << '\n';
      return 0;
    }
    if (*check) {
      ExperimentSpec spec = base_spec(check_o);
      spec.validate();
      const ConstraintSystem cs = build_model(spec);
      Assignment assignment;
      if (assignment_file) {
        std::ifstream in(*assignment_file);
        assignment = read_assignment(in);
      } else if (check_graph) {
        assignment = canonical_assignment(cs, read_edge_list(std::filesystem::path(*check_graph)));
      } else {
        throw ModelError("check needs --assignment or --graph");
      }
      const AssignmentCheck result = check_assignment(cs, assignment);
      for (const auto& v : result.bound_violations) std::cout << "bound " << v.variable << '\n';
      for (const auto& v : result.violations)
        std::cout << "row " << v.row << " lhs " << to_fraction_string(v.lhs) << ' ' << to_string(v.relation) << ' '
                  << to_fraction_string(v.rhs) << '\n';
      for (const auto& w : result.triangle_mismatches) std::cout << "mismatch " << w << '\n';
      std::cout << "objective " << to_fraction_string(result.objective_value) << '\n'
                << (result.feasible() ? "feasible" : "infeasible") << '\n';
      if (!result.semantics_consistent()) std::cout << "inconsistent\n";
      return result.feasible() ? 0 : 3;
    }
    if (*compare) {
      ExperimentSpec spec = base_spec(cmp_o);
      spec.solver = SolverKind::Brute;
      const ExperimentReport brute = run_experiment(spec);
      spec.solver = SolverKind::BranchAndBound;
      const ExperimentReport bnb = run_experiment(spec);
      const auto show = [](const SolveResult& r) {
        return r.graph ? to_fraction_string(r.objective) : std::string("infeasible");
      };
      const bool agree = brute.result.status == bnb.result.status &&
                         (!brute.result.graph || brute.result.objective == bnb.result.objective);
      std::cout << "brute " << show(brute.result) << '\n'
                << "bnb " << show(bnb.result) << " (" << to_string(bnb.result.status) << ", "
                << bnb.result.nodes_explored << " nodes)\n"
                << (agree ? "agree" : "MISMATCH") << '\n';
      return agree ? 0 : kExitMismatch;
    }
  } catch (const std::exception& e) {
    std::cerr << "netopt: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
