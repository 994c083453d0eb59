#include "netopt/exact_solver.hpp"

#include "netopt/errors.hpp"

namespace netopt {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Incumbent: return "incumbent";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

Rational weighted_sum(std::span<const HamiltonianTerm> terms, const Graph& g) {
  Rational sum(0);
  for (const auto& t : terms) sum += t.theta * evaluate(t.statistic, g);
  return sum;
}

bool needs_connectivity(const Problem& p) {
  if (p.space.connected || p.objective.requires_connected()) return true;
  if (p.floor) {
    for (const auto& t : p.floor->terms) {
      if (t.statistic.requires_connected()) return true;
    }
  }
  return false;
}

void fill_result(SolveResult& r, const Problem& p, const Graph& g) {
  r.statistic_values = statistic_values(p.objective, g);
  r.objective = p.objective.combine(r.statistic_values);
  r.graph = g;
}

}  // namespace

bool ValueFloor::satisfied_by(const Graph& g) const { return weighted_sum(terms, g) >= minimum; }

bool Problem::feasible(const Graph& g) const {
  if (g.node_count() != n) return false;
  if (!space.contains(g)) return false;
  if (needs_connectivity(*this) && !is_connected(g)) return false;
  return !floor || floor->satisfied_by(g);
}

// ---------------------------------------------------------------------------
// Brute force

BruteForceResult brute_force(const Problem& problem) {
  const std::size_t n = problem.n;
  if (n == 0) throw ModelError("brute force needs n >= 1");
  if (n > kBruteForceMaxNodes) {
    throw ModelError("brute force is capped at n = " + std::to_string(kBruteForceMaxNodes) + ", got " + std::to_string(n));
  }
  const auto start = Clock::now();
  const std::uint64_t total = std::uint64_t{1} << pair_count(n);
  BruteForceResult out;
  std::optional<Rational> best;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const Graph g = Graph::from_mask(n, mask);
    if (!problem.feasible(g)) continue;
    const Rational value = eval_hamiltonian(problem.objective, g);
    if (!best || problem.objective.better(value, *best)) {
      best = value;
      out.optimizers.clear();
    }
    if (value == *best) out.optimizers.push_back(g);
  }
  out.best.nodes_explored = total;
  if (best) {
    fill_result(out.best, problem, out.optimizers.front());
    out.best.status = SolveStatus::Optimal;
    out.best.bound_at_root = best;
  }
  out.best.wall_time = Clock::now() - start;
  return out;
}

// ---------------------------------------------------------------------------
// Lower bounds on triangles and edges of an optimum

Prop1Bound prop1(std::size_t n, const Rational& alpha) {
  if (n < 2) throw ModelError("prop1 needs n >= 2");
  validate_alpha(alpha);
  const Rational raw = alpha * static_cast<std::int64_t>((n - 2) * (n - 1)) / 2;
  // edge counts are integral: floor the fractional bound
  const auto floored = static_cast<std::size_t>(raw.numerator() / raw.denominator());
  Prop1Bound b;
  b.h = std::min(n - 1, floored);
  b.min_edges = (n - 1) + b.h;
  return b;
}

std::size_t max_chords(std::size_t n) {
  const std::size_t leaves = n == 0 ? 0 : n - 1;
  if (leaves >= 3) return leaves;
  return leaves == 2 ? 1 : 0;
}

Graph star_plus_chords(std::size_t n, std::size_t h) {
  if (h > max_chords(n)) {
    throw ModelError("star on " + std::to_string(n) + " nodes has room for " + std::to_string(max_chords(n)) +
                     " chords, requested " + std::to_string(h));
  }
  Graph g = Graph::star(n, 0);
  const std::size_t leaves = n - 1;
  for (std::size_t c = 0; c < h; ++c) {
    if (c + 1 < leaves) {
      g.set_edge(c + 1, c + 2);
    } else {
      g.set_edge(1, leaves);
    }
  }
  return g;
}

Rational star_plus_chords_guarantee(std::size_t n, const Rational& alpha, std::size_t h) {
  const auto hh = static_cast<std::int64_t>(h);
  const auto spare = static_cast<std::int64_t>(pair_count(n)) - static_cast<std::int64_t>(n - 1) - hh;
  return rational_min((1 - alpha) * hh, alpha * spare);
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

struct Interval {
  Rational lo;
  Rational hi;
};

/// Range of a statistic over all graphs between `lower` (decided-present
/// pairs only) and `upper` (every undecided pair present).
Interval statistic_range(const StatisticSpec& spec, const Graph& lower, const Graph& upper,
                         const AdjacencyRows& lower_rows, const AdjacencyRows& upper_rows) {
  const std::size_t n = lower.node_count();
  const auto N = static_cast<std::int64_t>(pair_count(n));
  switch (spec.kind) {
    case StatisticKind::NonEdges:
      return {Rational(N - static_cast<std::int64_t>(upper.edge_count())),
              Rational(N - static_cast<std::int64_t>(lower.edge_count()))};
    case StatisticKind::Triangles:
      return {Rational(static_cast<std::int64_t>(lower_rows.triangle_count())),
              Rational(static_cast<std::int64_t>(upper_rows.triangle_count()))};
    case StatisticKind::PhysicalDistance:
      return {s_physical_distance(lower, *spec.distances), s_physical_distance(upper, *spec.distances)};
    case StatisticKind::FlowDistance: {
      // every ordered pair is at distance >= 1 and, when connected, <= n - 1
      const auto ordered = static_cast<std::int64_t>(n * (n - 1));
      Rational lo(ordered);
      Rational hi(ordered * static_cast<std::int64_t>(n > 1 ? n - 1 : 0));
      if (upper_rows.connected()) lo = static_cast<std::int64_t>(total_path_length(upper));
      if (lower_rows.connected()) hi = static_cast<std::int64_t>(total_path_length(lower));
      return {lo, hi};
    }
  }
  throw ModelError("unknown statistic");
}

Interval weighted(const Rational& theta, const Interval& r) {
  if (theta >= 0) return {theta * r.lo, theta * r.hi};
  return {theta * r.hi, theta * r.lo};
}

struct NodeBounds {
  Rational objective;  // optimistic in the objective's sense
  std::optional<Rational> floor_upper;
};

NodeBounds node_bounds(const Problem& p, const Graph& lower, const Graph& upper, const AdjacencyRows& lower_rows,
                       const AdjacencyRows& upper_rows) {
  const Hamiltonian& h = p.objective;
  const bool maximize = h.sense() == Sense::Maximize;
  std::optional<Rational> value;
  for (const auto& t : h.terms()) {
    const Interval w = weighted(t.theta, statistic_range(t.statistic, lower, upper, lower_rows, upper_rows));
    const Rational& optimistic = maximize ? w.hi : w.lo;
    if (!value) {
      value = optimistic;
    } else if (h.form() == HamiltonianForm::Linear) {
      *value += optimistic;
    } else {
      // max-min keeps the smallest optimistic term, min-max the largest
      value = maximize ? rational_min(*value, optimistic) : rational_max(*value, optimistic);
    }
  }
  NodeBounds b{*value, std::nullopt};
  if (p.floor) {
    Rational sum(0);
    for (const auto& t : p.floor->terms) {
      sum += weighted(t.theta, statistic_range(t.statistic, lower, upper, lower_rows, upper_rows)).hi;
    }
    b.floor_upper = sum;
  }
  return b;
}

class BranchAndBound {
 public:
  BranchAndBound(const Problem& problem, const BnbOptions& options)
      : p_(problem),
        options_(options),
        n_(problem.n),
        pairs_(pair_count(problem.n)),
        state_(pairs_, PairState::Undecided),
        lower_(problem.n),
        upper_(Graph::complete(problem.n)),
        lower_rows_(lower_),
        upper_rows_(upper_),
        connectivity_(needs_connectivity(problem)) {}

  SolveResult run() {
    start_ = Clock::now();
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(options_.time_limit);
    if (options_.incumbent) {
      if (!p_.feasible(*options_.incumbent)) throw ModelError("supplied incumbent is infeasible");
      best_graph_ = *options_.incumbent;
      best_value_ = eval_hamiltonian(p_.objective, *best_graph_);
    }
    search(0);

    SolveResult r;
    r.nodes_explored = nodes_;
    r.bound_at_root = root_bound_;
    if (best_graph_) fill_result(r, p_, *best_graph_);
    if (aborted_) {
      r.status = SolveStatus::Incumbent;
    } else {
      r.status = best_graph_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    }
    r.wall_time = Clock::now() - start_;
    return r;
  }

 private:
  bool out_of_budget() {
    if (nodes_ >= options_.node_limit) return true;
    return (nodes_ % 256 == 0) && Clock::now() > deadline_;
  }

  void search(std::size_t depth) {
    if (aborted_) return;
    if (out_of_budget()) {
      aborted_ = true;
      return;
    }
    ++nodes_;

    if (p_.space.edge_count) {
      const std::size_t target = *p_.space.edge_count;
      if (present_ > target || present_ + (pairs_ - depth) < target) return;
    }
    if (connectivity_ && !upper_rows_.connected()) return;

    const NodeBounds b = node_bounds(p_, lower_, upper_, lower_rows_, upper_rows_);
    if (depth == 0) root_bound_ = b.objective;
    if (b.floor_upper && *b.floor_upper < p_.floor->minimum) return;
    if (best_value_ && !p_.objective.better(b.objective, *best_value_)) return;

    if (depth == pairs_) {
      if (!p_.feasible(lower_)) return;
      const Rational value = eval_hamiltonian(p_.objective, lower_);
      if (!best_value_ || p_.objective.better(value, *best_value_)) {
        best_value_ = value;
        best_graph_ = lower_;
      }
      return;
    }

    const auto [i, j] = pair_of(depth, n_);

    state_[depth] = PairState::Present;
    lower_.set_edge_at(depth, true);
    lower_rows_.set(i, j, true);
    ++present_;
    search(depth + 1);
    --present_;
    lower_rows_.set(i, j, false);
    lower_.set_edge_at(depth, false);

    state_[depth] = PairState::Absent;
    upper_.set_edge_at(depth, false);
    upper_rows_.set(i, j, false);
    search(depth + 1);
    upper_rows_.set(i, j, true);
    upper_.set_edge_at(depth, true);

    state_[depth] = PairState::Undecided;
  }

  const Problem& p_;
  const BnbOptions& options_;
  std::size_t n_;
  std::size_t pairs_;
  std::vector<PairState> state_;
  Graph lower_;
  Graph upper_;
  AdjacencyRows lower_rows_;
  AdjacencyRows upper_rows_;
  bool connectivity_;
  std::size_t present_ = 0;

  std::optional<Rational> best_value_;
  std::optional<Graph> best_graph_;
  std::optional<Rational> root_bound_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  Clock::time_point start_;
  Clock::time_point deadline_;
};

}  // namespace

Rational optimistic_bound(const Problem& problem, std::span<const PairState> partial) {
  const std::size_t n = problem.n;
  if (partial.size() != pair_count(n)) throw ModelError("partial assignment has the wrong length");
  Graph lower(n);
  Graph upper(n);
  for (std::size_t e = 0; e < partial.size(); ++e) {
    lower.set_edge_at(e, partial[e] == PairState::Present);
    upper.set_edge_at(e, partial[e] != PairState::Absent);
  }
  return node_bounds(problem, lower, upper, AdjacencyRows(lower), AdjacencyRows(upper)).objective;
}

SolveResult branch_and_bound(const Problem& problem, const BnbOptions& options) {
  if (problem.n == 0) throw ModelError("branch and bound needs n >= 1");
  if (options.incumbent && options.incumbent->node_count() != problem.n) {
    throw ModelError("incumbent has the wrong node count");
  }
  return BranchAndBound(problem, options).run();
}

// ---------------------------------------------------------------------------
// Two-stage robust solve

namespace {

SolveResult solve_exact(const Problem& p, ExactMethod method, const BnbOptions& options) {
  if (method == ExactMethod::BruteForce) return brute_force(p).best;
  return branch_and_bound(p, options);
}

}  // namespace

TwoStageResult solve_two_stage(std::size_t n, const SampleSpace& space, const std::vector<HamiltonianTerm>& terms,
                               const Rational& gamma, Stage1Objective stage1, ExactMethod method,
                               const BnbOptions& options) {
  if (gamma < 0 || gamma > 1) throw ModelError("gamma must lie in [0, 1], got " + to_fraction_string(gamma));
  const Hamiltonian first = stage1 == Stage1Objective::Linear ? Hamiltonian::linear(terms) : Hamiltonian::max_min(terms);
  const Problem stage1_problem{n, space, first, std::nullopt};

  TwoStageResult out{Rational(0), stage1, solve_exact(stage1_problem, method, options), {}};
  if (out.stage1.status != SolveStatus::Optimal) {
    // P* must be the true optimum; anything else propagates
    out.stage2.status = out.stage1.status;
    return out;
  }
  out.p_star = out.stage1.objective;

  Problem stage2_problem{n, space, Hamiltonian::max_min(terms), ValueFloor{terms, gamma * out.p_star}};
  BnbOptions stage2_options = options;
  stage2_options.incumbent.reset();
  if (out.stage1.graph && stage2_problem.feasible(*out.stage1.graph)) stage2_options.incumbent = out.stage1.graph;
  out.stage2 = solve_exact(stage2_problem, method, stage2_options);
  return out;
}

}  // namespace netopt
