#include "netopt/local_search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "netopt/errors.hpp"

namespace netopt {

void SearchConfig::validate() const {
  if (restarts == 0) throw ModelError("restarts must be >= 1");
  if (max_iterations == 0) throw ModelError("max_iterations must be >= 1");
  if (start == StartKind::Given && !given) throw ModelError("start=given needs a graph");
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
  if (restart == 0) return seed;
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Graph make_start(std::size_t n, const Hamiltonian& h, const SearchConfig& cfg, std::uint64_t seed) {
  switch (cfg.start) {
    case StartKind::Star: return Graph::star(n, 0);
    case StartKind::StarPlusChords: {
      std::size_t chords = 0;
      if (h.alpha() && n >= 2) chords = std::min(prop1(n, *h.alpha()).h, max_chords(n));
      return star_plus_chords(n, chords);
    }
    case StartKind::RandomConnected: {
      std::mt19937_64 rng(seed ^ 0x5DEECE66DULL);
      std::vector<Node> order(n);
      std::iota(order.begin(), order.end(), Node{0});
      std::shuffle(order.begin(), order.end(), rng);
      Graph g(n);
      for (std::size_t k = 1; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> parent(0, k - 1);
        g.set_edge(order[k], order[parent(rng)]);
      }
      const double keep = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
      std::bernoulli_distribution coin(keep);
      for (std::size_t e = 0; e < g.pair_count(); ++e) {
        if (!g.has_edge_at(e) && coin(rng)) g.set_edge_at(e, true);
      }
      return g;
    }
    case StartKind::Given:
      if (!cfg.given) throw ModelError("start=given needs a graph");
      if (cfg.given->node_count() != n) throw ModelError("given start has the wrong node count");
      return *cfg.given;
  }
  throw ModelError("unknown start kind");
}

namespace {

using Clock = std::chrono::steady_clock;

bool needs_connectivity(const Hamiltonian& h, const SampleSpace& space) {
  return space.connected || h.requires_connected();
}

/// Current graph plus cached statistic values; evaluates single toggles
/// incrementally where the statistic allows it.
class ToggleEvaluator {
 public:
  ToggleEvaluator(const Graph& start, const Hamiltonian& h, const SampleSpace& space)
      : h_(h),
        space_(space),
        graph_(start),
        rows_(start),
        values_(statistic_values(h, start)),
        objective_(h.combine(values_)),
        connectivity_(needs_connectivity(h, space)) {}

  const Graph& graph() const { return graph_; }
  const Rational& objective() const { return objective_; }
  const std::vector<Rational>& values() const { return values_; }

  /// Statistic values after toggling pair `index` = (i, j); empty when the
  /// result is undefined (flow distance on a disconnected graph).
  std::optional<std::vector<Rational>> values_after(std::size_t index, Node i, Node j) {
    const bool adding = !graph_.has_edge_at(index);
    std::vector<Rational> next = values_;
    for (std::size_t t = 0; t < next.size(); ++t) {
      const StatisticSpec& s = h_.terms()[t].statistic;
      switch (s.kind) {
        case StatisticKind::NonEdges: next[t] += adding ? -1 : 1; break;
        case StatisticKind::Triangles: {
          const auto common = static_cast<std::int64_t>(rows_.common_neighbors(i, j));
          next[t] += adding ? common : -common;
          break;
        }
        case StatisticKind::PhysicalDistance:
          next[t] += adding ? s.distances->at(i, j) : -s.distances->at(i, j);
          break;
        case StatisticKind::FlowDistance: {
          graph_.toggle_edge_at(index);
          try {
            next[t] = static_cast<std::int64_t>(total_path_length(graph_));
          } catch (const DisconnectedGraphError&) {
            graph_.toggle_edge_at(index);
            return std::nullopt;
          }
          graph_.toggle_edge_at(index);
          break;
        }
      }
    }
    return next;
  }

  bool toggle_feasible(std::size_t index, Node i, Node j) const {
    if (space_.edge_count) return false;  // every toggle changes the edge count
    const bool removing = graph_.has_edge_at(index);
    if (removing && connectivity_) return rows_.reachable(i, j, NodePair{i, j});
    return true;
  }

  void apply(std::size_t index, Node i, Node j, std::vector<Rational> next, const Rational& objective) {
    const bool adding = !graph_.has_edge_at(index);
    graph_.toggle_edge_at(index);
    rows_.set(i, j, adding);
    values_ = std::move(next);
    objective_ = objective;
  }

 private:
  const Hamiltonian& h_;
  const SampleSpace& space_;
  Graph graph_;
  AdjacencyRows rows_;
  std::vector<Rational> values_;
  Rational objective_;
  bool connectivity_;
};

bool start_feasible(const Graph& g, const Hamiltonian& h, const SampleSpace& space) {
  if (!space.contains(g)) return false;
  return !needs_connectivity(h, space) || is_connected(g);
}

}  // namespace

SolveResult first_improve(const Graph& start, const Hamiltonian& h, const SampleSpace& space, const SearchConfig& cfg) {
  cfg.validate();
  if (!start_feasible(start, h, space)) throw ModelError("local search start is infeasible for " + space.describe());
  const auto t0 = Clock::now();
  const std::size_t n = start.node_count();

  std::vector<NodePair> pairs(start.pair_count());
  for (std::size_t e = 0; e < pairs.size(); ++e) pairs[e] = pair_of(e, n);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::mt19937_64 rng(cfg.seed);
  ToggleEvaluator eval(start, h, space);
  std::uint64_t evaluated = 0;
  std::size_t moves = 0;
  bool improved = true;
  while (improved && moves < cfg.max_iterations) {
    improved = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t index : order) {
      const auto [i, j] = pairs[index];
      ++evaluated;
      auto next = eval.values_after(index, i, j);
      if (!next) continue;
      const Rational value = h.combine(*next);
      if (!h.better(value, eval.objective())) continue;
      if (!eval.toggle_feasible(index, i, j)) continue;
      eval.apply(index, i, j, std::move(*next), value);
      ++moves;
      improved = true;
      break;
    }
  }

  SolveResult r;
  r.graph = eval.graph();
  r.statistic_values = eval.values();
  r.objective = eval.objective();
  r.status = SolveStatus::Incumbent;
  r.nodes_explored = evaluated;
  r.wall_time = Clock::now() - t0;
  return r;
}

SolveResult multi_restart(std::size_t n, const Hamiltonian& h, const SampleSpace& space, const SearchConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  std::vector<std::optional<SolveResult>> results(cfg.restarts);

  auto run_one = [&](std::size_t r) {
    SearchConfig local = cfg;
    local.seed = restart_seed(cfg.seed, r);
    results[r] = first_improve(make_start(n, h, cfg, local.seed), h, space, local);
  };

  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.restarts));
  if (workers <= 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < cfg.restarts; r = next++) {
          try {
            run_one(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  SolveResult best = *results.front();
  std::uint64_t evaluated = 0;
  for (const auto& r : results) {
    evaluated += r->nodes_explored;
    const bool tie = r->objective == best.objective && r->graph->lexicographically_less(*best.graph);
    if (h.better(r->objective, best.objective) || tie) best = *r;
  }
  best.nodes_explored = evaluated;
  best.wall_time = Clock::now() - t0;
  return best;
}

bool has_improving_toggle(const Graph& g, const Hamiltonian& h, const SampleSpace& space) {
  const Rational current = eval_hamiltonian(h, g);
  const bool connectivity = needs_connectivity(h, space);
  Graph probe = g;
  for (std::size_t e = 0; e < g.pair_count(); ++e) {
    probe.toggle_edge_at(e);
    const bool feasible = space.contains(probe) && (!connectivity || is_connected(probe));
    if (feasible && h.better(eval_hamiltonian(h, probe), current)) return true;
    probe.toggle_edge_at(e);
  }
  return false;
}

}  // namespace netopt
