#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "netopt/errors.hpp"
#include "netopt/exact_solver.hpp"
#include "oracles.hpp"

using netopt::Graph;
using netopt::Hamiltonian;
using netopt::PairState;
using netopt::Problem;
using netopt::Rational;
using netopt::SampleSpace;
using netopt::SolveStatus;
using netopt::StatisticSpec;

namespace {

Hamiltonian triads(const Rational& alpha) {
  return Hamiltonian::max_min(alpha, StatisticSpec::non_edges(), StatisticSpec::triangles());
}

Problem connected_problem(std::size_t n, const Rational& alpha) {
  return Problem{n, SampleSpace::connected_graphs(), triads(alpha), std::nullopt};
}

struct Fixture {
  std::size_t n;
  Rational alpha;
  Rational optimum;
  std::size_t optimizers;
};

// Independent enumeration, frozen.
const std::vector<Fixture> kOptima = {
    {4, Rational(3, 10), Rational(3, 5), 12},    {4, Rational(1, 2), Rational(1, 2), 18},
    {4, Rational(7, 10), Rational(3, 5), 6},     {4, Rational(1, 10), Rational(1, 5), 0},
    {5, Rational(3, 10), Rational(6, 5), 135},   {5, Rational(1, 2), Rational(3, 2), 90},
    {5, Rational(7, 10), Rational(7, 5), 30},    {5, Rational(1, 10), Rational(1, 2), 0},
    {6, Rational(3, 10), Rational(21, 10), 2820}, {6, Rational(1, 2), Rational(5, 2), 3312},
    {6, Rational(7, 10), Rational(14, 5), 30},   {6, Rational(1, 10), Rational(9, 10), 0},
};

}  // namespace

TEST(BruteForce, FrozenOptima) {
  for (const auto& f : kOptima) {
    const auto r = netopt::brute_force(connected_problem(f.n, f.alpha));
    EXPECT_EQ(r.best.status, SolveStatus::Optimal);
    EXPECT_EQ(r.best.objective, f.optimum) << f.n << " " << f.alpha;
    if (f.optimizers != 0) EXPECT_EQ(r.optimizers.size(), f.optimizers) << f.n << " " << f.alpha;
    EXPECT_EQ(netopt::eval_hamiltonian(triads(f.alpha), *r.best.graph), r.best.objective);
  }
}

TEST(BruteForce, AgreesWithIndependentOracle) {
  for (std::size_t n = 3; n <= 5; ++n)
    for (const Rational alpha : {Rational(1, 5), Rational(2, 3)})
      EXPECT_EQ(netopt::brute_force(connected_problem(n, alpha)).best.objective, oracle::maxmin_optimum(n, alpha));
}

TEST(BruteForce, TrivialSpaces) {
  const auto k3 = netopt::brute_force(Problem{3, SampleSpace::fixed_density(3), triads(Rational(1, 2)), std::nullopt});
  EXPECT_EQ(*k3.best.graph, Graph::complete(3));
  EXPECT_EQ(k3.best.objective, Rational(0));
  const auto edge = netopt::brute_force(connected_problem(2, Rational(1, 2)));
  EXPECT_EQ(*edge.best.graph, Graph::complete(2));
  EXPECT_EQ(edge.best.objective, Rational(0));
  const auto none = netopt::brute_force(Problem{5, SampleSpace::fixed_density(2, true), triads(Rational(1, 2)), std::nullopt});
  EXPECT_EQ(none.best.status, SolveStatus::Infeasible);
  EXPECT_FALSE(none.best.graph.has_value());
  EXPECT_THROW(netopt::brute_force(connected_problem(8, Rational(1, 2))), netopt::ModelError);
}

TEST(BruteForce, AlphaExtremesFollowTheZeroWeightRow) {
  for (std::size_t n = 3; n <= 6; ++n) {
    EXPECT_EQ(netopt::brute_force(connected_problem(n, Rational(0))).best.objective, Rational(0));
    EXPECT_EQ(netopt::brute_force(connected_problem(n, Rational(1))).best.objective, Rational(0));
  }
}

TEST(Prop1, Values) {
  auto b = netopt::prop1(60, Rational(7, 10));
  EXPECT_EQ(b.h, 59U);
  EXPECT_EQ(b.min_edges, 118U);
  b = netopt::prop1(10, Rational(0));
  EXPECT_EQ(b.h, 0U);
  EXPECT_EQ(b.min_edges, 9U);
  b = netopt::prop1(4, Rational(1, 10));
  EXPECT_EQ(b.h, 0U);
  EXPECT_EQ(b.min_edges, 3U);
  EXPECT_EQ(netopt::prop1(5, Rational(1, 2)).h, 3U);  // floor(1/2 * 3 * 4 / 2) = 3
}

TEST(Prop1, HoldsForEveryOptimumAtOracleScale) {
  for (std::size_t n = 4; n <= 6; ++n) {
    for (const Rational alpha : {Rational(1, 10), Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
      const auto bound = netopt::prop1(n, alpha);
      bool some_meets_edge_bound = false;
      for (const Graph& g : netopt::brute_force(connected_problem(n, alpha)).optimizers) {
        ASSERT_GE(netopt::count_triangles(g), bound.h);
        some_meets_edge_bound = some_meets_edge_bound || g.edge_count() >= bound.min_edges;
      }
      EXPECT_TRUE(some_meets_edge_bound) << "n=" << n << " alpha=" << netopt::to_fraction_string(alpha);
    }
  }
}

TEST(Prop1, EdgeBoundIsNotUniversalOverOptima) {
  // n=6, alpha=1/2: 9 edges with 5 triangles gives min(6/2, 5/2) = 5/2, the optimum.
  const auto bound = netopt::prop1(6, Rational(1, 2));
  ASSERT_EQ(bound.min_edges, 10U);
  const auto all = netopt::brute_force(connected_problem(6, Rational(1, 2)));
  ASSERT_EQ(all.best.objective, Rational(5, 2));
  const auto below = std::count_if(all.optimizers.begin(), all.optimizers.end(),
                                   [&](const Graph& g) { return g.edge_count() < bound.min_edges; });
  EXPECT_GT(below, 0);
}

TEST(StarPlusChords, Construction) {
  EXPECT_EQ(netopt::star_plus_chords(5, 0), Graph::star(5));
  const Graph g = netopt::star_plus_chords(5, 2);
  EXPECT_EQ(g.edge_count(), 6U);
  EXPECT_EQ(netopt::count_triangles(g), 2U);
  const Graph big = netopt::star_plus_chords(60, 59);
  EXPECT_TRUE(netopt::is_connected(big));
  EXPECT_EQ(big.edge_count(), 118U);
  EXPECT_GE(netopt::count_triangles(big), 59U);
  EXPECT_EQ(netopt::max_chords(3), 1U);
  EXPECT_EQ(netopt::max_chords(2), 0U);
  EXPECT_THROW(netopt::star_plus_chords(5, 5), netopt::ModelError);
  EXPECT_THROW(netopt::star_plus_chords(3, 2), netopt::ModelError);
}

TEST(StarPlusChords, MeetsItsGuarantee) {
  for (std::size_t n = 3; n <= 30; ++n) {
    for (const Rational alpha : {Rational(1, 10), Rational(3, 10), Rational(1, 2), Rational(7, 10), Rational(9, 10)}) {
      const std::size_t h = std::min(netopt::prop1(n, alpha).h, netopt::max_chords(n));
      const Graph g = netopt::star_plus_chords(n, h);
      ASSERT_TRUE(netopt::is_connected(g));
      ASSERT_GE(netopt::eval_hamiltonian(triads(alpha), g), netopt::star_plus_chords_guarantee(n, alpha, h));
    }
  }
}

TEST(BranchAndBound, MatchesBruteForceOnTheGrid) {
  for (std::size_t n = 4; n <= 6; ++n) {
    for (const Rational alpha : {Rational(1, 10), Rational(3, 10), Rational(1, 2), Rational(7, 10), Rational(1)}) {
      const Problem p = connected_problem(n, alpha);
      const auto bnb = netopt::branch_and_bound(p);
      ASSERT_EQ(bnb.status, SolveStatus::Optimal);
      EXPECT_EQ(bnb.objective, netopt::brute_force(p).best.objective) << n << " " << alpha;
      EXPECT_TRUE(p.feasible(*bnb.graph));
      EXPECT_EQ(netopt::eval_hamiltonian(p.objective, *bnb.graph), bnb.objective);
    }
  }
}

TEST(BranchAndBound, SmallSearchTreeAtFiveNodes) {
  const auto r = netopt::branch_and_bound(connected_problem(5, Rational(1, 2)));
  EXPECT_EQ(r.objective, Rational(3, 2));
  EXPECT_LT(r.nodes_explored, 1024U);
}

TEST(BranchAndBound, OtherSpacesAndObjectives) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 4 + rng() % 3;
    const std::size_t d = rng() % (netopt::pair_count(n) + 1);
    const SampleSpace space = SampleSpace::fixed_density(d, rng() % 2 == 0);
    const Problem p{n, space, triads(Rational(static_cast<std::int64_t>(rng() % 9 + 1), 10)), std::nullopt};
    const auto brute = netopt::brute_force(p).best;
    const auto bnb = netopt::branch_and_bound(p);
    ASSERT_EQ(bnb.status, brute.status);
    if (brute.graph) EXPECT_EQ(bnb.objective, brute.objective);
  }
  // Linear objective with a negative weight, and the min-max distance model.
  const Problem linear{5, SampleSpace::all(),
                       Hamiltonian::linear({{Rational(-1, 2), StatisticSpec::non_edges()}, {2, StatisticSpec::triangles()}}),
                       std::nullopt};
  EXPECT_EQ(netopt::branch_and_bound(linear).objective, netopt::brute_force(linear).best.objective);
  const Problem dist{4, SampleSpace::connected_graphs(),
                     Hamiltonian::min_max(Rational(1, 2), StatisticSpec::physical_distance(netopt::DistanceMatrix::uniform(4, 1)),
                                          StatisticSpec::flow_distance()),
                     std::nullopt};
  EXPECT_EQ(netopt::brute_force(dist).best.objective, Rational(6));
  EXPECT_EQ(netopt::branch_and_bound(dist).objective, Rational(6));
  const auto delta = netopt::DistanceMatrix::random_unit_square(6, 9);
  for (const Rational alpha : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) {
    const Problem random{6, SampleSpace::connected_graphs(),
                         Hamiltonian::min_max(alpha, StatisticSpec::physical_distance(delta), StatisticSpec::flow_distance()),
                         std::nullopt};
    EXPECT_EQ(netopt::branch_and_bound(random).objective, netopt::brute_force(random).best.objective);
  }
}

TEST(BranchAndBound, DistanceVsFlowFrozenValues) {
  const auto unit = netopt::DistanceMatrix::uniform(4, 1);
  const std::vector<std::pair<Rational, Rational>> expected{
      {Rational(1, 2), Rational(6)}, {Rational(3, 10), Rational(42, 5)}, {Rational(7, 10), Rational(21, 5)}};
  for (const auto& [alpha, value] : expected) {
    const Problem p{4, SampleSpace::connected_graphs(),
                    Hamiltonian::min_max(alpha, StatisticSpec::physical_distance(unit), StatisticSpec::flow_distance()),
                    std::nullopt};
    EXPECT_EQ(netopt::brute_force(p).best.objective, value);
  }
}

TEST(BranchAndBound, BoundIsAdmissible) {
  // Random partial assignments at n = 5: the bound dominates every completion.
  std::mt19937_64 rng(11);
  for (const Rational alpha : {Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
    const Problem p{5, SampleSpace::all(), triads(alpha), std::nullopt};
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<PairState> partial(10);
      for (auto& s : partial) s = static_cast<PairState>(static_cast<int>(rng() % 3) - 1);
      const Rational bound = netopt::optimistic_bound(p, partial);
      oracle::for_each_graph(5, [&](const Graph& g) {
        for (std::size_t e = 0; e < 10; ++e)
          if (partial[e] != PairState::Undecided && g.has_edge_at(e) != (partial[e] == PairState::Present)) return;
        ASSERT_LE(netopt::eval_hamiltonian(p.objective, g), bound);
      });
    }
  }
}

TEST(BranchAndBound, WarmStartNeverCostsNodes) {
  for (const Rational alpha : {Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
    const Problem p = connected_problem(6, alpha);
    const auto cold = netopt::branch_and_bound(p);
    netopt::BnbOptions warm;
    warm.incumbent = netopt::star_plus_chords(6, std::min(netopt::prop1(6, alpha).h, netopt::max_chords(6)));
    const auto hot = netopt::branch_and_bound(p, warm);
    EXPECT_EQ(hot.objective, cold.objective);
    EXPECT_LE(hot.nodes_explored, cold.nodes_explored) << alpha;
  }
}

TEST(BranchAndBound, LimitsYieldIncumbent) {
  netopt::BnbOptions options;
  options.node_limit = 5;
  options.incumbent = Graph::star(7);
  const auto r = netopt::branch_and_bound(connected_problem(7, Rational(1, 2)), options);
  EXPECT_EQ(r.status, SolveStatus::Incumbent);
  ASSERT_TRUE(r.graph.has_value());
  EXPECT_TRUE(netopt::is_connected(*r.graph));

  netopt::BnbOptions bad;
  bad.incumbent = Graph(7);
  EXPECT_THROW(netopt::branch_and_bound(connected_problem(7, Rational(1, 2)), bad), netopt::ModelError);
}

TEST(BranchAndBound, InfeasibleSpace) {
  const auto r =
      netopt::branch_and_bound(Problem{5, SampleSpace::fixed_density(3, true), triads(Rational(1, 2)), std::nullopt});
  EXPECT_EQ(r.status, SolveStatus::Infeasible);
}

TEST(TwoStage, GammaZeroEqualsMaxMin) {
  const std::vector<netopt::HamiltonianTerm> terms{{Rational(1, 2), StatisticSpec::non_edges()},
                                                   {Rational(1, 2), StatisticSpec::triangles()}};
  const auto r = netopt::solve_two_stage(5, SampleSpace::connected_graphs(), terms, Rational(0));
  EXPECT_EQ(r.stage2.objective, Rational(3, 2));
  EXPECT_EQ(r.stage2.status, SolveStatus::Optimal);
}

TEST(TwoStage, GammaOnePicksTheBestMinAmongLinearOptima) {
  // theta = (4/7, 3/7) at n = 4 ties every spanning tree with K4 at 12/7; brute force both stages.
  const std::vector<netopt::HamiltonianTerm> terms{{Rational(4, 7), StatisticSpec::non_edges()},
                                                   {Rational(3, 7), StatisticSpec::triangles()}};
  const auto linear = Hamiltonian::linear(terms);
  const auto maxmin = Hamiltonian::max_min(terms);
  Rational p_star = -1;
  oracle::for_each_graph(4, [&](const Graph& g) {
    if (netopt::is_connected(g)) p_star = netopt::rational_max(p_star, netopt::eval_hamiltonian(linear, g));
  });
  Rational expected = -1;
  std::size_t linear_optima = 0;
  oracle::for_each_graph(4, [&](const Graph& g) {
    if (!netopt::is_connected(g) || netopt::eval_hamiltonian(linear, g) != p_star) return;
    ++linear_optima;
    expected = netopt::rational_max(expected, netopt::eval_hamiltonian(maxmin, g));
  });
  ASSERT_EQ(linear_optima, 17U);
  ASSERT_EQ(p_star, Rational(12, 7));
  for (auto method : {netopt::ExactMethod::BruteForce, netopt::ExactMethod::BranchAndBound}) {
    const auto r = netopt::solve_two_stage(4, SampleSpace::connected_graphs(), terms, Rational(1),
                                           netopt::Stage1Objective::Linear, method);
    EXPECT_EQ(r.p_star, p_star);
    EXPECT_EQ(r.stage2.objective, expected);
    EXPECT_EQ(netopt::eval_hamiltonian(linear, *r.stage2.graph), p_star);
  }
  // Stage-2 optimum is at least the stage-1 min-term value.
  const auto maxmin_stage1 = netopt::solve_two_stage(4, SampleSpace::connected_graphs(), terms, Rational(1),
                                                     netopt::Stage1Objective::MaxMin);
  EXPECT_GE(maxmin_stage1.stage2.objective, netopt::eval_hamiltonian(maxmin, *maxmin_stage1.stage1.graph));
}

TEST(TwoStage, SingleStatisticStagesCoincide) {
  const std::vector<netopt::HamiltonianTerm> terms{{Rational(1), StatisticSpec::triangles()}};
  const auto r = netopt::solve_two_stage(5, SampleSpace::fixed_density(6), terms, Rational(1));
  EXPECT_EQ(r.stage1.objective, r.stage2.objective);
  EXPECT_EQ(r.p_star, r.stage1.objective);
}

TEST(TwoStage, RejectsBadGamma) {
  const std::vector<netopt::HamiltonianTerm> terms{{Rational(1), StatisticSpec::triangles()}};
  EXPECT_THROW(netopt::solve_two_stage(4, SampleSpace::all(), terms, Rational(2)), netopt::ModelError);
}
