#include <gtest/gtest.h>

#include <sstream>

#include "netopt/errors.hpp"
#include "netopt/statistics.hpp"
#include "oracles.hpp"

using netopt::Graph;
using netopt::Hamiltonian;
using netopt::Rational;
using netopt::StatisticSpec;

namespace {

Hamiltonian triads(const Rational& alpha) {
  return Hamiltonian::max_min(alpha, StatisticSpec::non_edges(), StatisticSpec::triangles());
}

}  // namespace

TEST(NonEdges, Examples) {
  EXPECT_EQ(netopt::s_non_edges(Graph::complete(4)), 0U);
  EXPECT_EQ(netopt::s_non_edges(Graph(5)), 10U);
  EXPECT_EQ(netopt::s_non_edges(Graph::star(5)), 6U);
}

TEST(PhysicalDistance, Examples) {
  const auto unit = netopt::DistanceMatrix::uniform(3, 1);
  EXPECT_EQ(netopt::s_physical_distance(Graph(3), unit), Rational(0));
  EXPECT_EQ(netopt::s_physical_distance(Graph::complete(3), unit), Rational(3));

  std::vector<std::vector<Rational>> rows(2, std::vector<Rational>(2));
  rows[0][1] = rows[1][0] = Rational(3, 2);
  const netopt::DistanceMatrix m(rows);
  EXPECT_EQ(netopt::s_physical_distance(Graph::complete(2), m), Rational(3, 2));
  EXPECT_THROW(netopt::s_physical_distance(Graph(4), m), netopt::ModelError);
}

TEST(DistanceMatrix, ValidatesInput) {
  using Rows = std::vector<std::vector<Rational>>;
  EXPECT_THROW(netopt::DistanceMatrix(Rows{{0, 1}, {2, 0}}), netopt::ModelError);  // asymmetric
  EXPECT_THROW(netopt::DistanceMatrix(Rows{{1, 1}, {1, 0}}), netopt::ModelError);  // diagonal
  EXPECT_THROW(netopt::DistanceMatrix(Rows{{0, -1}, {-1, 0}}), netopt::ModelError);
  EXPECT_THROW(netopt::DistanceMatrix(Rows{{0, 1}}), netopt::ModelError);
  std::istringstream asym("2\n0 0.5\n0.4 0\n");
  EXPECT_THROW(netopt::read_distance_matrix(asym), netopt::ParseError);
}

TEST(DistanceMatrix, SeededGeneratorIsReproducibleAndRoundTrips) {
  const auto a = netopt::DistanceMatrix::random_unit_square(12, 5);
  EXPECT_EQ(a, netopt::DistanceMatrix::random_unit_square(12, 5));
  EXPECT_FALSE(a == netopt::DistanceMatrix::random_unit_square(12, 6));
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      EXPECT_EQ((a.at(i, j) * 1'000'000).denominator(), 1);
      EXPECT_LE(a.at(i, j), Rational(1415, 1000));
    }
  }
  std::stringstream s;
  netopt::write_distance_matrix(a, s);
  EXPECT_EQ(netopt::read_distance_matrix(s), a);
}

TEST(FlowDistance, Examples) {
  EXPECT_EQ(netopt::s_flow_distance(Graph::complete(4)), 12U);
  EXPECT_EQ(netopt::s_flow_distance(Graph::path(3)), 8U);
  EXPECT_EQ(netopt::s_flow_distance(Graph::star(5)), 32U);
  EXPECT_THROW(netopt::s_flow_distance(Graph(3)), netopt::DisconnectedGraphError);
}

TEST(FlowDistance, EqualsScaledAveragePathLength) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto ordered = static_cast<std::int64_t>(n * (n - 1));
    oracle::for_each_graph(n, [&](const Graph& g) {
      const auto apl = oracle::average_path_length(oracle::adjacency(g));
      if (!apl) return;
      ASSERT_EQ(Rational(static_cast<std::int64_t>(netopt::s_flow_distance(g))), *apl * ordered);
    });
  }
}

TEST(Hamiltonian, Examples) {
  EXPECT_EQ(netopt::eval_hamiltonian(triads(Rational(1, 2)), Graph::star(5)), Rational(0));
  const Hamiltonian linear = Hamiltonian::linear({{1, StatisticSpec::non_edges()}, {2, StatisticSpec::triangles()}});
  EXPECT_EQ(netopt::eval_hamiltonian(linear, Graph::complete(4)), Rational(8));
  EXPECT_EQ(netopt::eval_hamiltonian(triads(Rational(7, 10)), Graph::complete(4)), Rational(0));
  // K4 minus one edge: S1 = 1, S2 = 2.
  Graph g = Graph::complete(4);
  g.set_edge(0, 1, false);
  EXPECT_EQ(netopt::eval_hamiltonian(triads(Rational(1, 2)), g), Rational(1, 2));
}

TEST(Hamiltonian, MinMaxTakesTheLargerTerm) {
  const Hamiltonian h = Hamiltonian::min_max(Rational(1, 2), StatisticSpec::physical_distance(netopt::DistanceMatrix::uniform(4, 1)),
                                             StatisticSpec::flow_distance());
  EXPECT_EQ(h.sense(), netopt::Sense::Minimize);
  EXPECT_TRUE(h.requires_connected());
  // Star on 4 nodes: 3 edges, flow distance 18.
  EXPECT_EQ(netopt::eval_hamiltonian(h, Graph::star(4)), Rational(9));
  EXPECT_TRUE(h.better(Rational(1), Rational(2)));
}

TEST(Hamiltonian, RejectsInvalidConfigurations) {
  EXPECT_THROW(triads(Rational(11, 10)), netopt::ModelError);
  EXPECT_THROW(triads(Rational(-1, 10)), netopt::ModelError);
  EXPECT_THROW(Hamiltonian::linear({}), netopt::ModelError);
  StatisticSpec no_matrix{netopt::StatisticKind::PhysicalDistance, nullptr};
  EXPECT_THROW(Hamiltonian::linear({{1, no_matrix}}), netopt::ModelError);
}

TEST(Hamiltonian, TreesAndCompleteGraphsScoreZero) {
  for (const Rational alpha : {Rational(1, 10), Rational(1, 2), Rational(7, 10)}) {
    for (std::size_t n = 2; n <= 8; ++n) {
      EXPECT_EQ(netopt::eval_hamiltonian(triads(alpha), Graph::star(n)), Rational(0));
      EXPECT_EQ(netopt::eval_hamiltonian(triads(alpha), Graph::path(n)), Rational(0));
      EXPECT_EQ(netopt::eval_hamiltonian(triads(alpha), Graph::complete(n)), Rational(0));
    }
  }
}

TEST(Hamiltonian, RescalingKeepsTheArgmax) {
  // argmax over connected 5-node graphs of min(t1 S1, t2 S2) under (t1, t2) and (c t1, c t2).
  const auto argmax = [](const Hamiltonian& h) {
    std::vector<Graph> best;
    std::optional<Rational> value;
    oracle::for_each_graph(5, [&](const Graph& g) {
      if (!netopt::is_connected(g)) return;
      const Rational v = netopt::eval_hamiltonian(h, g);
      if (!value || *value < v) {
        value = v;
        best.clear();
      }
      if (*value == v) best.push_back(g);
    });
    return best;
  };
  const auto base = argmax(Hamiltonian::max_min({{2, StatisticSpec::non_edges()}, {3, StatisticSpec::triangles()}}));
  const auto scaled =
      argmax(Hamiltonian::max_min({{Rational(14, 3), StatisticSpec::non_edges()}, {7, StatisticSpec::triangles()}}));
  const auto alpha = argmax(Hamiltonian::max_min_rescaled(2, 3, StatisticSpec::non_edges(), StatisticSpec::triangles()));
  EXPECT_EQ(base, scaled);
  EXPECT_EQ(base, alpha);
  EXPECT_FALSE(base.empty());
}

TEST(SampleSpace, ContainsAndDescribe) {
  EXPECT_TRUE(netopt::SampleSpace::connected_graphs().contains(Graph::star(4)));
  EXPECT_FALSE(netopt::SampleSpace::connected_graphs().contains(Graph(4)));
  EXPECT_TRUE(netopt::SampleSpace::all().contains(Graph(4)));
  EXPECT_TRUE(netopt::SampleSpace::fixed_density(3).contains(Graph::star(4)));
  EXPECT_FALSE(netopt::SampleSpace::fixed_density(2).contains(Graph::star(4)));
  EXPECT_EQ(netopt::SampleSpace::fixed_density(2, true).describe(), "connected,density=2");
  EXPECT_EQ(netopt::SampleSpace::all().describe(), "all");
}
