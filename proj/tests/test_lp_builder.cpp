#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "netopt/errors.hpp"
#include "netopt/lp_builder.hpp"
#include "oracles.hpp"

using netopt::Assignment;
using netopt::ConstraintSystem;
using netopt::Graph;
using netopt::Rational;
using netopt::TriadMode;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool feasible_for(const ConstraintSystem& cs, const Graph& g) {
  return netopt::check_assignment(cs, netopt::canonical_assignment(cs, g)).feasible();
}

std::size_t count_feasible(const ConstraintSystem& cs, std::size_t n) {
  std::size_t count = 0;
  oracle::for_each_graph(n, [&](const Graph& g) { count += feasible_for(cs, g) ? 1 : 0; });
  return count;
}

ConstraintSystem density_system(std::size_t n, std::size_t d) {
  ConstraintSystem cs;
  netopt::build_fixed_density(cs, n, d);
  return cs;
}

}  // namespace

TEST(FixedDensity, FeasibleSetSizes) {
  EXPECT_EQ(count_feasible(density_system(4, 6), 4), 1U);
  EXPECT_TRUE(feasible_for(density_system(4, 6), Graph::complete(4)));
  EXPECT_EQ(count_feasible(density_system(4, 0), 4), 1U);
  EXPECT_TRUE(feasible_for(density_system(4, 0), Graph(4)));
  EXPECT_EQ(count_feasible(density_system(5, 4), 5), 210U);
  EXPECT_THROW(density_system(4, 7), netopt::ModelError);
}

TEST(FixedDensity, GoldenLpFile) {
  const ConstraintSystem cs = density_system(4, 2);
  EXPECT_EQ(cs.constraints().size(), 1U);
  EXPECT_EQ(cs.variables().size(), 6U);
  EXPECT_EQ(netopt::to_lp_string(cs), read_file(NETOPT_GOLDEN_DIR "/fixed_density_4_2.lp"));
}

TEST(TriadIndicators, CorrectedSystemPinsTheProduct) {
  for (int corner = 0; corner < 8; ++corner) {
    const int a = corner & 1, b = (corner >> 1) & 1, c = (corner >> 2) & 1;
    EXPECT_EQ(oracle::feasible_triad_values(TriadMode::Corrected, a, b, c), std::set<int>{a * b * c}) << corner;
  }
}

TEST(TriadIndicators, PrintedSystemAdmitsOpenWedges) {
  // Two edges of the triple present, closing pair absent: the printed rows
  // never look at x_0_2, so w = 1 stays feasible.
  EXPECT_EQ(oracle::feasible_triad_values(TriadMode::AsPrinted, 1, 1, 0), (std::set<int>{0, 1}));
  EXPECT_EQ(oracle::feasible_triad_values(TriadMode::AsPrinted, 1, 1, 1), std::set<int>{1});
  EXPECT_EQ(oracle::feasible_triad_values(TriadMode::AsPrinted, 0, 0, 0), std::set<int>{0});
  // The completion used for exports takes the largest feasible w.
  ConstraintSystem cs;
  netopt::build_triangle_indicators(cs, 3, TriadMode::AsPrinted);
  const std::vector<netopt::NodePair> wedge{{0, 1}, {1, 2}};
  const Assignment a = netopt::canonical_assignment(cs, Graph::from_edges(3, wedge));
  EXPECT_EQ(a.at("w_0_1_2"), Rational(1));
  const auto check = netopt::check_assignment(cs, a);
  EXPECT_TRUE(check.feasible());
  EXPECT_FALSE(check.semantics_consistent());
}

TEST(TriadIndicators, NeedThreeNodes) {
  ConstraintSystem cs;
  EXPECT_THROW(netopt::build_triangle_indicators(cs, 2, TriadMode::Corrected), netopt::ModelError);
}

TEST(ConnectivityFlow, Examples) {
  const auto star = netopt::certify_connectivity_flow(Graph::star(5), 0);
  ASSERT_TRUE(star.feasible);
  for (std::size_t leaf = 1; leaf < 5; ++leaf) EXPECT_EQ(star.flow.at("f_0_" + std::to_string(leaf)), Rational(1));

  const auto path = netopt::certify_connectivity_flow(Graph::path(3), 0);
  ASSERT_TRUE(path.feasible);
  EXPECT_EQ(path.flow.at("f_0_1"), Rational(2));
  EXPECT_EQ(path.flow.at("f_1_2"), Rational(1));

  const std::vector<netopt::NodePair> two{{0, 1}, {2, 3}};
  const auto split = netopt::certify_connectivity_flow(Graph::from_edges(4, two), 0);
  EXPECT_FALSE(split.feasible);
  EXPECT_EQ(split.root_side, (std::vector<netopt::Node>{0, 1}));
}

TEST(ConnectivityFlow, FeasibleExactlyWhenConnected) {
  for (std::size_t n = 1; n <= 5; ++n) {
    ConstraintSystem cs;
    netopt::build_connectivity_flow(cs, n, 0);
    oracle::for_each_graph(n, [&](const Graph& g) {
      const bool connected = oracle::connected(oracle::adjacency(g));
      const auto cert = netopt::certify_connectivity_flow(g, 0);
      ASSERT_EQ(cert.feasible, connected);
      if (connected) {
        Assignment a = cert.flow;
        for (const auto& [i, j] : std::vector<netopt::NodePair>(g.edges())) a[netopt::edge_variable_name(i, j)] = 1;
        for (std::size_t e = 0; e < g.pair_count(); ++e) {
          const auto [i, j] = netopt::pair_of(e, n);
          a.emplace(netopt::edge_variable_name(i, j), 0);
        }
        for (const auto& v : cs.variables()) a.emplace(v.name, 0);
        ASSERT_TRUE(netopt::check_assignment(cs, a).feasible());
      } else {
        // Cut: root side is closed under edges, so no capacity leaves it, yet
        // it must export one unit per outside node.
        std::vector<bool> inside(n, false);
        for (auto v : cert.root_side) inside[v] = true;
        ASSERT_TRUE(inside[0]);
        ASSERT_LT(cert.root_side.size(), n);
        for (const auto& [i, j] : g.edges()) ASSERT_EQ(inside[i], inside[j]);
        ASSERT_FALSE(feasible_for(cs, g));
      }
    });
  }
}

TEST(MulticommodityFlow, CanonicalFlowIsOptimalAndFeasible) {
  for (std::size_t n = 2; n <= 5; ++n) {
    ConstraintSystem cs;
    const netopt::LinearExpr total = netopt::build_multicommodity_flow(cs, n);
    oracle::for_each_graph(n, [&](const Graph& g) {
      const auto a = netopt::canonical_assignment(cs, g);
      const auto bound = oracle::multicommodity_dual_bound(oracle::adjacency(g));
      const auto check = netopt::check_assignment(cs, a);
      if (!bound) {
        ASSERT_FALSE(check.feasible());
        return;
      }
      ASSERT_TRUE(check.feasible());
      std::vector<Rational> values(cs.variables().size());
      for (std::size_t v = 0; v < values.size(); ++v) values[v] = a.at(cs.variables()[v].name);
      // Primal value equals the dual bound: optimal.
      ASSERT_EQ(total.evaluate(values), Rational(static_cast<std::int64_t>(*bound)));
      ASSERT_EQ(*bound, netopt::s_flow_distance(g));
    });
  }
  ConstraintSystem k3;
  const auto total = netopt::build_multicommodity_flow(k3, 3);
  const auto a = netopt::canonical_assignment(k3, Graph::complete(3));
  std::vector<Rational> values(k3.variables().size());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = a.at(k3.variables()[v].name);
  EXPECT_EQ(total.evaluate(values), Rational(6));
}

TEST(MaxMin, CompleteGraphAssignmentIsFeasible) {
  const ConstraintSystem cs = netopt::build_maxmin(4, Rational(1, 2), netopt::SampleSpace::connected_graphs());
  const auto check = netopt::check_assignment(cs, netopt::canonical_assignment(cs, Graph::complete(4)));
  EXPECT_TRUE(check.feasible());
  EXPECT_TRUE(check.semantics_consistent());
  EXPECT_EQ(check.objective_value, Rational(0));
  EXPECT_EQ(check.indicated_triangles, std::optional<std::uint64_t>(4));
  EXPECT_EQ(cs.variable("H"), cs.variables().size() - 1);
  EXPECT_EQ(cs.variables().back().upper, std::optional<Rational>(Rational(3)));
}

TEST(MaxMin, CanonicalObjectiveMatchesHamiltonian) {
  for (const Rational alpha : {Rational(0), Rational(3, 10), Rational(1, 2), Rational(1)}) {
    const ConstraintSystem cs = netopt::build_maxmin(4, alpha, netopt::SampleSpace::connected_graphs());
    const auto h = netopt::Hamiltonian::max_min(alpha, netopt::StatisticSpec::non_edges(),
                                                netopt::StatisticSpec::triangles());
    oracle::for_each_graph(4, [&](const Graph& g) {
      const auto check = netopt::check_assignment(cs, netopt::canonical_assignment(cs, g));
      ASSERT_EQ(check.feasible(), netopt::is_connected(g));
      ASSERT_TRUE(check.semantics_consistent());
      if (check.feasible()) ASSERT_EQ(check.objective_value, netopt::eval_hamiltonian(h, g));
    });
  }
}

TEST(CheckAssignment, ReportsViolationsAndMissingVariables) {
  const ConstraintSystem cs = netopt::build_maxmin(3, Rational(1, 2), netopt::SampleSpace::all());
  Assignment a = netopt::canonical_assignment(cs, Graph::path(3));
  a["w_0_1_2"] = 1;
  const auto check = netopt::check_assignment(cs, a);
  EXPECT_FALSE(check.feasible());
  bool saw_row = false;
  for (const auto& v : check.violations) {
    if (v.row == "tri_c_0_1_2") {
      saw_row = true;
      EXPECT_EQ(v.slack, Rational(-1));
    }
  }
  EXPECT_TRUE(saw_row);
  EXPECT_FALSE(check.triangle_mismatches.empty());

  Assignment missing = netopt::canonical_assignment(cs, Graph::path(3));
  missing.erase("x_0_1");
  EXPECT_THROW(netopt::check_assignment(cs, missing), netopt::ModelError);
  Assignment extra = netopt::canonical_assignment(cs, Graph::path(3));
  extra["bogus"] = 0;
  EXPECT_THROW(netopt::check_assignment(cs, extra), netopt::ModelError);
}

TEST(CheckAssignment, DisconnectedGraphBreaksABalanceRow) {
  const ConstraintSystem cs = netopt::build_maxmin(4, Rational(1, 2), netopt::SampleSpace::connected_graphs());
  const std::vector<netopt::NodePair> two{{0, 1}, {2, 3}};
  Assignment a = netopt::canonical_assignment(cs, Graph::from_edges(4, two));
  // Any flow on the present edges: push the maximum allowed.
  a["f_0_1"] = 3;
  a["f_2_3"] = 1;
  const auto check = netopt::check_assignment(cs, a);
  bool balance = false;
  for (const auto& v : check.violations) balance = balance || v.row.starts_with("bal_");
  EXPECT_TRUE(balance);
  EXPECT_EQ(check.graph_connected, std::optional<bool>(false));
}

TEST(RobustStage, RowsAndErrors) {
  const std::vector<netopt::StatisticSpec> stats{netopt::StatisticSpec::non_edges(), netopt::StatisticSpec::triangles()};
  const std::vector<Rational> theta{Rational(1, 2), Rational(1, 2)};
  const auto base = netopt::build_statistics_model(4, stats, netopt::SampleSpace::connected_graphs());
  EXPECT_THROW(netopt::build_robust_second_stage(base, theta, std::nullopt, Rational(1)), netopt::ModelError);
  EXPECT_THROW(netopt::build_robust_second_stage(base, theta, Rational(2), Rational(3, 2)), netopt::ModelError);
  EXPECT_THROW(netopt::build_robust_second_stage(base, std::vector<Rational>{1}, Rational(2), Rational(1)),
               netopt::ModelError);

  // gamma = 1 with P* = max of the linear objective: only linear optima stay feasible.
  const auto linear = netopt::build_linear_objective(base, theta);
  const auto h_lin = netopt::Hamiltonian::linear({{theta[0], stats[0]}, {theta[1], stats[1]}});
  Rational p_star = 0;
  oracle::for_each_graph(4, [&](const Graph& g) {
    if (netopt::is_connected(g)) p_star = netopt::rational_max(p_star, netopt::eval_hamiltonian(h_lin, g));
  });
  const auto robust = netopt::build_robust_second_stage(base, theta, p_star, Rational(1));
  oracle::for_each_graph(4, [&](const Graph& g) {
    const auto check = netopt::check_assignment(robust, netopt::canonical_assignment(robust, g));
    const bool optimal = netopt::is_connected(g) && netopt::eval_hamiltonian(h_lin, g) == p_star;
    ASSERT_EQ(check.feasible(), optimal);
  });
  // gamma = 0: the floor row is vacuous.
  const auto relaxed = netopt::build_robust_second_stage(base, theta, p_star, Rational(0));
  EXPECT_TRUE(netopt::check_assignment(relaxed, netopt::canonical_assignment(relaxed, Graph::star(4))).feasible());
  EXPECT_EQ(linear.objective().sense, netopt::Sense::Maximize);
}

TEST(LpExport, DeterministicAndWellFormed) {
  const auto a = netopt::to_lp_string(netopt::build_maxmin(5, Rational(7, 10), netopt::SampleSpace::connected_graphs()));
  const auto b = netopt::to_lp_string(netopt::build_maxmin(5, Rational(7, 10), netopt::SampleSpace::connected_graphs()));
  EXPECT_EQ(a, b);
  for (const char* section : {"Maximize", "Subject To", "Bounds", "Binaries", "End"})
    EXPECT_NE(a.find(section), std::string::npos) << section;
  // Fractional coefficients are scaled away; only the title comment names alpha.
  std::istringstream lines(a);
  for (std::string line; std::getline(lines, line);)
    if (!line.starts_with("\\")) EXPECT_EQ(line.find('/'), std::string::npos) << line;
  const auto json = netopt::to_json(netopt::build_maxmin(4, Rational(1, 2), netopt::SampleSpace::connected_graphs()));
  EXPECT_EQ(json["objective"]["sense"], "maximize");
  EXPECT_EQ(json["variables"].size(), 6U + 4U + 12U + 1U);
}

TEST(LpExport, EmptySystem) {
  const std::string lp = netopt::to_lp_string(ConstraintSystem{});
  EXPECT_NE(lp.find("Maximize"), std::string::npos);
  EXPECT_NE(lp.find("End"), std::string::npos);
}

TEST(ReadAssignment, ParsesAndRejects) {
  std::istringstream in("# comment\nx_0_1 1\n\\ other\nH 3/2\nf_0_1 0.5\n");
  const Assignment a = netopt::read_assignment(in);
  EXPECT_EQ(a.at("H"), Rational(3, 2));
  EXPECT_EQ(a.at("f_0_1"), Rational(1, 2));
  std::istringstream dup("x 1\nx 2\n");
  EXPECT_THROW(netopt::read_assignment(dup), netopt::ParseError);
}
