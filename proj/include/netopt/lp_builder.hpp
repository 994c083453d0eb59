#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "netopt/constraint_system.hpp"
#include "netopt/statistics.hpp"

namespace netopt {

// Variable naming, fixed so exported files are reproducible:
//   x_i_j      edge indicator, i < j
//   w_i_j_k    closed-triad indicator, i < j < k (y_/z_ auxiliaries in as-printed mode)
//   f_i_j      connectivity flow on arc i -> j
//   m_h_i_j    commodity-h flow on arc i -> j
//   H          epigraph variable
std::string edge_variable_name(Node i, Node j);
std::string triangle_variable_name(Node i, Node j, Node k);
std::string flow_variable_name(Node i, Node j);
std::string commodity_variable_name(Node commodity, Node i, Node j);

/// Declares binary x_i_j for every pair; idempotent for the same n.
void add_edge_variables(ConstraintSystem& cs, std::size_t n);

/// sum x = d. Throws ModelError unless 0 <= d <= n(n-1)/2.
void build_fixed_density(ConstraintSystem& cs, std::size_t n, std::size_t d);

/// Binary w_i_j_k per triple. Corrected mode uses w <= each edge and
/// w >= x_ij + x_jk + x_ik - 2. AsPrinted reproduces the published system
/// verbatim, including its repeated x_ij row, with auxiliaries y and z.
/// Returns sum w and registers it as the triangle statistic.
LinearExpr build_triangle_indicators(ConstraintSystem& cs, std::size_t n, TriadMode mode);

/// n(n-1)/2 - sum x, registered as the non-edge statistic.
LinearExpr build_non_edges(ConstraintSystem& cs, std::size_t n);

/// sum delta_ij x_ij, registered as the physical-distance statistic.
LinearExpr build_physical_distance(ConstraintSystem& cs, const DistanceMatrix& delta);

/// Single-commodity flow of n-1 units out of `root`, one unit absorbed at
/// every other node, arc pair capacity f_ij + f_ji <= n x_ij.
void build_connectivity_flow(ConstraintSystem& cs, std::size_t n, Node root = 0);

/// One commodity per source node with n-1 units out of the source, one unit
/// absorbed everywhere else, shared capacity sum_h (m_h_ij + m_h_ji) <= n^2 x_ij.
/// Returns the total flow and registers it as the flow-distance statistic.
LinearExpr build_multicommodity_flow(ConstraintSystem& cs, std::size_t n);

/// Density row and/or connectivity flow as required by `space`.
void build_sample_space(ConstraintSystem& cs, std::size_t n, const SampleSpace& space);

/// max H  s.t.  H <= alpha * non_edges,  H <= (1 - alpha) * triangles,  x in space.
ConstraintSystem build_maxmin(std::size_t n, const Rational& alpha, const SampleSpace& space);

/// min H  s.t.  H >= alpha * physical_distance,  H >= (1 - alpha) * flow_distance.
ConstraintSystem build_minmax_distance_flow(std::size_t n, const Rational& alpha, const DistanceMatrix& delta,
                                            const SampleSpace& space);

/// Edge variables, sample space and one registered expression per statistic,
/// with no objective. Base for the linear and robust models below.
ConstraintSystem build_statistics_model(std::size_t n, std::span<const StatisticSpec> statistics,
                                        const SampleSpace& space);

/// max sum_j theta_j S_j over a statistics model (defines P*).
ConstraintSystem build_linear_objective(ConstraintSystem base, std::span<const Rational> theta);

/// max H  s.t.  H <= theta_j S_j for all j,  sum_j theta_j S_j >= gamma * P*.
/// Throws ModelError when P* is absent, gamma is outside [0,1], or theta does
/// not match the registered statistics.
ConstraintSystem build_robust_second_stage(ConstraintSystem base, std::span<const Rational> theta,
                                           const std::optional<Rational>& p_star, const Rational& gamma);

/// Feasible completion of `cs` for graph g: x from g, w as products (the
/// w-maximal feasible choice in as-printed mode), connectivity flow along a BFS
/// tree, commodity flows along BFS shortest paths, and H at its tightest
/// epigraph value. Flow blocks are left at zero when g is disconnected.
Assignment canonical_assignment(const ConstraintSystem& cs, const Graph& g);

/// Either a flow satisfying the connectivity block (one unit routed along
/// every BFS-tree path from the root) or a cut: the nodes reachable from the
/// root, all of whose boundary pairs have x = 0.
struct ConnectivityCertificate {
  bool feasible = false;
  Assignment flow;             // f_i_j values, when feasible
  std::vector<Node> root_side; // when infeasible
};
ConnectivityCertificate certify_connectivity_flow(const Graph& g, Node root = 0);

// CPLEX LP text. Rows are scaled to integer coefficients; the output is a
// pure function of the system.
void export_lp(const ConstraintSystem& cs, std::ostream& out);
void export_lp(const ConstraintSystem& cs, const std::filesystem::path& path);
std::string to_lp_string(const ConstraintSystem& cs);

/// JSON dump of the IR: variables, rows, objective, statistics.
nlohmann::ordered_json to_json(const ConstraintSystem& cs);

/// "name value" per line; '#' and '\' start comments.
Assignment read_assignment(std::istream& in);

}  // namespace netopt
