#include "netopt/lp_builder.hpp"

#include <algorithm>
#include <array>
#include <queue>

#include "netopt/errors.hpp"

namespace netopt {

std::string edge_variable_name(Node i, Node j) { return "x_" + std::to_string(i) + "_" + std::to_string(j); }

std::string triangle_variable_name(Node i, Node j, Node k) {
  return "w_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
}

std::string flow_variable_name(Node i, Node j) { return "f_" + std::to_string(i) + "_" + std::to_string(j); }

std::string commodity_variable_name(Node commodity, Node i, Node j) {
  return "m_" + std::to_string(commodity) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

namespace {

std::string suffix(Node i, Node j) { return std::to_string(i) + "_" + std::to_string(j); }
std::string suffix(Node i, Node j, Node k) { return suffix(i, j) + "_" + std::to_string(k); }

VarId edge_var(const ConstraintSystem& cs, Node i, Node j) {
  return cs.variable(i < j ? edge_variable_name(i, j) : edge_variable_name(j, i));
}

}  // namespace

void add_edge_variables(ConstraintSystem& cs, std::size_t n) {
  if (n == 0) throw ModelError("model needs at least one node");
  if (cs.blocks().nodes == n) return;
  if (cs.blocks().nodes != 0) throw ModelError("system already holds edge variables for a different n");
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) cs.add_variable(edge_variable_name(i, j), VarKind::Binary, Rational(0), Rational(1));
  }
  cs.blocks().nodes = n;
}

void build_fixed_density(ConstraintSystem& cs, std::size_t n, std::size_t d) {
  if (d > pair_count(n)) {
    throw ModelError("density " + std::to_string(d) + " exceeds the " + std::to_string(pair_count(n)) + " available pairs");
  }
  add_edge_variables(cs, n);
  LinearExpr sum;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) sum.add(edge_var(cs, i, j), Rational(1));
  }
  cs.add_constraint("density", sum, Relation::Equal, Rational(static_cast<std::int64_t>(d)));
}

LinearExpr build_triangle_indicators(ConstraintSystem& cs, std::size_t n, TriadMode mode) {
  if (n < 3) throw ModelError("triangle indicators need n >= 3");
  add_edge_variables(cs, n);
  if (cs.blocks().triangles) throw ModelError("triangle indicators already present");
  LinearExpr total;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      for (Node k = j + 1; k < n; ++k) {
        const VarId xij = edge_var(cs, i, j);
        const VarId xjk = edge_var(cs, j, k);
        const VarId xik = edge_var(cs, i, k);
        const VarId w = cs.add_variable(triangle_variable_name(i, j, k), VarKind::Binary, Rational(0), Rational(1));
        const std::string s = suffix(i, j, k);
        if (mode == TriadMode::Corrected) {
          cs.add_constraint("tri_a_" + s, LinearExpr().add(w, 1).add(xij, -1), Relation::LessEqual, Rational(0));
          cs.add_constraint("tri_b_" + s, LinearExpr().add(w, 1).add(xjk, -1), Relation::LessEqual, Rational(0));
          cs.add_constraint("tri_c_" + s, LinearExpr().add(w, 1).add(xik, -1), Relation::LessEqual, Rational(0));
          cs.add_constraint("tri_d_" + s, LinearExpr().add(w, 1).add(xij, -1).add(xjk, -1).add(xik, -1),
                            Relation::GreaterEqual, Rational(-2));
        } else {
          const VarId y = cs.add_variable("y_" + s, VarKind::Binary, Rational(0), Rational(1));
          const VarId z = cs.add_variable("z_" + s, VarKind::Binary, Rational(0), Rational(1));
          // 1 - z <= x <= y for the three printed rows; the third repeats x_ij.
          const VarId printed[3] = {xij, xjk, xij};
          for (int r = 0; r < 3; ++r) {
            const std::string tag = std::to_string(r + 1);
            cs.add_constraint("tp" + tag + "l_" + s, LinearExpr().add(printed[r], 1).add(z, 1), Relation::GreaterEqual,
                              Rational(1));
            cs.add_constraint("tp" + tag + "u_" + s, LinearExpr().add(printed[r], 1).add(y, -1), Relation::LessEqual,
                              Rational(0));
          }
          cs.add_constraint("tp4_" + s, LinearExpr().add(y, 1).add(z, -1).add(w, -1), Relation::LessEqual, Rational(0));
          cs.add_constraint("tp5_" + s, LinearExpr().add(w, 1).add(z, 1), Relation::LessEqual, Rational(1));
          cs.add_constraint("tp6_" + s, LinearExpr().add(xij, 1).add(xjk, 1).add(xik, 1).add(z, 1),
                            Relation::LessEqual, Rational(3));
        }
        total.add(w, Rational(1));
      }
    }
  }
  cs.blocks().triangles = mode;
  cs.add_statistic(to_string(StatisticKind::Triangles), StatisticKind::Triangles, total);
  return total;
}

LinearExpr build_non_edges(ConstraintSystem& cs, std::size_t n) {
  add_edge_variables(cs, n);
  LinearExpr expr(Rational(static_cast<std::int64_t>(pair_count(n))));
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) expr.add(edge_var(cs, i, j), Rational(-1));
  }
  cs.add_statistic(to_string(StatisticKind::NonEdges), StatisticKind::NonEdges, expr);
  return expr;
}

LinearExpr build_physical_distance(ConstraintSystem& cs, const DistanceMatrix& delta) {
  const std::size_t n = delta.size();
  add_edge_variables(cs, n);
  LinearExpr expr;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) expr.add(edge_var(cs, i, j), delta.at(i, j));
  }
  cs.add_statistic(to_string(StatisticKind::PhysicalDistance), StatisticKind::PhysicalDistance, expr);
  return expr;
}

void build_connectivity_flow(ConstraintSystem& cs, std::size_t n, Node root) {
  if (root >= n) throw ModelError("flow root " + std::to_string(root) + " out of range");
  add_edge_variables(cs, n);
  if (cs.blocks().connectivity_root) throw ModelError("connectivity flow already present");
  for (Node i = 0; i < n; ++i) {
    for (Node j = 0; j < n; ++j) {
      if (i != j) cs.add_variable(flow_variable_name(i, j), VarKind::Continuous, Rational(0), std::nullopt);
    }
  }
  const auto nn = static_cast<std::int64_t>(n);
  for (Node k = 0; k < n; ++k) {
    LinearExpr balance;
    for (Node j = 0; j < n; ++j) {
      if (j == k) continue;
      balance.add(cs.variable(flow_variable_name(k, j)), 1);
      balance.add(cs.variable(flow_variable_name(j, k)), -1);
    }
    cs.add_constraint("bal_" + std::to_string(k), balance, Relation::Equal, k == root ? Rational(nn - 1) : Rational(-1));
  }
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      LinearExpr cap;
      cap.add(cs.variable(flow_variable_name(i, j)), 1).add(cs.variable(flow_variable_name(j, i)), 1);
      cap.add(edge_var(cs, i, j), Rational(-nn));
      cs.add_constraint("cap_" + suffix(i, j), cap, Relation::LessEqual, Rational(0));
    }
  }
  cs.blocks().connectivity_root = root;
}

LinearExpr build_multicommodity_flow(ConstraintSystem& cs, std::size_t n) {
  if (n < 2) throw ModelError("multicommodity flow needs n >= 2");
  add_edge_variables(cs, n);
  if (cs.blocks().multicommodity) throw ModelError("multicommodity flow already present");
  for (Node h = 0; h < n; ++h) {
    for (Node i = 0; i < n; ++i) {
      for (Node j = 0; j < n; ++j) {
        if (i != j) cs.add_variable(commodity_variable_name(h, i, j), VarKind::Continuous, Rational(0), std::nullopt);
      }
    }
  }
  const auto nn = static_cast<std::int64_t>(n);
  LinearExpr total;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      LinearExpr cap;
      for (Node h = 0; h < n; ++h) {
        const VarId forward = cs.variable(commodity_variable_name(h, i, j));
        const VarId backward = cs.variable(commodity_variable_name(h, j, i));
        cap.add(forward, 1).add(backward, 1);
        total.add(forward, 1).add(backward, 1);
      }
      cap.add(edge_var(cs, i, j), Rational(-nn * nn));
      cs.add_constraint("mcap_" + suffix(i, j), cap, Relation::LessEqual, Rational(0));
    }
  }
  for (Node h = 0; h < n; ++h) {
    for (Node k = 0; k < n; ++k) {
      LinearExpr balance;
      for (Node j = 0; j < n; ++j) {
        if (j == k) continue;
        balance.add(cs.variable(commodity_variable_name(h, k, j)), 1);
        balance.add(cs.variable(commodity_variable_name(h, j, k)), -1);
      }
      cs.add_constraint("mbal_" + suffix(h, k), balance, Relation::Equal, k == h ? Rational(nn - 1) : Rational(-1));
    }
  }
  cs.blocks().multicommodity = true;
  cs.add_statistic(to_string(StatisticKind::FlowDistance), StatisticKind::FlowDistance, total);
  return total;
}

void build_sample_space(ConstraintSystem& cs, std::size_t n, const SampleSpace& space) {
  add_edge_variables(cs, n);
  if (space.edge_count) build_fixed_density(cs, n, *space.edge_count);
  if (space.connected) build_connectivity_flow(cs, n, 0);
}

ConstraintSystem build_maxmin(std::size_t n, const Rational& alpha, const SampleSpace& space) {
  validate_alpha(alpha);
  ConstraintSystem cs;
  cs.title = "maxmin triads vs non-edges n=" + std::to_string(n) + " alpha=" + to_fraction_string(alpha) +
             " space=" + space.describe();
  build_sample_space(cs, n, space);
  const LinearExpr non_edges = build_non_edges(cs, n);
  const LinearExpr triangles = build_triangle_indicators(cs, n, TriadMode::Corrected);
  const Rational max_h = alpha * static_cast<std::int64_t>(pair_count(n));
  const VarId h = cs.add_variable("H", VarKind::Continuous, Rational(0), max_h);
  cs.blocks().epigraph = true;
  cs.add_constraint("epi_non_edges", LinearExpr().add(h, 1).add(non_edges, -alpha), Relation::LessEqual, Rational(0));
  cs.add_constraint("epi_triangles", LinearExpr().add(h, 1).add(triangles, -(1 - alpha)), Relation::LessEqual,
                    Rational(0));
  cs.set_objective(Sense::Maximize, LinearExpr().add(h, 1));
  return cs;
}

ConstraintSystem build_minmax_distance_flow(std::size_t n, const Rational& alpha, const DistanceMatrix& delta,
                                            const SampleSpace& space) {
  validate_alpha(alpha);
  if (delta.size() != n) throw ModelError("distance matrix size does not match n");
  ConstraintSystem cs;
  cs.title = "minmax physical distance vs flow n=" + std::to_string(n) + " alpha=" + to_fraction_string(alpha) +
             " space=" + space.describe();
  build_sample_space(cs, n, space);
  const LinearExpr physical = build_physical_distance(cs, delta);
  const LinearExpr flow = build_multicommodity_flow(cs, n);
  const VarId h = cs.add_variable("H", VarKind::Continuous, Rational(0), std::nullopt);
  cs.blocks().epigraph = true;
  cs.add_constraint("epi_physical_distance", LinearExpr().add(h, 1).add(physical, -alpha), Relation::GreaterEqual,
                    Rational(0));
  cs.add_constraint("epi_flow_distance", LinearExpr().add(h, 1).add(flow, -(1 - alpha)), Relation::GreaterEqual,
                    Rational(0));
  cs.set_objective(Sense::Minimize, LinearExpr().add(h, 1));
  return cs;
}

ConstraintSystem build_statistics_model(std::size_t n, std::span<const StatisticSpec> statistics,
                                        const SampleSpace& space) {
  ConstraintSystem cs;
  cs.title = "statistics model n=" + std::to_string(n) + " space=" + space.describe();
  build_sample_space(cs, n, space);
  std::vector<StatisticKind> seen;
  for (const auto& spec : statistics) {
    if (std::find(seen.begin(), seen.end(), spec.kind) != seen.end()) {
      throw ModelError("statistic " + to_string(spec.kind) + " listed twice");
    }
    seen.push_back(spec.kind);
    switch (spec.kind) {
      case StatisticKind::NonEdges: build_non_edges(cs, n); break;
      case StatisticKind::Triangles: build_triangle_indicators(cs, n, TriadMode::Corrected); break;
      case StatisticKind::PhysicalDistance:
        if (!spec.distances) throw ModelError("physical distance statistic without a distance matrix");
        if (spec.distances->size() != n) throw ModelError("distance matrix size does not match n");
        build_physical_distance(cs, *spec.distances);
        break;
      case StatisticKind::FlowDistance: build_multicommodity_flow(cs, n); break;
    }
  }
  return cs;
}

namespace {

void check_theta(const ConstraintSystem& base, std::span<const Rational> theta) {
  if (theta.size() != base.statistics().size()) {
    throw ModelError("expected " + std::to_string(base.statistics().size()) + " weights, got " +
                     std::to_string(theta.size()));
  }
}

LinearExpr weighted_sum(const ConstraintSystem& base, std::span<const Rational> theta) {
  LinearExpr sum;
  for (std::size_t j = 0; j < theta.size(); ++j) sum.add(base.statistics()[j].expr, theta[j]);
  return sum;
}

}  // namespace

ConstraintSystem build_linear_objective(ConstraintSystem base, std::span<const Rational> theta) {
  check_theta(base, theta);
  base.set_objective(Sense::Maximize, weighted_sum(base, theta));
  base.title += " objective=linear";
  return base;
}

ConstraintSystem build_robust_second_stage(ConstraintSystem base, std::span<const Rational> theta,
                                           const std::optional<Rational>& p_star, const Rational& gamma) {
  if (!p_star) throw ModelError("robust second stage needs the stage-1 optimum P*");
  if (gamma < 0 || gamma > 1) throw ModelError("gamma must lie in [0, 1], got " + to_fraction_string(gamma));
  check_theta(base, theta);
  if (base.find_variable("H")) throw ModelError("base system already has an epigraph variable");

  const VarId h = base.add_variable("H", VarKind::Continuous, std::nullopt, std::nullopt);
  base.blocks().epigraph = true;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const NamedStatistic& stat = base.statistics()[j];
    base.add_constraint("epi_" + stat.name, LinearExpr().add(h, 1).add(stat.expr, -theta[j]), Relation::LessEqual,
                        Rational(0));
  }
  base.add_constraint("robust_floor", weighted_sum(base, theta), Relation::GreaterEqual, gamma * *p_star);
  base.set_objective(Sense::Maximize, LinearExpr().add(h, 1));
  base.title += " robust gamma=" + to_fraction_string(gamma) + " P*=" + to_fraction_string(*p_star);
  return base;
}

// ---------------------------------------------------------------------------
// Constructive assignments

namespace {

struct BfsTree {
  std::vector<std::optional<Node>> parent;
  std::vector<Node> order;  // BFS visiting order
};

BfsTree bfs_tree(const std::vector<std::vector<Node>>& adj, Node root) {
  BfsTree tree{std::vector<std::optional<Node>>(adj.size()), {}};
  std::vector<bool> seen(adj.size(), false);
  std::queue<Node> frontier;
  seen[root] = true;
  frontier.push(root);
  while (!frontier.empty()) {
    const Node u = frontier.front();
    frontier.pop();
    tree.order.push_back(u);
    for (Node v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        tree.parent[v] = u;
        frontier.push(v);
      }
    }
  }
  return tree;
}

/// Subtree sizes along the BFS tree: the units crossing each parent -> child arc.
std::vector<std::int64_t> subtree_sizes(const BfsTree& tree, std::size_t n) {
  std::vector<std::int64_t> size(n, 1);
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    if (tree.parent[*it]) size[*tree.parent[*it]] += size[*it];
  }
  return size;
}

// Picks the feasible (y, z, w) of the printed triad rows with the largest w.
std::array<int, 3> printed_triad_completion(int xij, int xjk, int xik) {
  for (int w = 1; w >= 0; --w) {
    for (int y = 0; y <= 1; ++y) {
      for (int z = 0; z <= 1; ++z) {
        const bool ok = xij + z >= 1 && xij <= y && xjk + z >= 1 && xjk <= y && y - z <= w && w + z <= 1 &&
                        xij + xjk + xik + z <= 3;
        if (ok) return {y, z, w};
      }
    }
  }
  return {0, 1, 0};
}

}  // namespace

ConnectivityCertificate certify_connectivity_flow(const Graph& g, Node root) {
  const std::size_t n = g.node_count();
  const BfsTree tree = bfs_tree(g.adjacency_lists(), root);
  ConnectivityCertificate cert;
  if (tree.order.size() != n) {
    cert.root_side = tree.order;
    std::sort(cert.root_side.begin(), cert.root_side.end());
    return cert;
  }
  cert.feasible = true;
  for (Node i = 0; i < n; ++i) {
    for (Node j = 0; j < n; ++j) {
      if (i != j) cert.flow[flow_variable_name(i, j)] = 0;
    }
  }
  const auto size = subtree_sizes(tree, n);
  for (Node v = 0; v < n; ++v) {
    if (tree.parent[v]) cert.flow[flow_variable_name(*tree.parent[v], v)] = size[v];
  }
  return cert;
}

Assignment canonical_assignment(const ConstraintSystem& cs, const Graph& g) {
  const ModelBlocks& blocks = cs.blocks();
  const std::size_t n = blocks.nodes;
  if (g.node_count() != n) throw ModelError("graph size does not match the system");

  Assignment a;
  for (const auto& v : cs.variables()) a[v.name] = 0;
  for (auto [i, j] : g.edges()) a[edge_variable_name(i, j)] = 1;

  if (blocks.triangles) {
    for (Node i = 0; i < n; ++i) {
      for (Node j = i + 1; j < n; ++j) {
        for (Node k = j + 1; k < n; ++k) {
          const int xij = g.has_edge(i, j);
          const int xjk = g.has_edge(j, k);
          const int xik = g.has_edge(i, k);
          if (*blocks.triangles == TriadMode::Corrected) {
            a[triangle_variable_name(i, j, k)] = xij * xjk * xik;
          } else {
            const auto [y, z, w] = printed_triad_completion(xij, xjk, xik);
            const std::string s = suffix(i, j, k);
            a["y_" + s] = y;
            a["z_" + s] = z;
            a[triangle_variable_name(i, j, k)] = w;
          }
        }
      }
    }
  }

  const bool connected = is_connected(g);
  if (blocks.connectivity_root && connected) {
    for (const auto& [name, value] : certify_connectivity_flow(g, *blocks.connectivity_root).flow) a[name] = value;
  }
  if (blocks.multicommodity && connected) {
    const auto adj = g.adjacency_lists();
    for (Node h = 0; h < n; ++h) {
      const BfsTree tree = bfs_tree(adj, h);
      const auto size = subtree_sizes(tree, n);
      for (Node v = 0; v < n; ++v) {
        if (tree.parent[v]) a[commodity_variable_name(h, *tree.parent[v], v)] = size[v];
      }
    }
  }

  if (blocks.epigraph) {
    const VarId h = cs.variable("H");
    std::vector<Rational> values(cs.variables().size());
    for (VarId id = 0; id < values.size(); ++id) values[id] = a[cs.variables()[id].name];
    const bool maximize = cs.objective().sense == Sense::Maximize;
    std::optional<Rational> best = maximize ? cs.variables()[h].upper : cs.variables()[h].lower;
    for (const auto& row : cs.constraints()) {
      Rational coef_h(0);
      Rational rest(0);
      for (const auto& [var, coef] : row.expr.terms()) {
        if (var == h) {
          coef_h += coef;
        } else {
          rest += coef * values[var];
        }
      }
      if (coef_h == 0) continue;
      const Rational bound = (row.rhs - rest) / coef_h;
      const bool is_upper = (row.relation == Relation::LessEqual) == (coef_h > 0);
      if (maximize && is_upper) best = best ? rational_min(*best, bound) : bound;
      if (!maximize && !is_upper) best = best ? rational_max(*best, bound) : bound;
    }
    a["H"] = best.value_or(Rational(0));
  }
  return a;
}

}  // namespace netopt
