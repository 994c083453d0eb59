#include "netopt/constraint_system.hpp"

#include "netopt/errors.hpp"
#include "netopt/lp_builder.hpp"

namespace netopt {

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr& LinearExpr::add(VarId var, const Rational& coef) {
  terms_.emplace_back(var, coef);
  return *this;
}

LinearExpr& LinearExpr::add(const LinearExpr& other, const Rational& scale) {
  for (const auto& [var, coef] : other.terms_) terms_.emplace_back(var, coef * scale);
  constant_ += other.constant_ * scale;
  return *this;
}

LinearExpr& LinearExpr::add_constant(const Rational& c) {
  constant_ += c;
  return *this;
}

LinearExpr LinearExpr::canonical() const {
  std::unordered_map<VarId, std::size_t> position;
  std::vector<std::pair<VarId, Rational>> merged;
  merged.reserve(terms_.size());
  for (const auto& [var, coef] : terms_) {
    auto [it, inserted] = position.emplace(var, merged.size());
    if (inserted) {
      merged.emplace_back(var, coef);
    } else {
      merged[it->second].second += coef;
    }
  }
  LinearExpr out(constant_);
  for (auto& [var, coef] : merged) {
    if (coef != 0) out.terms_.emplace_back(var, coef);
  }
  return out;
}

Rational LinearExpr::evaluate(std::span<const Rational> values) const {
  Rational sum = constant_;
  for (const auto& [var, coef] : terms_) sum += coef * values[var];
  return sum;
}

// ---------------------------------------------------------------------------
// ConstraintSystem

VarId ConstraintSystem::add_variable(std::string name, VarKind kind, std::optional<Rational> lower,
                                     std::optional<Rational> upper) {
  if (variable_index_.contains(name)) throw ModelError("duplicate variable '" + name + "'");
  if (kind == VarKind::Binary) {
    lower = Rational(0);
    upper = Rational(1);
  }
  const VarId id = variables_.size();
  variable_index_.emplace(name, id);
  variables_.push_back({std::move(name), kind, std::move(lower), std::move(upper)});
  return id;
}

std::optional<VarId> ConstraintSystem::find_variable(std::string_view name) const {
  if (auto it = variable_index_.find(std::string(name)); it != variable_index_.end()) return it->second;
  return std::nullopt;
}

VarId ConstraintSystem::variable(std::string_view name) const {
  if (auto id = find_variable(name)) return *id;
  throw ModelError("unknown variable '" + std::string(name) + "'");
}

void ConstraintSystem::add_constraint(std::string name, const LinearExpr& expr, Relation relation,
                                      const Rational& rhs) {
  if (!constraint_names_.insert(name).second) throw ModelError("duplicate constraint '" + name + "'");
  LinearExpr body = expr.canonical();
  const Rational moved_rhs = rhs - body.constant();
  for (const auto& [var, coef] : body.terms()) {
    if (var >= variables_.size()) throw ModelError("constraint '" + name + "' references an undeclared variable");
  }
  LinearExpr stripped;
  for (const auto& [var, coef] : body.terms()) stripped.add(var, coef);
  constraints_.push_back({std::move(name), std::move(stripped), relation, moved_rhs});
}

void ConstraintSystem::set_objective(Sense sense, const LinearExpr& expr) {
  LinearExpr body = expr.canonical();
  for (const auto& [var, coef] : body.terms()) {
    if (var >= variables_.size()) throw ModelError("objective references an undeclared variable");
  }
  objective_ = {sense, std::move(body)};
}

void ConstraintSystem::add_statistic(std::string name, StatisticKind kind, LinearExpr expr) {
  statistics_.push_back({std::move(name), kind, expr.canonical()});
}

const NamedStatistic* ConstraintSystem::find_statistic(StatisticKind kind) const {
  for (const auto& s : statistics_) {
    if (s.kind == kind) return &s;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Assignment checking

bool AssignmentCheck::semantics_consistent() const {
  if (!triangle_mismatches.empty()) return false;
  // a satisfied flow block certifies connectivity
  if (flow_rows_satisfied && graph_connected && *flow_rows_satisfied && !*graph_connected) return false;
  return true;
}

namespace {

bool row_name_is_flow(const std::string& name) {
  return name.starts_with("bal_") || name.starts_with("cap_") || name.starts_with("mbal_") ||
         name.starts_with("mcap_");
}

Rational slack_of(Relation relation, const Rational& lhs, const Rational& rhs) {
  switch (relation) {
    case Relation::LessEqual: return rhs - lhs;
    case Relation::GreaterEqual: return lhs - rhs;
    case Relation::Equal: {
      const Rational diff = lhs - rhs;
      return diff < 0 ? diff : -diff;
    }
  }
  return Rational(0);
}

}  // namespace

AssignmentCheck check_assignment(const ConstraintSystem& cs, const Assignment& assignment) {
  const auto& vars = cs.variables();
  std::vector<Rational> values(vars.size());
  for (VarId id = 0; id < vars.size(); ++id) {
    auto it = assignment.find(vars[id].name);
    if (it == assignment.end()) throw ModelError("assignment is missing variable '" + vars[id].name + "'");
    values[id] = it->second;
  }
  for (const auto& [name, value] : assignment) {
    if (!cs.find_variable(name)) throw ModelError("assignment names unknown variable '" + name + "'");
  }

  AssignmentCheck check;
  for (VarId id = 0; id < vars.size(); ++id) {
    const auto& v = vars[id];
    const Rational& x = values[id];
    if (v.lower && x < *v.lower) check.bound_violations.push_back({v.name, x, "below lower bound"});
    if (v.upper && x > *v.upper) check.bound_violations.push_back({v.name, x, "above upper bound"});
    if (v.kind == VarKind::Binary && x != 0 && x != 1) check.bound_violations.push_back({v.name, x, "not integral"});
  }

  bool flow_ok = true;
  bool has_flow_rows = false;
  for (const auto& row : cs.constraints()) {
    const Rational lhs = row.expr.evaluate(values);
    const Rational slack = slack_of(row.relation, lhs, row.rhs);
    if (row_name_is_flow(row.name)) {
      has_flow_rows = true;
      if (slack < 0) flow_ok = false;
    }
    if (slack < 0) check.violations.push_back({row.name, lhs, row.relation, row.rhs, slack});
  }
  check.objective_value = cs.objective().expr.evaluate(values);

  const ModelBlocks& blocks = cs.blocks();
  if (blocks.nodes == 0) return check;

  const std::size_t n = blocks.nodes;
  Graph g(n);
  bool integral = true;
  for (Node i = 0; i < n && integral; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      const Rational& x = values[cs.variable(edge_variable_name(i, j))];
      if (x != 0 && x != 1) {
        integral = false;
        break;
      }
      g.set_edge(i, j, x == 1);
    }
  }
  if (!integral) return check;

  if (blocks.triangles) {
    std::uint64_t indicated = 0;
    for (Node i = 0; i < n; ++i) {
      for (Node j = i + 1; j < n; ++j) {
        for (Node k = j + 1; k < n; ++k) {
          const std::string name = triangle_variable_name(i, j, k);
          const Rational& w = values[cs.variable(name)];
          const bool closed = g.has_edge(i, j) && g.has_edge(j, k) && g.has_edge(i, k);
          if (w == 1) ++indicated;
          if (w != (closed ? 1 : 0)) check.triangle_mismatches.push_back(name);
        }
      }
    }
    check.indicated_triangles = indicated;
    check.actual_triangles = count_triangles(g);
  }
  if (has_flow_rows) {
    check.flow_rows_satisfied = flow_ok;
    check.graph_connected = is_connected(g);
  }
  check.graph = std::move(g);
  return check;
}

}  // namespace netopt
