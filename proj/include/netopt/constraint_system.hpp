#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "netopt/graph.hpp"
#include "netopt/rational.hpp"
#include "netopt/statistics.hpp"

namespace netopt {

using VarId = std::size_t;

enum class VarKind { Binary, Continuous };
enum class Relation { LessEqual, Equal, GreaterEqual };

std::string to_string(Relation relation);

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  std::optional<Rational> lower;  // empty = unbounded below
  std::optional<Rational> upper;  // empty = unbounded above
};

/// Affine expression sum_k c_k v_k + constant.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(Rational constant) : constant_(constant) {}

  LinearExpr& add(VarId var, const Rational& coef);
  LinearExpr& add(const LinearExpr& other, const Rational& scale = Rational(1));
  LinearExpr& add_constant(const Rational& c);

  /// Duplicates merged at their first position, zero coefficients dropped.
  LinearExpr canonical() const;

  const std::vector<std::pair<VarId, Rational>>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }

  Rational evaluate(std::span<const Rational> values) const;

 private:
  std::vector<std::pair<VarId, Rational>> terms_;
  Rational constant_{0};
};

struct Constraint {
  std::string name;
  LinearExpr expr;  // canonical, constant-free
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

struct Objective {
  Sense sense = Sense::Maximize;
  LinearExpr expr;
};

enum class TriadMode { Corrected, AsPrinted };

/// Which formulation blocks a system contains; drives assignment decoding.
struct ModelBlocks {
  std::size_t nodes = 0;  // edge variables x_i_j exist iff nodes > 0
  std::optional<TriadMode> triangles;
  std::optional<Node> connectivity_root;
  bool multicommodity = false;
  bool epigraph = false;  // continuous H
};

/// A statistic expressed as an affine function of the model variables.
struct NamedStatistic {
  std::string name;
  StatisticKind kind;
  LinearExpr expr;
};

/// Variables, rows and objective of a linear model over binary edge
/// indicators and continuous auxiliaries. Names are unique; insertion order is
/// the export order.
class ConstraintSystem {
 public:
  VarId add_variable(std::string name, VarKind kind, std::optional<Rational> lower, std::optional<Rational> upper);
  std::optional<VarId> find_variable(std::string_view name) const;
  /// Throws ModelError when absent.
  VarId variable(std::string_view name) const;
  void set_upper(VarId var, std::optional<Rational> upper) { variables_.at(var).upper = std::move(upper); }

  void add_constraint(std::string name, const LinearExpr& expr, Relation relation, const Rational& rhs);
  void set_objective(Sense sense, const LinearExpr& expr);
  void add_statistic(std::string name, StatisticKind kind, LinearExpr expr);
  const NamedStatistic* find_statistic(StatisticKind kind) const;

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }
  const std::vector<NamedStatistic>& statistics() const { return statistics_; }

  ModelBlocks& blocks() { return blocks_; }
  const ModelBlocks& blocks() const { return blocks_; }

  std::string title;

 private:
  std::vector<Variable> variables_;
  std::unordered_map<std::string, VarId> variable_index_;
  std::vector<Constraint> constraints_;
  std::unordered_set<std::string> constraint_names_;
  Objective objective_;
  std::vector<NamedStatistic> statistics_;
  ModelBlocks blocks_;
};

/// Values keyed by variable name.
using Assignment = std::map<std::string, Rational>;

struct RowViolation {
  std::string row;
  Rational lhs;
  Relation relation;
  Rational rhs;
  Rational slack;  // negative: violated by |slack|
};

struct BoundViolation {
  std::string variable;
  Rational value;
  std::string reason;
};

/// Outcome of verifying an assignment against a system plus the graph
/// semantics it encodes.
struct AssignmentCheck {
  std::vector<RowViolation> violations;
  std::vector<BoundViolation> bound_violations;
  Rational objective_value;

  /// Decoded from integral x values (absent when x is fractional or missing).
  std::optional<Graph> graph;
  /// w variables disagreeing with the product of their three edge values.
  std::vector<std::string> triangle_mismatches;
  std::optional<std::uint64_t> indicated_triangles;
  std::optional<std::uint64_t> actual_triangles;
  /// Set when the system holds a connectivity flow and x decodes.
  std::optional<bool> flow_rows_satisfied;
  std::optional<bool> graph_connected;

  bool feasible() const { return violations.empty() && bound_violations.empty(); }
  /// Flow feasibility agrees with BFS connectivity and w agrees with the triangles.
  bool semantics_consistent() const;
};

/// Throws ModelError when a variable is missing or an unknown name is supplied.
AssignmentCheck check_assignment(const ConstraintSystem& cs, const Assignment& assignment);

}  // namespace netopt
