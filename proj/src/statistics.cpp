#include "netopt/statistics.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "netopt/errors.hpp"

namespace netopt {

// ---------------------------------------------------------------------------
// DistanceMatrix

DistanceMatrix::DistanceMatrix(std::vector<std::vector<Rational>> rows) : n_(rows.size()) {
  if (n_ == 0) throw ModelError("distance matrix: empty");
  values_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw ModelError("distance matrix: row length differs from n");
    values_.insert(values_.end(), row.begin(), row.end());
  }
  for (Node i = 0; i < n_; ++i) {
    if (at(i, i) != 0) throw ModelError("distance matrix: nonzero diagonal at " + std::to_string(i));
    for (Node j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i)) {
        throw ModelError("distance matrix: asymmetric entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      if (at(i, j) < 0) throw ModelError("distance matrix: negative entry");
    }
  }
}

DistanceMatrix DistanceMatrix::random_unit_square(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // 53 high bits -> [0, 1); avoids the implementation-defined real distributions.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<std::pair<double, double>> points(n);
  for (auto& p : points) {
    p.first = unit();
    p.second = unit();
  }
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      const double d = std::hypot(points[i].first - points[j].first, points[i].second - points[j].second);
      rows[i][j] = rows[j][i] = Rational(std::llround(d * 1e6), 1'000'000);
    }
  }
  return DistanceMatrix(std::move(rows));
}

DistanceMatrix DistanceMatrix::uniform(std::size_t n, const Rational& value) {
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, value));
  for (Node i = 0; i < n; ++i) rows[i][i] = 0;
  return DistanceMatrix(std::move(rows));
}

DistanceMatrix read_distance_matrix(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 1) throw ParseError("distance matrix: expected positive n on first line");
  std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (auto& row : rows) {
    for (auto& cell : row) {
      std::string token;
      if (!(in >> token)) throw ParseError("distance matrix: expected " + std::to_string(n * n) + " entries");
      cell = parse_rational(token);
    }
  }
  std::string trailing;
  if (in >> trailing) throw ParseError("distance matrix: trailing content '" + trailing + "'");
  try {
    return DistanceMatrix(std::move(rows));
  } catch (const ModelError& e) {
    throw ParseError(e.what());
  }
}

DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return read_distance_matrix(in);
}

void write_distance_matrix(const DistanceMatrix& m, std::ostream& out) {
  out << m.size() << '\n';
  for (Node i = 0; i < m.size(); ++i) {
    for (Node j = 0; j < m.size(); ++j) {
      if (j > 0) out << ' ';
      out << to_fraction_string(m.at(i, j));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Statistics

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::NonEdges: return "non_edges";
    case StatisticKind::Triangles: return "triangles";
    case StatisticKind::PhysicalDistance: return "physical_distance";
    case StatisticKind::FlowDistance: return "flow_distance";
  }
  return "unknown";
}

StatisticSpec StatisticSpec::physical_distance(DistanceMatrix m) {
  return {StatisticKind::PhysicalDistance, std::make_shared<const DistanceMatrix>(std::move(m))};
}

std::uint64_t s_non_edges(const Graph& g) { return g.pair_count() - g.edge_count(); }

std::uint64_t s_triangles(const Graph& g) { return count_triangles(g); }

Rational s_physical_distance(const Graph& g, const DistanceMatrix& delta) {
  if (delta.size() != g.node_count()) {
    throw ModelError("distance matrix has size " + std::to_string(delta.size()) + " but graph has " +
                     std::to_string(g.node_count()) + " nodes");
  }
  Rational total(0);
  for (auto [i, j] : g.edges()) total += delta.at(i, j);
  return total;
}

std::uint64_t s_flow_distance(const Graph& g) {
  try {
    return total_path_length(g);
  } catch (const DisconnectedGraphError&) {
    throw DisconnectedGraphError("flow distance: no feasible multicommodity flow on a disconnected graph");
  }
}

Rational evaluate(const StatisticSpec& spec, const Graph& g) {
  switch (spec.kind) {
    case StatisticKind::NonEdges: return Rational(static_cast<std::int64_t>(s_non_edges(g)));
    case StatisticKind::Triangles: return Rational(static_cast<std::int64_t>(s_triangles(g)));
    case StatisticKind::PhysicalDistance:
      if (!spec.distances) throw ModelError("physical distance statistic without a distance matrix");
      return s_physical_distance(g, *spec.distances);
    case StatisticKind::FlowDistance: return Rational(static_cast<std::int64_t>(s_flow_distance(g)));
  }
  throw ModelError("unknown statistic");
}

// ---------------------------------------------------------------------------
// Hamiltonian

void validate_alpha(const Rational& alpha) {
  if (alpha < 0 || alpha > 1) throw ModelError("alpha must lie in [0, 1], got " + to_fraction_string(alpha));
}

Hamiltonian::Hamiltonian(HamiltonianForm form, Sense sense, std::vector<HamiltonianTerm> terms,
                         std::optional<Rational> alpha)
    : form_(form), sense_(sense), terms_(std::move(terms)), alpha_(std::move(alpha)) {
  if (terms_.empty()) throw ModelError("hamiltonian needs at least one term");
  for (const auto& t : terms_) {
    if (t.statistic.kind == StatisticKind::PhysicalDistance && !t.statistic.distances) {
      throw ModelError("physical distance term without a distance matrix");
    }
    if (t.statistic.kind != StatisticKind::PhysicalDistance && t.statistic.distances) {
      throw ModelError("distance matrix supplied for a " + to_string(t.statistic.kind) + " term");
    }
  }
  if (alpha_) {
    validate_alpha(*alpha_);
    if (form_ != HamiltonianForm::MaxMin || terms_.size() != 2) {
      throw ModelError("alpha rescaling needs the max-min form with exactly two terms");
    }
  }
}

Hamiltonian Hamiltonian::linear(std::vector<HamiltonianTerm> terms, Sense sense) {
  return Hamiltonian(HamiltonianForm::Linear, sense, std::move(terms), std::nullopt);
}

Hamiltonian Hamiltonian::max_min(std::vector<HamiltonianTerm> terms) {
  return Hamiltonian(HamiltonianForm::MaxMin, Sense::Maximize, std::move(terms), std::nullopt);
}

Hamiltonian Hamiltonian::max_min(const Rational& alpha, StatisticSpec first, StatisticSpec second) {
  validate_alpha(alpha);
  return Hamiltonian(HamiltonianForm::MaxMin, Sense::Maximize,
                     {{alpha, std::move(first)}, {1 - alpha, std::move(second)}}, alpha);
}

Hamiltonian Hamiltonian::max_min_rescaled(const Rational& theta1, const Rational& theta2, StatisticSpec first,
                                          StatisticSpec second) {
  if (theta1 < 0 || theta2 < 0 || theta1 + theta2 == 0) {
    throw ModelError("rescaling needs nonnegative weights with a positive sum");
  }
  return max_min(theta1 / (theta1 + theta2), std::move(first), std::move(second));
}

Hamiltonian Hamiltonian::min_max(const Rational& alpha, StatisticSpec first, StatisticSpec second) {
  validate_alpha(alpha);
  return Hamiltonian(HamiltonianForm::MaxMin, Sense::Minimize,
                     {{alpha, std::move(first)}, {1 - alpha, std::move(second)}}, alpha);
}

bool Hamiltonian::requires_connected() const {
  for (const auto& t : terms_) {
    if (t.statistic.requires_connected()) return true;
  }
  return false;
}

Rational Hamiltonian::combine(std::span<const Rational> statistic_values) const {
  if (statistic_values.size() != terms_.size()) throw ModelError("statistic count does not match term count");
  if (form_ == HamiltonianForm::Linear) {
    Rational sum(0);
    for (std::size_t j = 0; j < terms_.size(); ++j) sum += terms_[j].theta * statistic_values[j];
    return sum;
  }
  Rational value = terms_[0].theta * statistic_values[0];
  for (std::size_t j = 1; j < terms_.size(); ++j) {
    const Rational term = terms_[j].theta * statistic_values[j];
    value = sense_ == Sense::Maximize ? rational_min(value, term) : rational_max(value, term);
  }
  return value;
}

std::vector<Rational> statistic_values(const Hamiltonian& h, const Graph& g) {
  std::vector<Rational> values;
  values.reserve(h.terms().size());
  for (const auto& t : h.terms()) values.push_back(evaluate(t.statistic, g));
  return values;
}

Rational eval_hamiltonian(const Hamiltonian& h, const Graph& g) { return h.combine(statistic_values(h, g)); }

// ---------------------------------------------------------------------------
// SampleSpace

bool SampleSpace::contains(const Graph& g) const {
  if (edge_count && g.edge_count() != *edge_count) return false;
  return !connected || is_connected(g);
}

std::string SampleSpace::describe() const {
  std::string out = connected ? "connected" : "all";
  if (edge_count) out += ",density=" + std::to_string(*edge_count);
  return out;
}

}  // namespace netopt
