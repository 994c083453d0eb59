#include <fstream>
#include <numeric>
#include <sstream>

#include "netopt/errors.hpp"
#include "netopt/lp_builder.hpp"

namespace netopt {

namespace {

constexpr std::size_t kTermsPerLine = 8;

std::int64_t denominator_lcm(const LinearExpr& expr, const Rational& rhs) {
  std::int64_t l = rhs.denominator();
  for (const auto& [var, coef] : expr.terms()) l = std::lcm(l, coef.denominator());
  return l;
}

/// Decimal digits needed to print value exactly, if it terminates.
std::optional<int> terminating_places(std::int64_t den) {
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return std::nullopt;
  return std::max(twos, fives);
}

/// Exact decimal when possible, otherwise 12 places rounded away from the
/// feasible region's interior (upper bounds up, lower bounds down).
std::string bound_number(const Rational& value, bool round_up) {
  if (auto places = terminating_places(value.denominator())) return to_decimal_string(value, *places);
  constexpr std::int64_t scale = 1'000'000'000'000;
  const Rational scaled = value * scale;
  std::int64_t q = scaled.numerator() / scaled.denominator();
  if (round_up && Rational(q) < scaled) ++q;
  if (!round_up && Rational(q) > scaled) --q;
  return to_decimal_string(Rational(q, scale), 12);
}

void write_terms(std::ostream& out, const ConstraintSystem& cs, const LinearExpr& expr, std::int64_t scale) {
  if (expr.terms().empty()) {
    if (cs.variables().empty()) throw ModelError("cannot write an empty row without any variable");
    out << " 0 " << cs.variables().front().name;
    return;
  }
  std::size_t count = 0;
  for (const auto& [var, coef] : expr.terms()) {
    const Rational scaled = coef * scale;
    const std::int64_t c = scaled.numerator();  // integral after scaling
    if (count > 0 && count % kTermsPerLine == 0) out << "\n  ";
    if (count == 0) {
      if (c < 0) out << " -";
    } else {
      out << (c < 0 ? " -" : " +");
    }
    const std::int64_t magnitude = c < 0 ? -c : c;
    if (magnitude != 1) out << ' ' << magnitude;
    out << ' ' << cs.variables()[var].name;
    ++count;
  }
}

}  // namespace

void export_lp(const ConstraintSystem& cs, std::ostream& out) {
  if (!cs.title.empty()) out << "\\ " << cs.title << '\n';
  const Objective& obj = cs.objective();
  out << (obj.sense == Sense::Maximize ? "Maximize" : "Minimize") << '\n';
  const std::int64_t obj_scale = denominator_lcm(obj.expr, Rational(0));
  if (obj_scale != 1) out << "\\ objective coefficients scaled by " << obj_scale << '\n';
  if (obj.expr.constant() != 0) out << "\\ objective constant " << to_fraction_string(obj.expr.constant()) << " omitted\n";
  out << " obj:";
  if (obj.expr.terms().empty()) {
    out << " 0";
    if (!cs.variables().empty()) out << ' ' << cs.variables().front().name;
  } else {
    write_terms(out, cs, obj.expr, obj_scale);
  }
  out << '\n';

  out << "Subject To\n";
  for (const auto& row : cs.constraints()) {
    const std::int64_t scale = denominator_lcm(row.expr, row.rhs);
    out << ' ' << row.name << ':';
    write_terms(out, cs, row.expr, scale);
    out << ' ' << to_string(row.relation) << ' ' << (row.rhs * scale).numerator() << '\n';
  }

  out << "Bounds\n";
  for (const auto& v : cs.variables()) {
    if (v.kind == VarKind::Binary) continue;
    const bool default_lower = v.lower && *v.lower == 0;
    if (default_lower && !v.upper) continue;
    if (!v.lower && !v.upper) {
      out << ' ' << v.name << " free\n";
    } else if (!v.upper) {
      out << ' ' << v.name << " >= " << bound_number(*v.lower, false) << '\n';
    } else {
      out << ' ' << (v.lower ? bound_number(*v.lower, false) : std::string("-inf")) << " <= " << v.name
          << " <= " << bound_number(*v.upper, true) << '\n';
    }
  }

  bool any_binary = false;
  std::size_t on_line = 0;
  for (const auto& v : cs.variables()) {
    if (v.kind != VarKind::Binary) continue;
    if (!any_binary) out << "Binaries\n";
    any_binary = true;
    out << ' ' << v.name;
    if (++on_line == kTermsPerLine) {
      out << '\n';
      on_line = 0;
    }
  }
  if (on_line != 0) out << '\n';
  out << "End\n";
}

void export_lp(const ConstraintSystem& cs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  export_lp(cs, out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string to_lp_string(const ConstraintSystem& cs) {
  std::ostringstream out;
  export_lp(cs, out);
  return out.str();
}

namespace {

nlohmann::ordered_json terms_json(const ConstraintSystem& cs, const LinearExpr& expr) {
  auto terms = nlohmann::ordered_json::array();
  for (const auto& [var, coef] : expr.terms()) {
    terms.push_back({cs.variables()[var].name, to_fraction_string(coef)});
  }
  return terms;
}

}  // namespace

nlohmann::ordered_json to_json(const ConstraintSystem& cs) {
  nlohmann::ordered_json j;
  j["title"] = cs.title;
  auto& vars = j["variables"] = nlohmann::ordered_json::array();
  for (const auto& v : cs.variables()) {
    nlohmann::ordered_json entry;
    entry["name"] = v.name;
    entry["kind"] = v.kind == VarKind::Binary ? "binary" : "continuous";
    entry["lower"] = v.lower ? nlohmann::ordered_json(to_fraction_string(*v.lower)) : nlohmann::ordered_json(nullptr);
    entry["upper"] = v.upper ? nlohmann::ordered_json(to_fraction_string(*v.upper)) : nlohmann::ordered_json(nullptr);
    vars.push_back(std::move(entry));
  }
  auto& rows = j["constraints"] = nlohmann::ordered_json::array();
  for (const auto& row : cs.constraints()) {
    nlohmann::ordered_json entry;
    entry["name"] = row.name;
    entry["terms"] = terms_json(cs, row.expr);
    entry["relation"] = to_string(row.relation);
    entry["rhs"] = to_fraction_string(row.rhs);
    rows.push_back(std::move(entry));
  }
  j["objective"] = {{"sense", cs.objective().sense == Sense::Maximize ? "maximize" : "minimize"},
                    {"terms", terms_json(cs, cs.objective().expr)},
                    {"constant", to_fraction_string(cs.objective().expr.constant())}};
  auto& stats = j["statistics"] = nlohmann::ordered_json::array();
  for (const auto& s : cs.statistics()) {
    stats.push_back({{"name", s.name}, {"terms", terms_json(cs, s.expr)}, {"constant", to_fraction_string(s.expr.constant())}});
  }
  return j;
}

Assignment read_assignment(std::istream& in) {
  Assignment a;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find_first_of("#\\"); pos != std::string::npos) line.erase(pos);
    std::istringstream fields(line);
    std::string name;
    std::string value;
    if (!(fields >> name)) continue;
    if (!(fields >> value)) throw ParseError("assignment line " + std::to_string(line_no) + ": missing value");
    std::string extra;
    if (fields >> extra) throw ParseError("assignment line " + std::to_string(line_no) + ": trailing content");
    if (!a.emplace(name, parse_rational(value)).second) {
      throw ParseError("assignment line " + std::to_string(line_no) + ": duplicate variable '" + name + "'");
    }
  }
  return a;
}

}  // namespace netopt
