#include "netopt/rational.hpp"

#include <cctype>
#include <charconv>
#include <limits>

#include "netopt/errors.hpp"

namespace netopt {

namespace {

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("invalid rational: '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_integer(trim(s.substr(0, slash)), s);
    const auto den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }

  const auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    std::string_view digits = s;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    return Rational(parse_integer(digits, s));
  }

  bool negative = false;
  std::string_view int_part = s.substr(0, dot);
  const std::string_view frac_part = s.substr(dot + 1);
  if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
    negative = int_part.front() == '-';
    int_part.remove_prefix(1);
  }
  if (int_part.empty() && frac_part.empty()) throw ParseError("invalid rational: '" + std::string(s) + "'");
  if (frac_part.size() > 12) throw ParseError("too many fractional digits in '" + std::string(s) + "'");
  for (char c : int_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("invalid rational: '" + std::string(s) + "'");
  }
  for (char c : frac_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("invalid rational: '" + std::string(s) + "'");
  }

  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::int64_t whole = int_part.empty() ? 0 : parse_integer(int_part, s);
  const std::int64_t frac = frac_part.empty() ? 0 : parse_integer(frac_part, s);
  if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / scale) {
    throw ParseError("rational out of range: '" + std::string(s) + "'");
  }
  Rational value(whole * scale + frac, scale);
  return negative ? -value : value;
}

std::string to_fraction_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string to_decimal_string(const Rational& value, int places) {
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? -value : value;
  // round half away from zero on |value| * scale
  const Rational scaled = magnitude * scale;
  std::int64_t q = scaled.numerator() / scaled.denominator();
  const std::int64_t r = scaled.numerator() % scaled.denominator();
  if (2 * r >= scaled.denominator()) ++q;

  std::string digits = std::to_string(q / scale);
  if (places > 0) {
    std::string frac = std::to_string(q % scale);
    frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
    digits += "." + frac;
  }
  return (negative && q != 0) ? "-" + digits : digits;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

}  // namespace netopt
