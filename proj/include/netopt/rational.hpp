#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/rational.hpp>

namespace boost {

// Boost 1.74's free `operator==(Arg, rational)` template is chosen for
// `rational == integer` under C++20's reversed-operand rewriting and calls
// itself forever. These non-template overloads win overload resolution and
// compare the parts directly.
namespace rational_fix {
template <class I>
constexpr bool equals(const rational<std::int64_t>& a, I b) {
  if (a.denominator() != 1) return false;
  if constexpr (std::is_signed_v<I>) {
    return a.numerator() == static_cast<std::int64_t>(b);
  } else {
    return a.numerator() >= 0 && static_cast<std::uint64_t>(a.numerator()) == static_cast<std::uint64_t>(b);
  }
}
}  // namespace rational_fix

#define NETOPT_RATIONAL_EQ(I)                                                                                    \
  constexpr bool operator==(const rational<std::int64_t>& a, I b) { return rational_fix::equals(a, b); }         \
  constexpr bool operator==(I b, const rational<std::int64_t>& a) { return rational_fix::equals(a, b); }         \
  constexpr bool operator!=(const rational<std::int64_t>& a, I b) { return !rational_fix::equals(a, b); }        \
  constexpr bool operator!=(I b, const rational<std::int64_t>& a) { return !rational_fix::equals(a, b); }
NETOPT_RATIONAL_EQ(int)
NETOPT_RATIONAL_EQ(long)
NETOPT_RATIONAL_EQ(long long)
NETOPT_RATIONAL_EQ(unsigned)
NETOPT_RATIONAL_EQ(unsigned long)
NETOPT_RATIONAL_EQ(unsigned long long)
#undef NETOPT_RATIONAL_EQ

}  // namespace boost

namespace netopt {

/// Exact arithmetic for every objective value, weight and metric.
using Rational = boost::rational<std::int64_t>;

/// Accepts "p/q", integers and plain decimals ("0.7", "-1.25"). Decimals are
/// converted exactly; at most 12 fractional digits are accepted.
Rational parse_rational(std::string_view text);

/// "7/10", "3", "-1/2".
std::string to_fraction_string(const Rational& value);

/// Fixed-point rendering rounded half away from zero, e.g. (8/5, 5) -> "1.60000".
std::string to_decimal_string(const Rational& value, int places);

double to_double(const Rational& value);

inline Rational rational_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace netopt
