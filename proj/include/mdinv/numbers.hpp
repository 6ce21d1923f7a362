#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "mdinv/errors.hpp"

namespace mdinv {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline std::string to_string(const Integer& a) { return a.str(); }

/// Reduced "p/q", or "p" for integers.
inline std::string to_string(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline std::optional<std::int64_t> to_int64(const Integer& a) {
  if (a > std::numeric_limits<std::int64_t>::max() ||
      a < std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  return static_cast<std::int64_t>(a);
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

/// Parses an optionally signed decimal integer. No whitespace, no exponent.
inline Integer parse_integer(std::string_view text) {
  std::string_view digits = text;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!detail::all_digits(digits))
    throw ValidationError("not an integer: \"" + std::string(text) + "\"");
  const Integer value{std::string(digits)};
  return negative ? Integer(-value) : value;
}

/// Parses "p/q" or "p". Decimal points and exponents are rejected so that
/// every accepted value is exact.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num_text = text.substr(0, slash);
  const std::string_view den_text = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  const std::string_view num_digits =
      !num_text.empty() && (num_text[0] == '-' || num_text[0] == '+') ? num_text.substr(1) : num_text;
  if (!detail::all_digits(num_digits) || !detail::all_digits(den_text))
    throw ValidationError("not an exact rational \"p/q\": \"" + std::string(text) + "\"");
  const Integer num = parse_integer(num_text);
  const Integer den(std::string{den_text});
  if (den == 0) throw ValidationError("zero denominator: \"" + std::string(text) + "\"");
  return Rational(num, den);
}

}  // namespace mdinv
