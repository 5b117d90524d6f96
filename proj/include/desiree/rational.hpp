#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace desiree {

using Rational = boost::rational<std::int64_t>;

// Parses "30", "1.2", "-0.5" exactly. Returns nullopt on malformed input.
inline std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    seen_digit = true;
    if (num > (INT64_MAX - 9) / 10) return std::nullopt;
    num = num * 10 + (c - '0');
    if (seen_point) {
      if (den > INT64_MAX / 10) return std::nullopt;
      den *= 10;
    }
  }
  if (!seen_digit) return std::nullopt;
  Rational r(num, den);
  return negative ? -r : r;
}

// Canonical text: integers plainly, terminating decimals as decimals,
// everything else as "num/den". parse_decimal / "a/b" parsing inverts it.
inline std::string format_rational(const Rational& r) {
  std::int64_t num = r.numerator();
  const std::int64_t den = r.denominator();
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  if (den == 1) return sign + std::to_string(num);

  std::int64_t rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return sign + std::to_string(num) + "/" + std::to_string(den);

  const int digits = twos > fives ? twos : fives;
  std::int64_t scale = 1;
  for (int k = 0; k < digits; ++k) scale *= 10;
  const std::int64_t scaled = num * (scale / den);
  std::string frac = std::to_string(scaled % scale);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return sign + std::to_string(scaled / scale) + "." + frac;
}

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace desiree
