#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "nloop/errors.hpp"

namespace nloop {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using Integer = mpz_class;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace detail

/// Parses "p/q" or "p". Throws SchemaError on anything else, including q = 0.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = detail::trim(text);
  auto slash = s.find('/');
  std::string_view num = detail::trim(s.substr(0, slash));
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : detail::trim(s.substr(slash + 1));
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) || den.front() == '-' ||
      den.front() == '+') {
    throw SchemaError("not a rational literal: '" + std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  Integer p(std::string(num), 10);
  Integer q(std::string(den), 10);
  if (q == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

}  // namespace nloop
