#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pfm {

// Arbitrary precision, expression templates off so `auto` always holds a value.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& r) { return Integer(boost::multiprecision::numerator(r)); }
inline Integer denominator_of(const Rational& r) {
  return Integer(boost::multiprecision::denominator(r));
}

/// "p/q", or "p" when the value is an integer.
inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p", "p/q" or "-p/q". Throws std::runtime_error on malformed text or q == 0.
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) throw std::runtime_error("malformed rational '" + std::string(text) + "'");
  Integer n(std::string(num.front() == '+' ? num.substr(1) : num));
  Integer d(std::string(den.front() == '+' ? den.substr(1) : den));
  if (d == 0) throw std::runtime_error("zero denominator in '" + std::string(text) + "'");
  return Rational(n, d);
}

inline const Rational& one_half() {
  static const Rational h(1, 2);
  return h;
}

inline Rational pow2_inverse(unsigned k) { return Rational(Integer(1), Integer(1) << k); }

}  // namespace pfm
