#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace hvp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 113-bit binary significand (about 34 decimal digits), used for the float
// arithmetic mode when the frequency cannot be written as a ratio.
using QuadFloat = boost::multiprecision::cpp_bin_float_quad;

template <class S>
inline constexpr bool is_exact_scalar = false;
template <>
inline constexpr bool is_exact_scalar<Rational> = true;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const QuadFloat& x) { return x.convert_to<double>(); }

template <class S>
S from_rational(const Rational& r);

template <>
inline Rational from_rational<Rational>(const Rational& r) {
  return r;
}

template <>
inline QuadFloat from_rational<QuadFloat>(const Rational& r) {
  return QuadFloat(numerator(r)) / QuadFloat(denominator(r));
}

namespace detail {

inline BigInt integer_from_digits(std::string_view digits) {
  if (digits.empty()) throw std::invalid_argument("expected digits");
  BigInt value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("expected digits");
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace detail

// Parses "3", "-5/4", "0.125", or "2.5e-3" into an exact rational.
inline Rational rational_from_string(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };

  std::string_view rest = text;
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
  while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) rest.remove_suffix(1);
  if (rest.empty()) fail();

  bool negative = false;
  if (rest.front() == '+' || rest.front() == '-') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }

  try {
    if (auto slash = rest.find('/'); slash != std::string_view::npos) {
      BigInt num = detail::integer_from_digits(rest.substr(0, slash));
      BigInt den = detail::integer_from_digits(rest.substr(slash + 1));
      if (den == 0) fail();
      Rational value(num, den);
      return negative ? -value : value;
    }

    std::string_view mantissa = rest;
    long exponent = 0;
    if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = rest.substr(0, e);
      std::string tail(rest.substr(e + 1));
      if (tail.empty()) fail();
      size_t used = 0;
      exponent = std::stol(tail, &used);
      if (used != tail.size()) fail();
    }

    std::string digits;
    long scale = 0;  // digits after the decimal point
    bool seen_dot = false;
    for (char c : mantissa) {
      if (c == '.') {
        if (seen_dot) fail();
        seen_dot = true;
      } else {
        digits.push_back(c);
        if (seen_dot) ++scale;
      }
    }
    BigInt mant = detail::integer_from_digits(digits);

    long shift = exponent - scale;
    Rational value(mant, 1);
    if (shift > 0)
      value *= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift)), 1);
    else if (shift < 0)
      value /= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-shift)), 1);
    return negative ? -value : value;
  } catch (const std::invalid_argument&) {
    fail();
  } catch (const std::out_of_range&) {
    fail();
  }
  return Rational(0);  // unreachable
}

}  // namespace hvp
