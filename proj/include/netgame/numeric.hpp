#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace netgame {

using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised whenever a closed form or linear system would leave the region where
// best responses converge (rho_K < c / alpha, or a non-positive denominator).
class StabilityError : public Error {
 public:
  using Error::Error;
};

template <typename T>
inline constexpr bool is_rational_v = std::is_same_v<T, Rational>;

template <typename Scalar>
double to_double(const Scalar& v) {
  if constexpr (is_rational_v<Scalar>) {
    return v.template convert_to<double>();
  } else {
    return static_cast<double>(v);
  }
}

template <typename Scalar>
Scalar from_int(std::int64_t v) {
  return Scalar(v);
}

template <typename Scalar>
Scalar ratio(std::int64_t num, std::int64_t den) {
  if constexpr (is_rational_v<Scalar>) {
    return Rational(num, den);
  } else {
    return static_cast<Scalar>(num) / static_cast<Scalar>(den);
  }
}

// Parses "0.6", "-1.25", "3", "1/3" or "2.5e-3". Decimal input is read
// exactly when Scalar is Rational, so "3.7" becomes 37/10.
template <typename Scalar>
Scalar parse_number(std::string_view text) {
  auto fail = [&]() -> Scalar {
    throw Error("cannot parse number '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Scalar num = parse_number<Scalar>(text.substr(0, slash));
    Scalar den = parse_number<Scalar>(text.substr(slash + 1));
    if (den == Scalar(0)) return fail();
    return num / den;
  }

  if constexpr (!is_rational_v<Scalar>) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != s.size()) return fail();
    return static_cast<Scalar>(v);
  } else {
    bool negative = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
    boost::multiprecision::cpp_int mantissa = 0;
    int frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < text.size(); ++i) {
      char ch = text[i];
      if (ch >= '0' && ch <= '9') {
        mantissa = mantissa * 10 + (ch - '0');
        if (seen_dot) ++frac_digits;
        seen_digit = true;
      } else if (ch == '.' && !seen_dot) {
        seen_dot = true;
      } else {
        break;
      }
    }
    if (!seen_digit) return fail();
    int exponent = 0;
    if (i < text.size()) {
      if (text[i] != 'e' && text[i] != 'E') return fail();
      std::string e(text.substr(i + 1));
      std::size_t used = 0;
      try {
        exponent = std::stoi(e, &used);
      } catch (const std::exception&) {
        return fail();
      }
      if (used != e.size()) return fail();
    }
    exponent -= frac_digits;
    boost::multiprecision::cpp_int scale = 1;
    for (int k = 0; k < std::abs(exponent); ++k) scale *= 10;
    Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
    return negative ? Rational(-r) : r;
  }
}

inline std::string to_string(const Rational& r) { return r.str(); }

// Shortest round-trip representation of a double.
inline std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace netgame
