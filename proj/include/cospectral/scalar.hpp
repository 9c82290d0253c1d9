#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cospectral {

/// Exact rational in lowest terms with positive denominator (GMP).
using Rational = mpq_class;

/// Raised when floating-point diagonalization overflows or produces NaN.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a rational literal cannot be parsed.
class RationalParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr const char* kName = "exact";

  static int sign(const Rational& v) { return sgn(v); }
  static bool finite(const Rational&) { return true; }
  static Rational from_rational(const Rational& v) { return v; }
  static double to_double(const Rational& v) { return v.get_d(); }
  static std::string format(const Rational& v) { return v.get_str(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr const char* kName = "float";

  static int sign(double v) { return (v > 0.0) - (v < 0.0); }
  static bool finite(double v) { return std::isfinite(v); }
  static double from_rational(const Rational& v) { return v.get_d(); }
  static double to_double(double v) { return v; }
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

template <typename T>
concept DiagonalScalar = requires { ScalarTraits<T>::kName; };

namespace detail {

inline Rational pow10(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r(exponent < 0 ? mpz_class(1) : p, exponent < 0 ? p : mpz_class(1));
  r.canonicalize();
  return r;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace detail

/// Parses `p/q`, an integer, a decimal (`-0.125`) or scientific literal
/// (`1e-9`, `2.5E3`) into an exact rational. Decimal digits are converted by
/// powers of ten, never through binary floating point.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  const auto fail = [&]() -> RationalParseError {
    return RationalParseError("invalid rational literal '" + std::string(text) + "'");
  };
  if (s.empty()) throw fail();

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
    mpz_class q(std::string(den), 10);
    if (q == 0) throw RationalParseError("zero denominator in '" + std::string(text) + "'");
    value = Rational(mpz_class(std::string(num), 10), q);
    value.canonicalize();
  } else {
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!detail::all_digits(exp_text) || exp_text.size() > 6) throw fail();
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
      const auto whole = s.substr(0, dot);
      const auto frac = s.substr(dot + 1);
      if (whole.empty() && frac.empty()) throw fail();
      if ((!whole.empty() && !detail::all_digits(whole)) || (!frac.empty() && !detail::all_digits(frac)))
        throw fail();
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!detail::all_digits(s)) throw fail();
      digits = std::string(s);
    }
    value = Rational(mpz_class(digits, 10)) * detail::pow10(exponent);
  }
  if (negative) value = -value;
  return value;
}

inline std::string format_rational(const Rational& v) { return v.get_str(); }

}  // namespace cospectral
