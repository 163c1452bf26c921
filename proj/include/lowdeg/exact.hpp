// Exact integer / rational helpers on top of GMP.
#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace lowdeg {

using Integer = mpz_class;
using Rational = mpq_class;

/// Thrown when an input exceeds one of the hard combinatorial limits.
class size_limit_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Thrown when model parameters violate a stated invariant.
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

/// base^e for any integer e; negative exponents invert (base must be nonzero).
inline Rational pow_rat(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("pow_rat: zero to a negative power");
    return pow_rat(Rational(1) / base, -e);
  }
  Rational out(pow_int(base.get_num(), static_cast<unsigned long>(e)),
               pow_int(base.get_den(), static_cast<unsigned long>(e)));
  out.canonicalize();
  return out;
}

inline Integer factorial(unsigned long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// n (n-1) ... (n-m+1); zero when m > n.
inline Integer falling_factorial(const Integer& n, unsigned long m) {
  if (n < 0) return 0;
  Integer out = 1;
  for (unsigned long i = 0; i < m; ++i) {
    Integer f = n - i;
    if (f <= 0) return 0;
    out *= f;
  }
  return out;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline Rational abs_rat(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Exact value of a finite double (every double is a dyadic rational).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
  return Rational(v);
}

namespace detail {

inline Integer pow10(unsigned long e) { return pow_int(Integer(10), e); }

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

/// Parses "p/q", integers, and decimal / scientific notation ("0.15", "1e-3")
/// into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    std::string num_digits = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
    if (!detail::all_digits(num_digits) || !detail::all_digits(den))
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    Integer d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational out(Integer(num[0] == '+' ? num.substr(1) : num, 10), d);
    out.canonicalize();
    return out;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string mantissa, exponent;
  if (auto e = s.find_first_of("eE", pos); e != std::string::npos) {
    mantissa = s.substr(pos, e - pos);
    exponent = s.substr(e + 1);
  } else {
    mantissa = s.substr(pos);
  }
  std::string int_part = mantissa, frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty())
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  if ((!int_part.empty() && !detail::all_digits(int_part)) ||
      (!frac_part.empty() && !detail::all_digits(frac_part)))
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");

  long exp10 = 0;
  if (!exponent.empty()) {
    auto first = exponent.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, exponent.data() + exponent.size(), exp10);
    if (ec != std::errc() || ptr != exponent.data() + exponent.size())
      throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
  }
  Integer digits(int_part + frac_part, 10);
  exp10 -= static_cast<long>(frac_part.size());
  Rational out = exp10 >= 0 ? Rational(digits * detail::pow10(static_cast<unsigned long>(exp10)))
                            : Rational(digits, detail::pow10(static_cast<unsigned long>(-exp10)));
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

/// Shortest round-trip decimal of `v`, read back exactly: 0.15 -> 3/20.
inline Rational rational_from_decimal_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace lowdeg
