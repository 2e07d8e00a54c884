#pragma once

// Exact rational scalars and their "num/den" text form.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace simil {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational frac(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  return Rational(num, den);
}

/// Always emits "num/den", including "n/1" for integers, so that text
/// round-trips are bit-exact.
inline std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "n", "n/d" or "-n/d". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    if (part.empty()) throw std::invalid_argument("bad rational: '" + std::string(text) + "'");
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) throw std::invalid_argument("bad rational: '" + std::string(text) + "'");
    for (std::size_t k = i; k < part.size(); ++k) {
      if (part[k] < '0' || part[k] > '9')
        throw std::invalid_argument("bad rational: '" + std::string(text) + "'");
    }
    return Integer(std::string(part[0] == '+' ? part.substr(1) : part));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Best rational approximation with denominator <= max_den (continued
/// fractions). Used only by the float ingestion path.
inline Rational rationalize(double x, std::int64_t max_den = 1'000'000'000) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot rationalize a non-finite value");
  const bool negative = x < 0;
  double v = std::fabs(x);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(v);
    const Integer ai(static_cast<long long>(a));
    const Integer p2 = ai * p1 + p0;
    const Integer q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rest = v - a;
    if (rest < 1e-15) break;
    v = 1.0 / rest;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  return negative ? Rational(-r) : r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace simil
