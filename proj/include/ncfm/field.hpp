#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ncfm {

// Exact scalar type used for all structural computations (rank, kernels,
// Kalman, similarity). Always kept in lowest terms with positive denominator
// by mpq_class canonicalization.
using Rational = mpq_class;

inline Rational rational_of(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational_of: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", "p" or "-p/q". Throws on malformed input.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  Rational q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("parse_rational: bad rational '" + text + "'");
  if (q.get_den() == 0)
    throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Relative float threshold used everywhere floats appear (pivots, residuals).
inline constexpr double kFloatTol = 1e-9;

template <typename K>
struct field_traits;

template <>
struct field_traits<Rational> {
  static constexpr bool is_exact = true;
  static constexpr bool is_complex = false;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational conj(const Rational& x) { return x; }
  // Pivot preference score; exact fields only need nonzero-ness.
  static double abs_score(const Rational& x) { return is_zero(x) ? 0.0 : 1.0; }
  static Rational from_rational(const Rational& q) { return q; }
  static std::string name() { return "rational"; }
};

template <>
struct field_traits<double> {
  static constexpr bool is_exact = false;
  static constexpr bool is_complex = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static double conj(double x) { return x; }
  static double abs_score(double x) { return std::abs(x); }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static std::string name() { return "float"; }
};

template <>
struct field_traits<std::complex<double>> {
  static constexpr bool is_exact = false;
  static constexpr bool is_complex = true;
  static std::complex<double> zero() { return {0.0, 0.0}; }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static bool is_zero(const std::complex<double>& x) { return x == zero(); }
  static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
  static double abs_score(const std::complex<double>& x) { return std::abs(x); }
  static std::complex<double> from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
  static std::string name() { return "complex"; }
};

}  // namespace ncfm
