#pragma once

#include <gmpxx.h>

#include <string>

namespace amencert {

/// Exact scalar for verification paths. Canonical (gcd-reduced) at all times.
using Rational = mpq_class;

/// "p/q" (or "p" when q = 1), canonical lowest terms, '-' on the numerator.
std::string to_string(const Rational& r);

/// Accepts "p/q", "p", and decimal literals like "0.25" (converted exactly).
Rational parse_rational(const std::string& text);

/// Nearest double, ties to even. mpq_get_d truncates, so this is done by hand.
double to_double_nearest_even(const Rational& r);

/// Exact: every finite double is a dyadic rational.
Rational rational_from_double(double x);

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// p/q in canonical form. The two-argument mpq_class constructor does not
/// reduce, and GMP comparisons require canonical operands; always build
/// fractions through this.
inline Rational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Numeric mode tag carried by serialized artifacts.
enum class NumericMode { Exact, Float };

inline const char* mode_name(NumericMode m) { return m == NumericMode::Exact ? "exact" : "float"; }

/// Traits unifying the two scalar types used by the templated math layers.
template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational abs(const Rational& x) { return rat_abs(x); }
    static Rational from_rational(const Rational& r) { return r; }
    static Rational to_rational(const Rational& x) { return x; }
    static constexpr NumericMode mode = NumericMode::Exact;
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double abs(double x) { return x < 0 ? -x : x; }
    static double from_rational(const Rational& r) { return to_double_nearest_even(r); }
    static Rational to_rational(double x) { return rational_from_double(x); }
    static constexpr NumericMode mode = NumericMode::Float;
};

}  // namespace amencert
