#pragma once

// Exact rational scalar type and small helpers shared by the algebraic
// layers. All exact verdicts in this library are computed over Rational;
// double is the float mirror used by the simulator.

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace ebil {

using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline Rational rational_from(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p/q", "p", or a plain decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

template <class T>
T pow_int(const T& base, int e) {
    T acc = T(1);
    T b = base;
    int k = e;
    if (k < 0) throw std::invalid_argument("negative exponent");
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(double x) { return (x > 0) - (x < 0); }

inline Rational abs_value(const Rational& q) { return abs(q); }
inline double abs_value(double x) { return std::fabs(x); }

// The simplest rational (smallest denominator, then smallest numerator)
// in the closed interval [lo, hi]. Used to report isolated roots exactly
// when they happen to be rational.
Rational simplest_rational_in(const Rational& lo, const Rational& hi);

// Continued-fraction snap: the nearest rational to x with denominator at
// most max_den, if it lies within reltol of x.
std::optional<Rational> snap_to_rational(double x, long max_den, double reltol);

}  // namespace ebil
