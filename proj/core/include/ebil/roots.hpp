#pragma once

// Real root extraction. The exact path isolates roots of rational
// polynomials with Sturm sign-variation counting and refines by bisection;
// the float path uses companion-matrix eigenvalues.

#include <ebil/poly.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace ebil {

struct RationalInterval {
    std::optional<Rational> lo;  // open bound; unset = -inf
    std::optional<Rational> hi;  // open bound; unset = +inf
};

// All real roots of p in the (open) interval, with multiplicity, in
// increasing order. Roots that are rational are reported exactly; the
// rest as the midpoint of an isolating interval of width <= 2^-60.
// Throws on the zero polynomial.
std::vector<std::pair<Rational, int>> real_roots(const RPoly& p,
                                                 const RationalInterval& iv = {});

// Number of real roots of p (without multiplicity) in (lo, hi].
int sturm_count(const RPoly& p, const Rational& lo, const Rational& hi);

// Square-free part p / gcd(p, p').
RPoly square_free_part(const RPoly& p);

// Float mirror: real eigenvalues of the companion matrix, clustered to
// multiplicities at the given tolerance.
std::vector<std::pair<double, int>> real_roots(const DPoly& p, double tol = 1e-9);

}  // namespace ebil
