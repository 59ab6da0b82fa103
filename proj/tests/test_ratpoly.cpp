#include <ebil/poly.hpp>
#include <ebil/rational.hpp>
#include <ebil/roots.hpp>

#include <doctest.h>

using namespace ebil;

TEST_SUITE("ratpoly") {

TEST_CASE("rational literal parsing") {
    CHECK(parse_rational("3/4") == rational_from(3, 4));
    CHECK(parse_rational("-2/6") == rational_from(-1, 3));
    CHECK(parse_rational("42") == 42);
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("0.25") == rational_from(1, 4));  // not octal
    CHECK(parse_rational("007") == 7);
    CHECK(parse_rational("-0.125") == rational_from(-1, 8));
    CHECK(parse_rational("3.") == 3);
    CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("simplest rational in an interval") {
    CHECK(simplest_rational_in(rational_from(1, 3), rational_from(1, 2)) == rational_from(1, 2));
    CHECK(simplest_rational_in(rational_from(28, 100), rational_from(35, 100)) ==
          rational_from(1, 3));
    CHECK(simplest_rational_in(Rational(2), Rational(3)) == 2);
    CHECK(simplest_rational_in(rational_from(-1, 2), rational_from(-1, 3)) ==
          rational_from(-1, 2));
    CHECK(simplest_rational_in(rational_from(-1, 5), rational_from(1, 7)) == 0);
    CHECK_THROWS_AS(simplest_rational_in(Rational(1), Rational(0)), std::invalid_argument);
}

TEST_CASE("continued-fraction snapping") {
    auto q = snap_to_rational(1.0 / 3.0, 1000000, 1e-9);
    REQUIRE(q.has_value());
    CHECK(*q == rational_from(1, 3));
    CHECK(!snap_to_rational(3.14159265358979, 10, 1e-12).has_value());
    CHECK(!snap_to_rational(std::nan(""), 100, 1e-9).has_value());
}

TEST_CASE("polynomial arithmetic and division") {
    RPoly p = RPoly::from_roots({Rational(1), Rational(2), Rational(-3)});
    CHECK(p.degree() == 3);
    CHECK(p.eval(Rational(1)) == 0);
    CHECK(p.eval(Rational(0)) == 6);

    RPoly d({rational_from(-2), Rational(1)});  // x - 2
    auto [q, r] = p.divmod(d);
    CHECK(r.is_zero());
    CHECK(q * d == p);

    RPoly g = poly_gcd(p, p.derivative());
    CHECK(g == RPoly::constant(Rational(1)));  // simple roots

    RPoly sq = d * d;
    CHECK(poly_gcd(sq, sq.derivative()) == d.monic());
}

TEST_CASE("coefficient reversal swaps the variable with its reciprocal") {
    RPoly p({Rational(2), Rational(0), Rational(5)});  // 5x^2 + 2
    RPoly rev = p.reversed(3);                         // x^3 p(1/x) = 2x^3 + 5x
    CHECK(rev.coeff(3) == 2);
    CHECK(rev.coeff(1) == 5);
    CHECK(rev.coeff(0) == 0);
    CHECK_THROWS_AS(p.reversed(1), std::invalid_argument);
}

TEST_CASE("elementary symmetric polynomials") {
    std::vector<Rational> v{Rational(3), Rational(2), Rational(1)};
    CHECK(elementary_symmetric(v, 0) == 1);
    CHECK(elementary_symmetric(v, 1) == 6);
    CHECK(elementary_symmetric(v, 2) == 11);
    CHECK(elementary_symmetric(v, 3) == 6);
    CHECK(elementary_symmetric(v, 4) == 0);
}

TEST_CASE("exact real roots with multiplicity") {
    // x (x-7)^2
    RPoly p = RPoly::from_roots({Rational(0), Rational(7), Rational(7)});
    auto roots = real_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].first == 0);
    CHECK(roots[0].second == 1);
    CHECK(roots[1].first == 7);
    CHECK(roots[1].second == 2);
}

TEST_CASE("irrational roots are isolated tightly") {
    RPoly p({rational_from(-2), Rational(0), Rational(1)});  // x^2 - 2
    auto roots = real_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(to_double(roots[0].first) + std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(to_double(roots[1].first) - std::sqrt(2.0)) < 1e-15);
    CHECK(sturm_count(p, Rational(0), Rational(2)) == 1);
    CHECK(sturm_count(p, Rational(-2), Rational(2)) == 2);
}

TEST_CASE("interval-restricted root search") {
    RPoly p = RPoly::from_roots({Rational(1), Rational(5), Rational(9)});
    RationalInterval iv;
    iv.lo = Rational(2);
    iv.hi = Rational(6);
    auto roots = real_roots(p, iv);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].first == 5);
}

TEST_CASE("square-free part strips multiplicities") {
    RPoly d = RPoly::from_roots({Rational(1), Rational(1), Rational(-2)});
    RPoly sf = square_free_part(d);
    CHECK(sf == RPoly::from_roots({Rational(1), Rational(-2)}).monic());
}

TEST_CASE("float roots cluster multiplicities") {
    DPoly p = DPoly::from_roots({1.0, 1.0, 3.0});
    auto roots = real_roots(p, 1e-7);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].first == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(roots[0].second == 2);
    CHECK(roots[1].first == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(roots[1].second == 1);
}

}  // TEST_SUITE
