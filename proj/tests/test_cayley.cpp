#include <ebil/cayley.hpp>

#include <doctest.h>

using namespace ebil;

namespace {
MergedSpectrum<Rational> gammas(std::vector<long> gs) {
    std::vector<Rational> v;
    for (long g : gs) v.emplace_back(g);
    return MergedSpectrum<Rational>::from_gammas(v);
}
}  // namespace

TEST_SUITE("cayley") {

TEST_CASE("series coefficients of the square root of the spectrum polynomial") {
    auto f = taylor_coeffs({Rational(3), Rational(2), Rational(1)}, 3);
    CHECK(f.coeffs == std::vector<Rational>{Rational(1), Rational(-3), Rational(1), Rational(0)});

    auto g = taylor_coeffs({Rational(9), Rational(4), Rational(1)}, 5);
    CHECK(g.coeffs[0] == 1);
    CHECK(g.coeffs[1] == -7);  // -e_1 / 2
    CHECK(g.coeffs[3] == -18);
    CHECK(g.coeffs[4] == -126);
    CHECK(g.coeffs[5] == -882);
}

TEST_CASE("coefficient matrix layout pins the four corners") {
    auto spec = gammas({9, 4, 1});
    int m = 4, n = 2;
    auto M = cayley_matrix(spec, m);
    REQUIRE(M.entries.size() == static_cast<size_t>(m - 1));
    REQUIRE(M.entries[0].size() == static_cast<size_t>(m - n + 1));
    auto f = taylor_coeffs({Rational(9), Rational(4), Rational(1)}, 2 * m - 1);
    CHECK(M.entries.front().front() == f.coeffs[m + 1]);      // top-left
    CHECK(M.entries.front().back() == f.coeffs[n + 1]);       // top-right
    CHECK(M.entries.back().front() == f.coeffs[2 * m - 1]);   // bottom-left
    CHECK(M.entries.back().back() == f.coeffs[m + n - 1]);    // bottom-right
}

TEST_CASE("rank test decides periodicity exactly") {
    auto v22 = cayley_condition(gammas({3, 2, 1}), 2);
    CHECK(v22.periodic);
    CHECK(v22.rank == 0);
    CHECK(v22.threshold == 1);

    CHECK(cayley_condition(gammas({6, 5, 4, 2, 1}), 3).periodic);

    auto spec941 = gammas({9, 4, 1});
    CHECK(cayley_condition(spec941, 3).periodic);
    CHECK(!cayley_condition(spec941, 2).periodic);

    CHECK_THROWS_WITH_AS(cayley_condition(gammas({6, 5, 4, 2, 1}), 2),
                         "elliptic period below dimension", std::domain_error);
}

TEST_CASE("lowest minor factors through the gap relation") {
    CHECK(minor_system(gammas({3, 2, 1}), 2, 1) == 0);

    // -16 M_2 = (g1-g2-g3)(g3-g1-g2)(g2-g3-g1) on a generic triple
    Rational g1(7), g2(3), g3(2);
    Rational lhs = Rational(-16) * minor_system(gammas({7, 3, 2}), 2, 1);
    Rational rhs = (g1 - g2 - g3) * (g3 - g1 - g2) * (g2 - g3 - g1);
    CHECK(lhs == rhs);
}

TEST_CASE("minors are homogeneous under spectrum scaling") {
    // M_{3,2,1} has homogeneous degree (m-n+2)m - n + l = 8
    auto base = minor_system(gammas({7, 3, 2}), 3, 1);
    Rational sigma = rational_from(3, 5);
    std::vector<Rational> scaled{Rational(7) * sigma, Rational(3) * sigma, Rational(2) * sigma};
    auto spec = MergedSpectrum<Rational>::from_gammas(scaled);
    CHECK(minor_system(spec, 3, 1) == pow_int(sigma, 8) * base);
}

TEST_CASE("minor index bounds") {
    CHECK_THROWS_AS(minor_system(gammas({7, 3, 2}), 3, 0), std::out_of_range);
    CHECK_THROWS_AS(minor_system(gammas({7, 3, 2}), 3, 2), std::out_of_range);
}

TEST_CASE("float diagnostics mirror the exact rank away from thresholds") {
    auto d = cayley_diagnostics({9.0, 4.0, 1.0}, 3);
    CHECK(d.numerical_rank == 1);
    REQUIRE(d.singular_values.size() == 2);
    CHECK(d.singular_values[1] < 1e-9 * d.singular_values[0]);

    auto d2 = cayley_diagnostics({8.0, 4.0, 1.0}, 3);
    CHECK(d2.numerical_rank == 2);
}

}  // TEST_SUITE
