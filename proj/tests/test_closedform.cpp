#include <ebil/closedform.hpp>

#include <doctest.h>

#include <cmath>

using namespace ebil;

TEST_SUITE("closedform") {

TEST_CASE("exact sign of u + v sqrt(r)") {
    CHECK(sign_of_surd(Rational(-3), Rational(1), Rational(2)) == -1);
    CHECK(sign_of_surd(Rational(-1), Rational(1), Rational(2)) == 1);
    CHECK(sign_of_surd(Rational(2), Rational(-1), Rational(4)) == 0);
    CHECK(sign_of_surd(Rational(0), Rational(-3), Rational(5)) == -1);
    CHECK(sign_of_surd(Rational(5), Rational(0), Rational(7)) == 1);
    CHECK_THROWS_AS(sign_of_surd(Rational(1), Rational(1), Rational(-1)),
                    std::invalid_argument);
}

TEST_CASE("two-bounce diameter family") {
    auto rE = planar_table(2.0, 1.0, 2, 'E');
    CHECK(rE.verdict == Verdict::Exists);
    CHECK(rE.lambda == doctest::Approx(2.0 / 3.0).epsilon(1e-14));  // ab/(a+b)
    CHECK(rE.m0 == 4);
    CHECK(rE.m1 == 2);
    CHECK(rE.rho == doctest::Approx(0.25));

    auto rH = planar_table(3.0, 1.0, 2, 'H');
    CHECK(rH.verdict == Verdict::Exists);
    CHECK(rH.lambda == doctest::Approx(1.5).epsilon(1e-14));  // ab/(a-b), needs 2b < a
}

TEST_CASE("two-bounce hyperbolic threshold: float hedges, exact decides") {
    // 2b = a sits exactly on the threshold
    CHECK(planar_table(2.0, 1.0, 2, 'H').verdict == Verdict::Indeterminate);
    const PlanarRow* row = nullptr;
    for (const auto& r : planar_rows())
        if (r.m == 2 && r.type == 'H') row = &r;
    REQUIRE(row != nullptr);
    CHECK(!row->exists_exact(Rational(2), Rational(1)));
    CHECK(row->exists_exact(Rational(3), Rational(1)));
}

TEST_CASE("three-bounce planar caustic parameters") {
    double a = 4, b = 1;
    auto e10 = planar_table(a, b, 3, 'E', {1, 0});
    CHECK(e10.verdict == Verdict::Exists);
    CHECK(e10.lambda == doctest::Approx(a * b / (a + b + 2 * std::sqrt(a * b))).epsilon(1e-14));
    CHECK(e10.m0 == 6);
    CHECK(e10.m1 == 2);

    auto h10 = planar_table(5, 1, 3, 'H', {1, 0});  // needs 4b < a
    CHECK(h10.verdict == Verdict::Exists);
    CHECK(h10.lambda == doctest::Approx(5.0 / (6 - 2 * std::sqrt(5.0))).epsilon(1e-14));

    auto e01 = planar_table(9, 1, 3, 'E', {0, 1});
    CHECK(e01.verdict == Verdict::Exists);
    CHECK(e01.lambda ==
          doctest::Approx(27.0 / (10 + 2 * std::sqrt(81.0 - 9 + 1))).epsilon(1e-14));
    CHECK(e01.m0 == 3);
    CHECK(e01.m1 == 2);

    auto h01 = planar_table(4, 1, 3, 'H', {0, 1});  // needs 4b < 3a
    CHECK(h01.verdict == Verdict::Exists);
    CHECK(h01.lambda ==
          doctest::Approx(4.0 / (2 * std::sqrt(16.0 - 4) + 1 - 4)).epsilon(1e-14));
    CHECK(h01.m0 == 6);
    CHECK(h01.m1 == 4);
}

TEST_CASE("three-bounce spatial caustic parameters satisfy their defining equations") {
    double a = 4, b = 1, c = 0.25;

    auto h1h1 = spatial_table(a, b, c, SpatialType::H1H1);
    REQUIRE(h1h1.verdict == Verdict::Exists);
    REQUIRE(h1h1.lambdas.size() == 2);
    CHECK(h1h1.lambdas[0] == doctest::Approx(0.256024981763).epsilon(1e-10));
    CHECK(h1h1.lambdas[1] == doctest::Approx(0.743975018237).epsilon(1e-10));
    // both lie strictly between c and b: the caustics are hyperboloids
    for (double l : h1h1.lambdas) {
        CHECK(l > c);
        CHECK(l < b);
    }

    auto eh1 = spatial_table(a, b, c, SpatialType::EH1);
    REQUIRE(eh1.verdict == Verdict::Exists);
    double l1 = c - c * c * c / ((b - c) * (a - c));
    CHECK(eh1.lambdas[0] == doctest::Approx(l1).epsilon(1e-12));
    double l2 = 1.0 / (1 / a + 1 / b + 1 / l1 - 1 / c);
    CHECK(eh1.lambdas[1] == doctest::Approx(l2).epsilon(1e-12));

    double c2 = 0.15;  // EH2 needs 2b < a and small c
    auto eh2 = spatial_table(a, b, c2, SpatialType::EH2);
    REQUIRE(eh2.verdict == Verdict::Exists);
    for (double l : eh2.lambdas) {
        double val = (a - b) * (a - c2) * l * l + (b * c2 - a * (b + c2)) * a * l +
                     a * a * b * c2;
        CHECK(std::abs(val) < 1e-9);
    }

    auto h1h2 = spatial_table(a, b, c2, SpatialType::H1H2);
    REQUIRE(h1h2.verdict == Verdict::Exists);
    double m2 = b + b * b * b / ((b - c2) * (a - b));
    CHECK(h1h2.lambdas[1] == doctest::Approx(m2).epsilon(1e-12));
}

TEST_CASE("spatial existence thresholds decided exactly") {
    // H1H1 with a=4, b=1: threshold c = ab/(a+b+2 sqrt(ab)) = 4/9
    Rational a(4), b(1);
    CHECK(spatial_exists_exact(a, b, rational_from(44, 100), SpatialType::H1H1));
    CHECK(!spatial_exists_exact(a, b, rational_from(45, 100), SpatialType::H1H1));
    // irrational threshold, a=2: c* = 2/(3+2 sqrt 2) ~ 0.34315
    CHECK(spatial_exists_exact(Rational(2), b, rational_from(34, 100), SpatialType::H1H1));
    CHECK(!spatial_exists_exact(Rational(2), b, rational_from(35, 100), SpatialType::H1H1));
}

TEST_CASE("minimal-period construction") {
    auto planar = construct_m_eq_n(Ellipsoid<double>({1.0, 3.0}));
    REQUIRE(planar.ok());
    REQUIRE(planar.caustics->params.size() == 1);
    CHECK(planar.caustics->params[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(planar.caustics->type_vector == std::vector<int>{0});

    auto spatial = construct_m_eq_n(Ellipsoid<double>({0.25, 1.0, 4.0}));
    REQUIRE(spatial.ok());
    CHECK(spatial.caustics->params[0] == doctest::Approx(0.256024981763).epsilon(1e-10));
    CHECK(spatial.caustics->params[1] == doctest::Approx(0.743975018237).epsilon(1e-10));
    CHECK(spatial.caustics->type_vector == std::vector<int>{1, 1});

    auto fat = construct_m_eq_n(Ellipsoid<double>({1.0, 2.0, 4.0}));
    CHECK(!fat.ok());  // caustic quadratic has no real roots
}

TEST_CASE("period n+1 construction round-trips the quartic solver") {
    auto c43 = solve_c43(4.0, 1.0, 0.2);
    REQUIRE(c43.verdict == Verdict::Exists);
    auto res = construct_m_eq_n_plus_1({c43.lambda1, c43.lambda2}, c43.d);
    REQUIRE(res.ok());
    REQUIRE(res.axes.has_value());
    CHECK(res.axes->axes[0] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(res.axes->axes[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.axes->axes[2] == doctest::Approx(4.0).epsilon(1e-9));
    REQUIRE(res.cert.has_value());

    CHECK(!construct_m_eq_n_plus_1({0.5, 0.6}, -1.0).ok());
}

TEST_CASE("perfect-square construction for the longest closed-form period") {
    auto good = construct_m_eq_2n_minus_1(
        {rational_from(1, 9), rational_from(1, 4), Rational(1)});
    REQUIRE(good.accepted);
    REQUIRE(good.d.size() == 1);
    CHECK(good.d[0] == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    REQUIRE(good.cert.has_value());
    CHECK(good.cert->alpha() == -36);

    auto bad = construct_m_eq_2n_minus_1(
        {rational_from(1, 8), rational_from(1, 4), Rational(1)});
    CHECK(!bad.accepted);
    CHECK(bad.rejection == "difference polynomial is not a perfect square");
}

TEST_CASE("quartic-period spatial solver") {
    auto r = solve_c43(4.0, 1.0, 0.2);
    REQUIRE(r.verdict == Verdict::Exists);
    CHECK(r.d == doctest::Approx(8.72233928759).epsilon(1e-10));
    CHECK(r.lambda1 == doctest::Approx(0.200028277666).epsilon(1e-9));
    CHECK(r.lambda2 == doctest::Approx(0.979038246639).epsilon(1e-9));

    // threshold c = ab/(a+b) = 0.8
    CHECK(solve_c43(4.0, 1.0, 0.81).verdict != Verdict::Exists);
}

TEST_CASE("five-bounce residuals vanish at the solved caustics") {
    auto res = residual_c53(4.0, 1.0, 0.2, 0.16111273757253849, 0.32456769376624339);
    CHECK(std::abs(res[0]) < 1e-10);
    CHECK(std::abs(res[1]) < 1e-10);
    auto off = residual_c53(4.0, 1.0, 0.2, 0.17, 0.32);
    CHECK(std::abs(off[0]) + std::abs(off[1]) > 1e-4);
}

TEST_CASE("rotation number pins") {
    CHECK(rotation_number(2.0, 1.0, 2.0 / 3.0) == doctest::Approx(0.25).epsilon(1e-10));
    double a = 4, b = 1;
    double l6 = a * b / (a + b + 2 * std::sqrt(a * b));
    CHECK(rotation_number(a, b, l6) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    double l3 = 3 * a * b / (a + b + 2 * std::sqrt(a * a - a * b + b * b));
    CHECK(rotation_number(a, b, l3) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK_THROWS_WITH_AS(rotation_number(2.0, 1.0, 1.0), "singular caustic",
                         std::domain_error);
}

}  // TEST_SUITE
