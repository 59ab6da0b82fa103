#include <ebil/closedform.hpp>
#include <ebil/simulator.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ebil;

TEST_SUITE("simulator") {

TEST_CASE("reflection preserves the boundary and the chord caustic") {
    Ellipsoid<double> e({1.0, 3.0});
    auto start = launch_tangent(e, CausticSet<double>{{0.7}, {0}}, 3);
    auto [next, len] = reflect_step(e, start);
    double g = 0;
    for (size_t j = 0; j < 2; ++j) g += next.x[j] * next.x[j] / e.axes[j];
    CHECK(g == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(len > 0);
    double vv = next.v[0] * next.v[0] + next.v[1] * next.v[1];
    CHECK(vv == doctest::Approx(1.0).epsilon(1e-12));

    auto lam0 = line_caustics(e, start.x, start.v);
    auto lam1 = line_caustics(e, next.x, next.v);
    REQUIRE(lam0.size() == 1);
    CHECK(lam0[0] == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(lam1[0] == doctest::Approx(lam0[0]).epsilon(1e-9));
}

TEST_CASE("tangency extraction matches prescribed caustics in space") {
    Ellipsoid<double> e({0.25, 1.0, 4.0});
    CausticSet<double> cs{{0.4, 2.5}, {1, 2}};
    auto s = launch_tangent(e, cs, 1);
    auto lams = line_caustics(e, s.x, s.v);
    REQUIRE(lams.size() == 2);
    CHECK(lams[0] == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(lams[1] == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("four-bounce rhombus closes with a sign flip after two bounces") {
    Ellipsoid<double> e({1.0, 3.0});
    auto s = launch_tangent(e, CausticSet<double>{{0.75}, {0}}, 1);
    auto t = run_trajectory(e, s, 50);
    REQUIRE(t.closure.has_value());
    CHECK(t.closure->m0 == 4);
    CHECK(t.closure->m == 2);
    CHECK(t.closure->d == 2);
    CHECK(t.closure->winding == std::vector<int>{4, 2});
    CHECK(t.closure->elliptic_winding == std::vector<int>{2, 1});
    // rhombus through the axis endpoints: perimeter 4 sqrt(a_1 + a_2)
    CHECK(t.closure->length == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(t.caustic_drift < 1e-10);
}

TEST_CASE("triangle orbits wind differently than diameters") {
    double a = 9, b = 1;
    auto row = planar_table(a, b, 3, 'E', {0, 1});
    REQUIRE(row.verdict == Verdict::Exists);
    Ellipsoid<double> e({b, a});
    auto s = launch_tangent(e, CausticSet<double>{{row.lambda}, {0}}, 1);
    auto t = run_trajectory(e, s, 50);
    REQUIRE(t.closure.has_value());
    CHECK(t.closure->m0 == 3);
    CHECK(t.closure->m == 3);
    CHECK(t.closure->winding == std::vector<int>{3, 2});
}

TEST_CASE("spatial three-bounce orbit on two hyperboloids") {
    Ellipsoid<double> e({0.25, 1.0, 4.0});
    auto cons = construct_m_eq_n(e);
    REQUIRE(cons.ok());
    auto s = launch_tangent(e, *cons.caustics, 1);
    auto t = run_trajectory(e, s, 80);
    REQUIRE(t.closure.has_value());
    CHECK(t.closure->m == 3);
    CHECK(t.closure->m0 == 6);
    CHECK(t.closure->winding == std::vector<int>{6, 4, 2});
    CHECK(t.caustic_drift < 1e-9);
}

TEST_CASE("generic caustics do not close") {
    Ellipsoid<double> e({1.0, 3.0});
    auto s = launch_tangent(e, CausticSet<double>{{0.657}, {0}}, 1);
    auto t = run_trajectory(e, s, 60);
    CHECK(!t.closure.has_value());
    CHECK(t.caustic_drift < 1e-9);
    CHECK(t.states.size() == 61);
}

TEST_CASE("launch rejects near-singular caustics") {
    Ellipsoid<double> e({1.0, 3.0});
    CHECK_THROWS_AS(launch_tangent(e, CausticSet<double>{{1.0 + 1e-12}, {1}}, 1),
                    std::exception);
}

TEST_CASE("csv export is one row per bounce with CRLF endings") {
    Ellipsoid<double> e({1.0, 3.0});
    auto s = launch_tangent(e, CausticSet<double>{{0.75}, {0}}, 1);
    auto t = run_trajectory(e, s, 10);
    std::ostringstream os;
    trajectory_csv(e, t, os);
    std::string text = os.str();
    CHECK(text.rfind("index,", 0) == 0);
    size_t lines = 0, pos = 0;
    while ((pos = text.find("\r\n", pos)) != std::string::npos) {
        ++lines;
        pos += 2;
    }
    CHECK(lines == t.states.size() + 1);  // header + rows
}

TEST_CASE("svg export draws the ellipse and the orbit") {
    Ellipsoid<double> e({1.0, 3.0});
    auto s = launch_tangent(e, CausticSet<double>{{0.75}, {0}}, 1);
    auto t = run_trajectory(e, s, 10);
    std::ostringstream os;
    trajectory_svg(e, t, os);
    std::string text = os.str();
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("polyline") != std::string::npos);
}

}  // TEST_SUITE
