#pragma once

// Closed-form constructions: the m = n, m = n+1 and m = 2n-1 families, the
// planar m in {2,3} table, the spatial m = 3 table, the quartic-period
// construction in space, the m = 5 residual system, and the planar
// rotation number.

#include <ebil/confocal.hpp>
#include <ebil/polyform.hpp>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ebil {

enum class Verdict { Exists, NotExists, Indeterminate };

// sign(u + v*sqrt(r)) computed exactly; r must be nonnegative.
int sign_of_surd(const Rational& u, const Rational& v, const Rational& r);

struct PlanarRow {
    int m = 0, m0 = 0, m1 = 0;
    Rational rho;  // m1 / (2 m0)
    std::array<int, 2> tau{0, 0};
    char type = 'E';
    std::function<double(double, double)> lambda;            // (a, b) -> caustic parameter
    std::function<Verdict(double, double)> exists;           // float, indeterminate near thresholds
    std::function<bool(const Rational&, const Rational&)> exists_exact;
};

// The six planar rows, in table order. Immutable after first use.
const std::vector<PlanarRow>& planar_rows();

struct PlanarResult {
    int m = 0, m0 = 0, m1 = 0;
    double rho = 0;
    std::array<int, 2> tau{0, 0};
    char type = 'E';
    double lambda = 0;
    Verdict verdict = Verdict::NotExists;
};

// Row lookup: m selects the period, type E/H the caustic branch, tau the
// signature for m = 3 (ignored for m = 2). Requires a > b > 0.
PlanarResult planar_table(double a, double b, int m, char type, std::array<int, 2> tau = {0, 0});

enum class SpatialType { EH1, H1H1, EH2, H1H2 };

struct SpatialResult {
    SpatialType type = SpatialType::EH1;
    Verdict verdict = Verdict::NotExists;
    std::string violated;          // inequality text when NotExists
    std::vector<double> lambdas;   // increasing, when Exists
};

// Period-3 caustic parameters in space for axes a > b > c > 0.
SpatialResult spatial_table(double a, double b, double c, SpatialType type);
bool spatial_exists_exact(const Rational& a, const Rational& b, const Rational& c,
                          SpatialType type);

struct ConstructionResult {
    std::optional<CausticSet<double>> caustics;
    std::optional<Ellipsoid<double>> axes;
    std::optional<Certificate<double>> cert;
    std::vector<double> doubled_roots;
    std::string rejection;  // empty iff accepted
    bool ok() const { return rejection.empty(); }
};

// Minimal period m = n: caustic parameters are the roots of
// t^n - prod (t - a_j); accepted iff all real, simple and nonsingular.
// The resulting caustic type follows the fixed parity pattern.
ConstructionResult construct_m_eq_n(const Ellipsoid<double>& e);

// m = n+1: given caustics and a doubled root d, the axes are the roots of
// t^{n+1} - (t-d)^2 prod (t - lambda_k); includes the certificate with
// s(t) = 1 - t/d.
ConstructionResult construct_m_eq_n_plus_1(const std::vector<double>& lambdas, double d);

struct PerfectSquareResult {
    bool accepted = false;
    std::vector<double> d;  // doubled roots (t scale)
    std::optional<Certificate<Rational>> cert;
    std::string rejection;
};

// m = 2n-1: accepted iff t^{2n-1} - prod (t - c_i) is a constant times a
// perfect square; the certificate has q = s^2. Exact decision on rationals.
PerfectSquareResult construct_m_eq_2n_minus_1(const std::vector<Rational>& c_values);

struct C43Result {
    Verdict verdict = Verdict::NotExists;
    double d = 0, lambda1 = 0, lambda2 = 0;
};

// Period-4 H1H1 construction in space (a > b > c > 0): d is the unique
// root of t^3 - 2(a+b+c)t^2 + 3(ab+ac+bc)t - 4abc beyond a; the caustics
// come from the first two mixed power sums. Exists iff c < ab/(a+b).
C43Result solve_c43(double a, double b, double c);

// Residuals of the period-5 signature (1,1,0) system: with
// s_l = 1/a^l + 1/b^l + 1/c^l + 1/lambda1^l + 1/lambda2^l, returns
// (8 s_3 + s_1^3 - 6 s_1 s_2, 16 s_4 + s_1^4 - 4 s_1^2 s_2 - 4 s_2^2).
std::array<double, 2> residual_c53(double a, double b, double c, double lambda1, double lambda2);

// rho(lambda) = int_0^{min(b,lambda)} dt/sqrt((lambda-t)(b-t)(a-t))
// divided by twice the same integral over (max(b,lambda), a). Endpoint
// singularities are removed by quadratic substitution before quadrature.
// Throws when lambda coincides with an axis within 1e-12.
double rotation_number(double a, double b, double lambda);

}  // namespace ebil
