#include <ebil/closedform.hpp>

#include <ebil/roots.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ebil {

namespace {

constexpr double kThresholdMargin = 1e-12;

Verdict verdict_from_gap(double gap, double scale) {
    if (std::fabs(gap) < kThresholdMargin * std::max(1.0, scale)) return Verdict::Indeterminate;
    return gap > 0 ? Verdict::Exists : Verdict::NotExists;
}

std::vector<double> double_taylor(const std::vector<double>& gammas, int L) {
    std::vector<double> e(static_cast<size_t>(L) + 1, 0.0);
    e[0] = 1.0;
    for (double g : gammas)
        for (int k = std::min<int>(L, static_cast<int>(gammas.size())); k >= 1; --k)
            e[static_cast<size_t>(k)] += g * e[static_cast<size_t>(k - 1)];
    std::vector<double> f(static_cast<size_t>(L) + 1, 0.0);
    f[0] = 1.0;
    for (int l = 1; l <= L; ++l) {
        double acc = (l <= static_cast<int>(gammas.size())) ? e[static_cast<size_t>(l)] : 0.0;
        if (l % 2 == 1) acc = -acc;
        for (int k = 1; k <= l - 1; ++k)
            acc -= f[static_cast<size_t>(k)] * f[static_cast<size_t>(l - k)];
        f[static_cast<size_t>(l)] = acc / 2;
    }
    return f;
}

// Float certificate from the series product s*f (t form).
Certificate<double> certificate_from_series(const std::vector<double>& gammas_desc, int m, int n,
                                            const DPoly& s) {
    std::vector<double> f = double_taylor(gammas_desc, m);
    std::vector<double> q(static_cast<size_t>(m), 0.0);
    double gm = 0;
    for (int l = 0; l <= m; ++l) {
        double acc = 0;
        for (int j = 0; j <= std::min(l, s.degree()); ++j)
            acc += s.coeff(j) * f[static_cast<size_t>(l - j)];
        if (l < m)
            q[static_cast<size_t>(l)] = acc;
        else
            gm = acc;
    }
    return Certificate<double>::from_tform(m, n, s, DPoly(std::move(q)), 2 * gm);
}

// Caustic type pattern of the minimal construction: (1,1,3,3,...) for odd
// dimension, (0,2,2,4,4,...) for even.
std::vector<int> minimal_type_pattern(int n) {
    std::vector<int> out;
    for (int k = 1; k <= n - 1; ++k) {
        if (n % 2 == 1)
            out.push_back(k % 2 == 1 ? k : k - 1);
        else
            out.push_back(k == 1 ? 0 : (k % 2 == 0 ? k : k - 1));
    }
    return out;
}

}  // namespace

int sign_of_surd(const Rational& u, const Rational& v, const Rational& r) {
    if (r < 0) throw std::invalid_argument("negative radicand");
    if (v == 0 || r == 0) return sign(u);
    if (u == 0) return sign(v);
    if (u > 0 && v > 0) return 1;
    if (u < 0 && v < 0) return -1;
    Rational s = u * u - v * v * r;
    return u > 0 ? sign(s) : -sign(s);
}

const std::vector<PlanarRow>& planar_rows() {
    static const std::vector<PlanarRow> rows = [] {
        std::vector<PlanarRow> r;
        auto always = [](double, double) { return Verdict::Exists; };
        auto always_exact = [](const Rational&, const Rational&) { return true; };
        r.push_back({2, 4, 2, Rational(1, 4), {0, 0}, 'E',
                     [](double a, double b) { return a * b / (a + b); }, always, always_exact});
        r.push_back({2, 4, 2, Rational(1, 4), {0, 0}, 'H',
                     [](double a, double b) { return a * b / (a - b); },
                     [](double a, double b) { return verdict_from_gap(a - 2 * b, a); },
                     [](const Rational& a, const Rational& b) { return 2 * b < a; }});
        r.push_back({3, 6, 2, Rational(1, 6), {1, 0}, 'E',
                     [](double a, double b) { return a * b / (a + b + 2 * std::sqrt(a * b)); },
                     always, always_exact});
        r.push_back({3, 6, 2, Rational(1, 6), {1, 0}, 'H',
                     [](double a, double b) { return a * b / (a + b - 2 * std::sqrt(a * b)); },
                     [](double a, double b) { return verdict_from_gap(a - 4 * b, a); },
                     [](const Rational& a, const Rational& b) { return 4 * b < a; }});
        r.push_back({3, 3, 2, Rational(1, 3), {0, 1}, 'E',
                     [](double a, double b) {
                         return 3 * a * b / (a + b + 2 * std::sqrt(a * a - a * b + b * b));
                     },
                     always, always_exact});
        r.push_back({3, 6, 4, Rational(1, 3), {0, 1}, 'H',
                     [](double a, double b) {
                         return a * b / (2 * std::sqrt(a * a - a * b) + b - a);
                     },
                     [](double a, double b) { return verdict_from_gap(3 * a - 4 * b, a); },
                     [](const Rational& a, const Rational& b) { return 4 * b < 3 * a; }});
        return r;
    }();
    return rows;
}

PlanarResult planar_table(double a, double b, int m, char type, std::array<int, 2> tau) {
    if (!(a > b && b > 0)) throw std::invalid_argument("requires a > b > 0");
    for (const auto& row : planar_rows()) {
        if (row.m != m || row.type != type) continue;
        if (m == 3 && row.tau != tau) continue;
        PlanarResult res;
        res.m = row.m;
        res.m0 = row.m0;
        res.m1 = row.m1;
        res.rho = to_double(row.rho);
        res.tau = row.tau;
        res.type = row.type;
        res.verdict = row.exists(a, b);
        if (res.verdict == Verdict::Exists) res.lambda = row.lambda(a, b);
        return res;
    }
    throw std::invalid_argument("no such trajectory in this ellipse");
}

SpatialResult spatial_table(double a, double b, double c, SpatialType type) {
    if (!(a > b && b > c && c > 0)) throw std::invalid_argument("requires a > b > c > 0");
    SpatialResult res;
    res.type = type;
    switch (type) {
        case SpatialType::EH1: {
            double thr = a * b / (a + b + std::sqrt(a * b));
            res.verdict = verdict_from_gap(thr - c, std::max(c, thr));
            if (res.verdict == Verdict::NotExists) res.violated = "c < ab/(a+b+sqrt(ab))";
            if (res.verdict != Verdict::Exists) return res;
            double l1 = c - c * c * c / ((b - c) * (a - c));
            double l2 = 1.0 / (1.0 / a + 1.0 / b + 1.0 / l1 - 1.0 / c);
            res.lambdas = {l1, l2};
            break;
        }
        case SpatialType::H1H1: {
            double thr = a * b / (a + b + 2 * std::sqrt(a * b));
            res.verdict = verdict_from_gap(thr - c, std::max(c, thr));
            if (res.verdict == Verdict::NotExists) res.violated = "c < ab/(a+b+2sqrt(ab))";
            if (res.verdict != Verdict::Exists) return res;
            // roots of t^3 - (t-a)(t-b)(t-c), a quadratic
            double e1 = a + b + c, e2 = a * b + a * c + b * c, e3 = a * b * c;
            double disc = e2 * e2 - 4 * e1 * e3;
            double sq = std::sqrt(std::max(disc, 0.0));
            res.lambdas = {(e2 - sq) / (2 * e1), (e2 + sq) / (2 * e1)};
            break;
        }
        case SpatialType::EH2: {
            Verdict v1 = verdict_from_gap(a - 2 * b, a);
            double thr = (a - 2 * b) * a / (2 * a - 3 * b);
            Verdict v2 = v1 == Verdict::NotExists
                             ? Verdict::NotExists
                             : verdict_from_gap(thr - c, std::max(c, std::fabs(thr)));
            if (v1 == Verdict::NotExists || v2 == Verdict::NotExists) {
                res.verdict = Verdict::NotExists;
                res.violated = v1 == Verdict::NotExists ? "2b < a" : "c < (a-2b)a/(2a-3b)";
            } else if (v1 == Verdict::Indeterminate || v2 == Verdict::Indeterminate) {
                res.verdict = Verdict::Indeterminate;
            } else {
                res.verdict = Verdict::Exists;
            }
            if (res.verdict != Verdict::Exists) return res;
            double A = (a - b) * (a - c);
            double B = (b * c - a * (b + c)) * a;
            double C = a * a * b * c;
            double disc = B * B - 4 * A * C;
            double sq = std::sqrt(std::max(disc, 0.0));
            res.lambdas = {(-B - sq) / (2 * A), (-B + sq) / (2 * A)};
            break;
        }
        case SpatialType::H1H2: {
            double thr1 = (a - 2 * b) * a * b / ((a - b) * (a - b));
            Verdict v1 = verdict_from_gap(thr1 - c, std::max(c, std::fabs(thr1)));
            double thr2 = a * c / (a + c - std::sqrt(a * c));
            Verdict v2 = verdict_from_gap(b - thr2, std::max(b, thr2));
            if (v1 == Verdict::Indeterminate || v2 == Verdict::Indeterminate)
                res.verdict = Verdict::Indeterminate;
            else if (v1 == Verdict::Exists && v2 == Verdict::Exists)
                res.verdict = Verdict::Exists;
            else {
                res.verdict = Verdict::NotExists;
                res.violated = v1 == Verdict::NotExists ? "c < (a-2b)ab/(a-b)^2"
                                                        : "b > ac/(a+c-sqrt(ac))";
            }
            if (res.verdict != Verdict::Exists) return res;
            double l2 = b + b * b * b / ((b - c) * (a - b));
            double l1 = 1.0 / (1.0 / a + 1.0 / c + 1.0 / l2 - 1.0 / b);
            res.lambdas = {l1, l2};
            break;
        }
    }
    std::sort(res.lambdas.begin(), res.lambdas.end());
    return res;
}

bool spatial_exists_exact(const Rational& a, const Rational& b, const Rational& c,
                          SpatialType type) {
    switch (type) {
        case SpatialType::EH1:
            return sign_of_surd(a * b - c * (a + b), -c, a * b) > 0;
        case SpatialType::H1H1:
            return sign_of_surd(a * b - c * (a + b), -2 * c, a * b) > 0;
        case SpatialType::EH2:
            return 2 * b < a && c * (2 * a - 3 * b) < (a - 2 * b) * a;
        case SpatialType::H1H2:
            return c * (a - b) * (a - b) < (a - 2 * b) * a * b &&
                   sign_of_surd(b * (a + c) - a * c, -b, a * c) > 0;
    }
    throw std::invalid_argument("unknown caustic type");
}

ConstructionResult construct_m_eq_n(const Ellipsoid<double>& e) {
    int n = e.dim();
    DPoly p = -DPoly::from_roots(e.axes);
    {
        // add t^n
        std::vector<double> mono(static_cast<size_t>(n) + 1, 0.0);
        mono.back() = 1.0;
        p += DPoly(std::move(mono));
    }
    ConstructionResult res;
    auto roots = real_roots(p, 1e-9);
    int with_mult = 0;
    bool doubled = false;
    for (auto& [r, mult] : roots) {
        with_mult += mult;
        if (mult > 1) doubled = true;
    }
    if (doubled) {
        res.rejection = "singular trajectory (ruled-quadric)";
        return res;
    }
    if (with_mult < n - 1) {
        res.rejection = "no trajectory of this family";
        return res;
    }
    std::vector<double> lambdas;
    for (auto& [r, mult] : roots) lambdas.push_back(r);
    try {
        auto cs = existence_check(e, lambdas);
        if (cs.type_vector != minimal_type_pattern(n))
            throw std::logic_error("minimal construction produced an unexpected caustic type");
        res.caustics = cs;
    } catch (const std::domain_error& ex) {
        res.rejection = ex.what();
    }
    return res;
}

ConstructionResult construct_m_eq_n_plus_1(const std::vector<double>& lambdas, double d) {
    int n = static_cast<int>(lambdas.size()) + 1;
    ConstructionResult res;
    if (d <= 0) {
        res.rejection = "doubled root must be positive";
        return res;
    }
    DPoly shape = DPoly::from_roots({d, d});
    for (double l : lambdas) {
        if (l <= 0) {
            res.rejection = "caustic parameters must be positive";
            return res;
        }
        shape *= DPoly::from_roots({l});
    }
    DPoly p = -shape;
    {
        std::vector<double> mono(static_cast<size_t>(n) + 2, 0.0);
        mono.back() = 1.0;
        p += DPoly(std::move(mono));
    }
    auto roots = real_roots(p, 1e-9);
    int with_mult = 0;
    for (auto& [r, mult] : roots) with_mult += mult;
    if (with_mult < n || static_cast<int>(roots.size()) < n) {
        res.rejection = "axis polynomial has nonreal or repeated roots";
        return res;
    }
    std::vector<double> axes;
    for (auto& [r, mult] : roots) axes.push_back(r);
    if (axes.front() <= 0) {
        res.rejection = "axis polynomial has nonpositive roots";
        return res;
    }
    try {
        Ellipsoid<double> e(axes);
        auto cs = existence_check(e, lambdas);
        res.axes = e;
        res.caustics = cs;
        res.doubled_roots = {d};
        MergedSpectrum<double> spec(e, cs);
        std::vector<double> gs(spec.gamma.begin(), spec.gamma.end() - 1);
        DPoly s(std::vector<double>{1.0, -1.0 / d});
        res.cert = certificate_from_series(gs, n + 1, n, s);
    } catch (const std::exception& ex) {
        res.rejection = ex.what();
    }
    return res;
}

PerfectSquareResult construct_m_eq_2n_minus_1(const std::vector<Rational>& c_values) {
    PerfectSquareResult res;
    if (c_values.size() % 2 == 0)
        throw std::invalid_argument("need an odd number of parameters");
    int n = static_cast<int>(c_values.size() + 1) / 2;
    int m = 2 * n - 1;
    RPoly g = -RPoly::from_roots(c_values);
    {
        std::vector<Rational> mono(static_cast<size_t>(m) + 1, Rational(0));
        mono.back() = Rational(1);
        g += RPoly(std::move(mono));
    }
    if (g.degree() != 2 * n - 2) {
        res.rejection = "difference polynomial degenerates";
        return res;
    }
    Rational kappa = g.leading();
    RPoly w = g.monic();
    // Monic square root candidate, coefficients peeled from the top.
    int e = n - 1;
    std::vector<Rational> h(static_cast<size_t>(e) + 1, Rational(0));
    h[static_cast<size_t>(e)] = Rational(1);
    for (int j = 1; j <= e; ++j) {
        Rational acc = w.coeff(2 * e - j);
        for (int i = e - j + 1; i <= e - 1; ++i) {
            int k = 2 * e - j - i;
            if (k >= 0 && k <= e) acc -= h[static_cast<size_t>(i)] * h[static_cast<size_t>(k)];
        }
        h[static_cast<size_t>(e - j)] = acc / 2;
    }
    RPoly hp(h);
    if (!(hp * hp == w)) {
        res.rejection = "difference polynomial is not a perfect square";
        return res;
    }
    res.accepted = true;
    DPoly hd(std::vector<double>{});
    {
        std::vector<double> hc;
        for (const auto& x : h) hc.push_back(to_double(x));
        hd = DPoly(std::move(hc));
    }
    for (auto& [r, mult] : real_roots(hd, 1e-9))
        for (int i = 0; i < mult; ++i) res.d.push_back(r);

    // Certificate: s = h/h(0) in the t scale, q = s^2, alpha = -1/prod(c).
    if (hp.coeff(0) != 0) {
        RPoly s = hp * (Rational(1) / hp.coeff(0));
        Rational prod(1);
        std::vector<Rational> gammas;
        for (const auto& cv : c_values) {
            prod *= cv;
            gammas.push_back(Rational(1) / cv);
        }
        auto spec = MergedSpectrum<Rational>::from_gammas(gammas);
        Certificate<Rational> cert =
            Certificate<Rational>::from_tform(m, n, s, s * s, -Rational(1) / prod);
        if (verify_certificate(spec, cert).ok) res.cert = cert;
    }
    return res;
}

C43Result solve_c43(double a, double b, double c) {
    if (!(a > b && b > c && c > 0)) throw std::invalid_argument("requires a > b > c > 0");
    C43Result res;
    double thr = a * b / (a + b);
    res.verdict = verdict_from_gap(thr - c, std::max(c, thr));
    if (res.verdict != Verdict::Exists) return res;
    auto cubic = [&](double t) {
        return ((t - 2 * (a + b + c)) * t + 3 * (a * b + a * c + b * c)) * t - 4 * a * b * c;
    };
    double lo = a, hi = 2 * a;
    while (cubic(hi) <= 0) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (cubic(mid) < 0 ? lo : hi) = mid;
    }
    res.d = 0.5 * (lo + hi);
    double s1 = 1 / a + 1 / b + 1 / c - 2 / res.d;
    double s2 = 1 / (a * a) + 1 / (b * b) + 1 / (c * c) - 2 / (res.d * res.d);
    double A = (s1 * s1 - s2) / 2, B = -s1, C = 1;
    double disc = B * B - 4 * A * C;
    double sq = std::sqrt(std::max(disc, 0.0));
    res.lambda1 = (-B - sq) / (2 * A);
    res.lambda2 = (-B + sq) / (2 * A);
    if (!(c < res.lambda1 && res.lambda1 < res.lambda2 && res.lambda2 < b))
        throw std::logic_error("quartic-period caustics left their bracket");
    return res;
}

std::array<double, 2> residual_c53(double a, double b, double c, double lambda1, double lambda2) {
    auto s = [&](int l) {
        return std::pow(a, -l) + std::pow(b, -l) + std::pow(c, -l) + std::pow(lambda1, -l) +
               std::pow(lambda2, -l);
    };
    double s1 = s(1), s2 = s(2), s3 = s(3), s4 = s(4);
    return {8 * s3 + s1 * s1 * s1 - 6 * s1 * s2,
            16 * s4 + s1 * s1 * s1 * s1 - 4 * s1 * s1 * s2 - 4 * s2 * s2};
}

double rotation_number(double a, double b, double lambda) {
    if (!(a > b && b > 0)) throw std::invalid_argument("requires a > b > 0");
    if (!(lambda > 0 && lambda < a)) throw std::invalid_argument("caustic parameter out of range");
    double scale = std::max(1.0, a);
    if (std::fabs(lambda - b) < 1e-12 * scale || std::fabs(lambda - a) < 1e-12 * scale)
        throw std::domain_error("singular caustic");

    // Integral of dt/sqrt(|(lambda-t)(b-t)(a-t)|) over (lo, hi) with an
    // inverse-square-root singularity at x_s (one of the three roots,
    // coinciding with lo or hi); t = x_s -/+ u^2 removes it.
    auto half = [&](double x_s, double lo, double hi, bool singular_at_hi) {
        auto f = [&](double u) {
            double t = singular_at_hi ? hi - u * u : lo + u * u;
            double rem = 1.0;
            for (double x : {lambda, b, a})
                if (x != x_s) rem *= x - t;
            return 2.0 / std::sqrt(std::fabs(rem));
        };
        double umax = std::sqrt(hi - lo);
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, umax, 12,
                                                                             1e-12);
    };

    double num_hi = std::min(b, lambda);
    double num = half(num_hi, 0.0, num_hi, true);
    double den_lo = std::max(b, lambda);
    double mid = 0.5 * (den_lo + a);
    double den = half(den_lo, den_lo, mid, false) + half(a, mid, a, true);
    return num / (2 * den);
}

}  // namespace ebil
