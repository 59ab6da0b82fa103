// End-to-end acceptance gate. Each criterion prints exactly one pass/fail
// line; the exit code is the number of failures. Tolerances are pinned
// here, next to the checks that use them.

#include <ebil/cayley.hpp>
#include <ebil/closedform.hpp>
#include <ebil/confocal.hpp>
#include <ebil/polyform.hpp>
#include <ebil/simulator.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace ebil;

namespace {

constexpr double kClosureTol = 1e-7;
constexpr double kRotationTol = 1e-8;
constexpr double kDriftTol = 1e-8;
constexpr double kRelaunchTol = 1e-7;
constexpr double kResidualTol = 1e-10;

std::mt19937 rng(20240901);

Rational rand_rational(long max_num = 60, long max_den = 9) {
    std::uniform_int_distribution<long> num(1, max_num), den(1, max_den);
    return rational_from(num(rng), den(rng));
}

double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

MergedSpectrum<Rational> spec_from(std::vector<Rational> gs) {
    return MergedSpectrum<Rational>::from_gammas(std::move(gs));
}

// Certificates of positive instances, kept for the structural probes.
struct ExactInstance {
    MergedSpectrum<Rational> spec;
    Certificate<Rational> cert;
};
std::vector<ExactInstance> g_exact_instances;

// Closed trajectories found anywhere in the run, with their signature when
// it is known, kept for the conjecture probes.
struct ClosedOrbit {
    ClosureRecord rec;
    std::vector<int> tau;  // empty when unknown
};
std::vector<ClosedOrbit> g_orbits;

bool criterion1() {
    for (int it = 0; it < 50; ++it) {
        std::vector<Rational> g;
        while (g.size() < 3) {
            Rational v = rand_rational();
            bool dup = false;
            for (const auto& o : g) dup |= (o == v);
            if (!dup) g.push_back(v);
        }
        auto spec = spec_from(g);
        const Rational &g1 = spec.gamma[0], &g2 = spec.gamma[1], &g3 = spec.gamma[2];

        Rational m2 = minor_system(spec, 2, 1);
        if (Rational(-16) * m2 != (g1 - g2 - g3) * (g3 - g1 - g2) * (g2 - g3 - g1)) return false;

        Rational m3 = minor_system(spec, 3, 1);
        Rational q0 = g1 * g1 + g2 * g2 + g3 * g3 - 2 * g1 * g2 - 2 * g1 * g3 - 2 * g2 * g3;
        auto qk = [](const Rational& gk, const Rational& gi, const Rational& gj) -> Rational {
            return 3 * gk * gk - 2 * (gi + gj) * gk - (gi - gj) * (gi - gj);
        };
        Rational rhs = q0 * qk(g1, g2, g3) * qk(g2, g1, g3) * qk(g3, g1, g2);
        if (Rational(-16384) * m3 != rhs) return false;
    }
    return true;
}

bool criterion2() {
    bool ok = true;
    ok &= cayley_condition(spec_from({Rational(3), Rational(2), Rational(1)}), 2).periodic;
    ok &= cayley_condition(
              spec_from({Rational(6), Rational(5), Rational(4), Rational(2), Rational(1)}), 3)
              .periodic;
    auto s941 = spec_from({Rational(9), Rational(4), Rational(1)});
    ok &= cayley_condition(s941, 3).periodic;
    ok &= !cayley_condition(s941, 2).periodic;
    // the doubled root of the period-3 certificate sits at gamma = 7
    auto cert = certificate_from_nullspace(s941, 3);
    ok &= (cert.S == RPoly({Rational(-7), Rational(1)}));
    return ok;
}

// Matrix verdict and certificate verdict must agree bit-for-bit.
bool verdicts_agree(const MergedSpectrum<Rational>& spec, int m) {
    bool matrix = cayley_condition(spec, m).periodic;
    bool cert_ok = false;
    try {
        auto cert = certificate_from_nullspace(spec, m);
        cert_ok = verify_certificate(spec, cert).ok;
        if (cert_ok) g_exact_instances.push_back({spec, cert});
    } catch (const std::exception&) {
        cert_ok = false;
    }
    return matrix == cert_ok;
}

bool criterion3() {
    int count = 0;
    auto run = [&](const MergedSpectrum<Rational>& spec, int m) {
        ++count;
        return verdicts_agree(spec, m);
    };

    for (int it = 0; it < 20; ++it) {  // n=2, m=2: gamma_1 = gamma_2 + gamma_3
        Rational g3 = rand_rational(), g2 = g3 + rand_rational();
        if (!run(spec_from({g2 + g3, g2, g3}), 2)) return false;
        if (it < 5 && !run(spec_from({g2 + g3 + rational_from(1, 7), g2, g3}), 2)) return false;
    }
    for (int it = 0; it < 20; ++it) {  // n=2, m=3: sqrt(gamma_1) = sqrt(gamma_2) + sqrt(gamma_3)
        Rational v = rand_rational(12, 5), u = v + rand_rational(12, 5);
        Rational sigma = rand_rational(9, 9);
        Rational g1 = (u + v) * (u + v) * sigma, g2 = u * u * sigma, g3 = v * v * sigma;
        if (g2 == g3) continue;
        if (!run(spec_from({g1, g2, g3}), 3)) return false;
        if (it < 5 && !run(spec_from({g1 + rational_from(1, 11), g2, g3}), 3)) return false;
    }
    for (int it = 0; it < 10; ++it) {  // n=2, m=3, second branch: 3g1 = g2+g3+2 sqrt(g2^2+g3^2-g2g3)
        Rational sigma = rand_rational(20, 7);
        auto seed = (it % 2 == 0) ? std::vector<Rational>{Rational(9), Rational(8), Rational(5)}
                                  : std::vector<Rational>{rational_from(25, 3), Rational(8),
                                                          Rational(3)};
        for (auto& v : seed) v *= sigma;
        if (!run(spec_from(seed), 3)) return false;
    }
    for (int it = 0; it < 15; ++it) {  // n=3, m=3 and its perturbations
        Rational sigma = rand_rational(20, 7);
        std::vector<Rational> g{Rational(6), Rational(5), Rational(4), Rational(2), Rational(1)};
        if (it >= 10) g[4] += rational_from(1, 13);
        for (auto& v : g) v *= sigma;
        if (!run(spec_from(g), 3)) return false;
    }
    for (int it = 0; it < 15; ++it) {  // n=3, m=4 and its perturbations
        Rational sigma = rand_rational(20, 7);
        std::vector<Rational> g{Rational(33), Rational(32), Rational(25), Rational(23),
                                Rational(7)};
        if (it >= 10) g[2] += rational_from(1, 17);
        for (auto& v : g) v *= sigma;
        if (!run(spec_from(g), 4)) return false;
    }
    for (int it = 0; it < 10; ++it) {  // n=3, m=5: random spectra, construction rejects
        std::vector<Rational> c;
        while (c.size() < 5) {
            Rational v = rand_rational();
            bool dup = false;
            for (const auto& o : c) dup |= (o == v);
            if (!dup) c.push_back(v);
        }
        auto ps = construct_m_eq_2n_minus_1(c);
        std::vector<Rational> g;
        for (const auto& v : c) g.push_back(Rational(1) / v);
        auto spec = spec_from(g);
        if (ps.accepted != cayley_condition(spec, 5).periodic) return false;
        if (!run(spec, 5)) return false;
    }
    return count >= 100;
}

bool close_and_check(const Ellipsoid<double>& e, const CausticSet<double>& cs, unsigned seed,
                     int max_bounces, int want_m0, int want_m,
                     const std::vector<int>& want_winding, const std::vector<int>& tau,
                     double* length_out = nullptr) {
    BilliardState s;
    try {
        s = launch_tangent(e, cs, seed);
    } catch (const std::exception&) {
        return false;
    }
    auto t = run_trajectory(e, s, max_bounces, kClosureTol);
    if (!t.closure) return false;
    const auto& c = *t.closure;
    if (want_m0 > 0 && c.m0 != want_m0) return false;
    if (want_m > 0 && c.m != want_m) return false;
    if (!want_winding.empty() && c.winding != want_winding) return false;
    if (length_out) *length_out = c.length;
    g_orbits.push_back({c, tau});
    return true;
}

bool criterion4() {
    int idx = 0;
    for (const auto& row : planar_rows()) {
        for (int it = 0; it < 20; ++it, ++idx) {
            double a = uniform(1.5, 6.0);
            double b;
            switch (row.m * 10 + (row.type == 'H') + row.tau[1] * 100) {
                case 20: b = a * uniform(0.10, 0.90); break;       // m2 E: any b < a
                case 21: b = a * uniform(0.05, 0.45); break;       // m2 H: 2b < a
                case 30: b = a * uniform(0.10, 0.90); break;       // m3 E (1,0)
                case 31: b = a * uniform(0.03, 0.23); break;       // m3 H (1,0): 4b < a
                case 130: b = a * uniform(0.10, 0.90); break;      // m3 E (0,1)
                default: b = a * uniform(0.10, 0.70); break;       // m3 H (0,1): 4b < 3a
            }
            if (row.exists(a, b) != Verdict::Exists) return false;
            double lambda = row.lambda(a, b);

            Ellipsoid<double> e({b, a});
            CausticSet<double> cs;
            try {
                cs = existence_check(e, std::vector<double>{lambda});
            } catch (const std::exception&) {
                return false;
            }
            std::vector<int> tau{row.tau[0], row.tau[1]};
            if (!close_and_check(e, cs, 1 + static_cast<unsigned>(it), 6 * row.m0, row.m0,
                                 row.m, {row.m0, row.m1}, tau))
                return false;
            if (std::abs(rotation_number(a, b, lambda) - to_double(row.rho)) > kRotationTol)
                return false;
        }
    }
    return true;
}

// The value of c where the existence verdict flips, for fixed a, b.
double c_threshold(double a, double b, SpatialType type) {
    double lo = 1e-6 * b, hi = 0.999 * b;
    if (spatial_table(a, b, lo, type).verdict != Verdict::Exists) return -1;
    if (spatial_table(a, b, hi, type).verdict == Verdict::Exists) return -1;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (spatial_table(a, b, mid, type).verdict == Verdict::Exists)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool criterion5() {
    const SpatialType types[] = {SpatialType::EH1, SpatialType::H1H1, SpatialType::EH2,
                                 SpatialType::H1H2};
    const std::vector<std::vector<int>> taus = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    for (size_t ti = 0; ti < 4; ++ti) {
        SpatialType type = types[ti];
        int found = 0, guard = 0;
        while (found < 10) {
            if (++guard > 4000) return false;
            double a = uniform(2.0, 6.0);
            double b = a * uniform(0.08, 0.48);
            double c = b * uniform(0.02, 0.90);
            auto res = spatial_table(a, b, c, type);
            if (res.verdict != Verdict::Exists) continue;
            Ellipsoid<double> e({c, b, a});
            CausticSet<double> cs;
            try {
                cs = existence_check(e, res.lambdas);
            } catch (const std::exception&) {
                return false;
            }
            if (!close_and_check(e, cs, 1 + static_cast<unsigned>(found), 40, 6, 3, {6, 4, 2},
                                 {}))
                return false;
            ++found;
        }

        // the verdict must flip across the c-threshold, sampled at +-1%
        double a = uniform(2.5, 5.0);
        double b = (type == SpatialType::EH2) ? 0.45 * a : a * uniform(0.15, 0.45);
        double cstar = c_threshold(a, b, type);
        if (cstar <= 0) return false;
        if (spatial_table(a, b, 0.99 * cstar, type).verdict != Verdict::Exists) return false;
        if (spatial_table(a, b, 1.01 * cstar, type).verdict != Verdict::NotExists) return false;
    }

    // EH2 has the extra gate 2b < a; flip b across a/2 with c tiny
    double a = 4.0, c = 0.004 * a;
    if (spatial_table(a, 0.495 * a, c, SpatialType::EH2).verdict != Verdict::Exists) return false;
    if (spatial_table(a, 0.505 * a, c, SpatialType::EH2).verdict != Verdict::NotExists)
        return false;
    return true;
}

bool criterion6() {
    for (int it = 0; it < 10; ++it) {
        double a = uniform(2.0, 6.0);
        double b = a * uniform(0.15, 0.6);
        double thr = a * b / (a + b);
        double c = thr * uniform(0.1, 0.95);
        auto r = solve_c43(a, b, c);
        if (r.verdict != Verdict::Exists) return false;
        Ellipsoid<double> e({c, b, a});
        CausticSet<double> cs;
        try {
            cs = existence_check(e, {r.lambda1, r.lambda2});
        } catch (const std::exception&) {
            return false;
        }
        if (!close_and_check(e, cs, 1 + static_cast<unsigned>(it), 40, 4, 4, {4, 3, 2},
                             {0, 0, 1}))
            return false;
        // existence gates exactly on c < ab/(a+b)
        if (solve_c43(a, b, 1.01 * thr).verdict == Verdict::Exists) return false;
        if (solve_c43(a, b, 0.99 * thr).verdict != Verdict::Exists) return false;
    }
    return true;
}

bool criterion7() {
    // The family only exists below a shape-dependent threshold in c, so
    // resample axes until the solver certifies five instances.
    for (int it = 0, draws = 0; it < 5; ++it) {
        double c = uniform(0.15, 0.3), b = uniform(0.8, 1.2), a = uniform(3.2, 4.8);
        Ellipsoid<double> e({c, b, a});
        decltype(solve_signature(e, {0, 1}, Signature{{1, 1, 0}}, 1)) sols;
        for (unsigned sd = 1; sd <= 10 && sols.empty(); ++sd)
            sols = solve_signature(e, {0, 1}, Signature{{1, 1, 0}}, sd + static_cast<unsigned>(it));
        if (sols.empty()) {
            if (++draws > 40) return false;
            --it;
            continue;
        }
        const auto& s = sols.front();
        auto res = residual_c53(a, b, c, s.lambdas[0], s.lambdas[1]);
        if (std::abs(res[0]) > kResidualTol || std::abs(res[1]) > kResidualTol) return false;

        CausticSet<double> cs;
        try {
            cs = existence_check(e, s.lambdas);
        } catch (const std::exception&) {
            return false;
        }
        if (!close_and_check(e, cs, 7, 80, 0, 5, {}, {1, 1, 0})) return false;
    }
    return true;
}

bool criterion8() {
    {
        Ellipsoid<double> e({1.0, 3.0});
        auto s = launch_tangent(e, CausticSet<double>{{0.657}, {0}}, 5);
        auto t = run_trajectory(e, s, 200);
        if (t.caustic_drift > kDriftTol) return false;
    }
    {
        Ellipsoid<double> e({0.3, 1.1, 4.2});
        auto cs = existence_check(e, std::vector<double>{0.5, 2.6});
        auto s = launch_tangent(e, cs, 5);
        auto t = run_trajectory(e, s, 200);
        if (t.caustic_drift > kDriftTol) return false;
    }
    // Poncelet: period and length do not depend on the launch point
    auto relaunch = [&](const Ellipsoid<double>& e, const CausticSet<double>& cs,
                        int want_m0) {
        double lo = 1e300, hi = -1e300;
        for (unsigned seed = 1; seed <= 20; ++seed) {
            double len = 0;
            if (!close_and_check(e, cs, seed, 8 * want_m0, want_m0, 0, {}, {}, &len))
                return false;
            lo = std::min(lo, len);
            hi = std::max(hi, len);
        }
        return hi - lo < kRelaunchTol * std::max(1.0, hi);
    };
    if (!relaunch(Ellipsoid<double>({1.0, 3.0}), CausticSet<double>{{0.75}, {0}}, 4))
        return false;
    Ellipsoid<double> sp({0.25, 1.0, 4.0});
    auto cons = construct_m_eq_n(sp);
    if (!cons.ok()) return false;
    return relaunch(sp, *cons.caustics, 6);
}

// Structural probes, reported from the data the earlier criteria produced.
bool criterion9(std::string& detail) {
    int decreasing_ok = 0, decreasing_bad = 0;
    int sig_ok = 0, sig_bad = 0;
    for (const auto& o : g_orbits) {
        bool strict = true;
        for (size_t j = 0; j + 1 < o.rec.winding.size(); ++j)
            strict &= o.rec.winding[j] > o.rec.winding[j + 1];
        (strict ? decreasing_ok : decreasing_bad)++;

        if (!o.tau.empty()) {
            const auto& w = o.rec.elliptic_winding;
            bool match = true;
            size_t n = w.size();
            match &= (w[n - 1] == o.tau[n - 1] + 1);
            for (size_t j = 0; j + 1 < n; ++j)
                match &= (w[j] == w[j + 1] + o.tau[j] + 1);
            (match ? sig_ok : sig_bad)++;
        }
    }

    int roots_checked = 0, nonreal_logged = 0;
    for (const auto& inst : g_exact_instances) {
        auto rs = certificate_root_structure(inst.cert, inst.spec);  // throws if violated
        ++roots_checked;
        nonreal_logged += rs.nonreal_s_roots;
    }

    std::ostringstream os;
    os << "winding decreasing " << decreasing_ok << "/" << (decreasing_ok + decreasing_bad)
       << ", signature relation " << sig_ok << "/" << (sig_ok + sig_bad)
       << ", certificates with real doubled roots " << roots_checked
       << ", nonreal roots logged " << nonreal_logged;
    detail = os.str();
    return decreasing_bad == 0 && sig_bad == 0;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int k, bool ok, const std::string& detail = "") {
        std::cout << "criterion " << k << ": " << (ok ? "pass" : "fail");
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << std::endl;
        if (!ok) ++failures;
    };

    try {
        report(1, criterion1());
        report(2, criterion2());
        report(3, criterion3());
        report(4, criterion4());
        report(5, criterion5());
        report(6, criterion6());
        report(7, criterion7());
        report(8, criterion8());
        std::string detail;
        bool ok9 = criterion9(detail);
        report(9, ok9, detail);
    } catch (const std::exception& ex) {
        std::cout << "aborted: " << ex.what() << std::endl;
        return 99;
    }
    return failures;
}
