// Command-line front end: periodicity checks, caustic solving, direct
// simulation, rotation numbers, and existence sweeps for billiards inside
// an ellipsoid.

#include <ebil/cayley.hpp>
#include <ebil/closedform.hpp>
#include <ebil/confocal.hpp>
#include <ebil/polyform.hpp>
#include <ebil/simulator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace ebil;

enum class Mode { Neutral, Exact, Float };

Mode literal_mode(const std::string& s) {
    if (s.find('/') != std::string::npos) return Mode::Exact;
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
        return Mode::Float;
    return Mode::Neutral;
}

struct NumberList {
    std::vector<std::string> literals;
    std::vector<Rational> values;
};

NumberList parse_list(const std::string& csv) {
    NumberList out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.literals.push_back(item);
        out.values.push_back(parse_rational(item));
    }
    return out;
}

// Exact mode iff any "p/q" literal appears; mixing with decimals is a
// usage error.
Mode combined_mode(const std::vector<const NumberList*>& lists) {
    Mode m = Mode::Neutral;
    for (const auto* l : lists)
        for (const auto& lit : l->literals) {
            Mode lm = literal_mode(lit);
            if (lm == Mode::Neutral) continue;
            if (m == Mode::Neutral) m = lm;
            if (m != lm) throw CLI::ValidationError("mixed exact and decimal literals");
        }
    return m == Mode::Neutral ? Mode::Exact : m;
}

std::vector<double> to_doubles(const NumberList& l) {
    std::vector<double> out;
    for (const auto& v : l.values) out.push_back(to_double(v));
    return out;
}

std::string poly_str(const RPoly& p, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        Rational c = p.coeff(i);
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rational ac = abs(c);
        if (ac != 1 || i == 0) os << to_string(ac);
        if (i >= 1) {
            if (ac != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

void print_certificate(const Certificate<Rational>& cert) {
    std::cout << "certificate S(x) = " << poly_str(cert.S, "x") << "\n";
    std::cout << "certificate P(x) = " << poly_str(cert.P, "x") << "\n";
    std::cout << "certificate alpha = " << to_string(cert.alpha()) << "\n";
}

int cmd_check_cayley(const NumberList& axes, const NumberList& caustics, int m) {
    combined_mode({&axes, &caustics});  // literal sanity; both parse exactly anyway
    std::vector<Rational> av = axes.values, lv = caustics.values;
    std::sort(av.begin(), av.end());
    std::sort(lv.begin(), lv.end());
    Ellipsoid<Rational> e(av);
    CausticSet<Rational> cs;
    try {
        cs = existence_check(e, lv);
    } catch (const std::domain_error& ex) {
        std::cout << "existence: rejected (" << ex.what() << ")\n";
        return 1;
    }
    std::cout << "existence: accepted, type (";
    for (size_t i = 0; i < cs.type_vector.size(); ++i)
        std::cout << (i ? "," : "") << cs.type_vector[i];
    std::cout << ")\n";
    MergedSpectrum<Rational> spec(e, cs);
    auto v = cayley_condition(spec, m);
    std::cout << "matrix form: " << (v.periodic ? "periodic" : "not periodic") << " (rank "
              << v.rank << " / threshold " << v.threshold << ")\n";
    if (v.periodic) {
        try {
            auto cert = certificate_from_nullspace(spec, m);
            auto rep = verify_certificate(spec, cert);
            std::cout << "certificate form: " << (rep.ok ? "verified" : "failed") << "\n";
            print_certificate(cert);
        } catch (const std::exception& ex) {
            std::cout << "certificate form: unavailable (" << ex.what() << ")\n";
        }
    }
    std::vector<double> gd;
    for (const auto& g : spec.gamma) gd.push_back(to_double(g));
    gd.pop_back();
    auto diag = cayley_diagnostics(gd, m);
    std::cout << "float diagnostics: numerical rank " << diag.numerical_rank << ", singular values";
    for (double s : diag.singular_values) std::cout << ' ' << s;
    std::cout << "\n";
    return v.periodic ? 0 : 1;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Exists: return "exists";
        case Verdict::NotExists: return "not-exists";
        default: return "indeterminate";
    }
}

int cmd_solve(const NumberList& axes, int m, const std::string& type,
              const std::string& tau_csv, unsigned seed) {
    Mode mode = combined_mode({&axes});
    auto ad = to_doubles(axes);
    std::sort(ad.begin(), ad.end());
    int n = static_cast<int>(ad.size());
    std::cout << std::setprecision(17);

    if (n == 2 && (m == 2 || m == 3) && (type == "E" || type == "H")) {
        std::array<int, 2> tau{0, 0};
        if (m == 3) {
            tau = {1, 0};
            if (tau_csv == "0,1") tau = {0, 1};
        }
        auto res = planar_table(ad[1], ad[0], m, type[0], tau);
        if (mode == Mode::Exact) {
            const PlanarRow* row = nullptr;
            for (const auto& r : planar_rows())
                if (r.m == m && r.type == type[0] && (m == 2 || r.tau == tau)) row = &r;
            std::vector<Rational> sv = axes.values;
            std::sort(sv.begin(), sv.end());
            bool ok = row->exists_exact(sv[1], sv[0]);
            res.verdict = ok ? Verdict::Exists : Verdict::NotExists;
        }
        std::cout << "existence: " << verdict_name(res.verdict) << "\n";
        if (res.verdict != Verdict::Exists) {
            std::cout << "requires the table inequality for m=" << m << " type " << type << "\n";
            return 1;
        }
        if (res.lambda == 0) res.lambda = planar_table(ad[1], ad[0], m, type[0], tau).lambda;
        std::cout << "lambda = " << res.lambda << "\n";
        std::cout << "m0 = " << res.m0 << ", m1 = " << res.m1 << ", rho = " << res.rho << "\n";
        return 0;
    }

    if (n == 3 && m == 3 &&
        (type == "EH1" || type == "H1H1" || type == "EH2" || type == "H1H2")) {
        SpatialType st = type == "EH1"    ? SpatialType::EH1
                         : type == "H1H1" ? SpatialType::H1H1
                         : type == "EH2"  ? SpatialType::EH2
                                          : SpatialType::H1H2;
        auto res = spatial_table(ad[2], ad[1], ad[0], st);
        if (mode == Mode::Exact) {
            std::vector<Rational> sv = axes.values;
            std::sort(sv.begin(), sv.end());
            res.verdict = spatial_exists_exact(sv[2], sv[1], sv[0], st) ? Verdict::Exists
                                                                        : Verdict::NotExists;
        }
        std::cout << "existence: " << verdict_name(res.verdict) << "\n";
        if (res.verdict != Verdict::Exists) {
            if (!res.violated.empty()) std::cout << "requires " << res.violated << "\n";
            return 1;
        }
        if (res.lambdas.empty()) res.lambdas = spatial_table(ad[2], ad[1], ad[0], st).lambdas;
        std::cout << "lambda = " << res.lambdas[0] << ", " << res.lambdas[1] << "\n";
        return 0;
    }

    if (n == 3 && m == 4 && type == "H1H1") {
        auto res = solve_c43(ad[2], ad[1], ad[0]);
        if (mode == Mode::Exact) {
            std::vector<Rational> sv = axes.values;
            std::sort(sv.begin(), sv.end());
            res.verdict = sv[0] * (sv[2] + sv[1]) < sv[2] * sv[1] ? Verdict::Exists
                                                                  : Verdict::NotExists;
        }
        std::cout << "existence: " << verdict_name(res.verdict) << "\n";
        if (res.verdict != Verdict::Exists) {
            std::cout << "requires c < ab/(a+b)\n";
            return 1;
        }
        if (res.d == 0) res = solve_c43(ad[2], ad[1], ad[0]);
        std::cout << "d = " << res.d << "\n";
        std::cout << "lambda = " << res.lambda1 << ", " << res.lambda2 << "\n";
        return 0;
    }

    if (m == n) {
        auto res = construct_m_eq_n(Ellipsoid<double>(ad));
        if (!res.ok()) {
            std::cout << "rejected: " << res.rejection << "\n";
            return 1;
        }
        std::cout << "lambda =";
        for (double l : res.caustics->params) std::cout << ' ' << l;
        std::cout << "\n";
        return 0;
    }

    // General signature route.
    if (tau_csv.empty() || type.empty()) {
        throw CLI::ValidationError("this (n, m) needs --type and --tau for the signature solver");
    }
    Signature sig;
    {
        std::stringstream ss(tau_csv);
        std::string item;
        while (std::getline(ss, item, ',')) sig.tau.push_back(std::stoi(item));
    }
    std::vector<int> type_vector;
    if (n == 3) {
        if (type == "EH1") type_vector = {0, 1};
        else if (type == "H1H1") type_vector = {1, 1};
        else if (type == "EH2") type_vector = {0, 2};
        else if (type == "H1H2") type_vector = {1, 2};
        else throw CLI::ValidationError("unknown spatial caustic type");
    } else if (n == 2) {
        if (type == "E") type_vector = {0};
        else if (type == "H") type_vector = {1};
        else throw CLI::ValidationError("unknown planar caustic type");
    } else {
        throw CLI::ValidationError("signature solver types are wired for n in {2,3}");
    }
    auto sols = solve_signature(Ellipsoid<double>(ad), type_vector, sig, seed);
    if (sols.empty()) {
        std::cout << "no convergence for this signature\n";
        return 1;
    }
    for (const auto& s : sols) {
        std::cout << "lambda =";
        for (double l : s.lambdas) std::cout << ' ' << l;
        std::cout << "\ndelta =";
        for (double d : s.deltas) std::cout << ' ' << d;
        std::cout << "\nresidual = " << s.residual_norm << "\n";
        if (s.exact) print_certificate(*s.exact);
    }
    return 0;
}

int cmd_simulate(const NumberList& axes, const NumberList& caustics, int max_bounces,
                 const std::string& csv_path, const std::string& svg_path, unsigned seed) {
    combined_mode({&axes, &caustics});
    auto ad = to_doubles(axes);
    std::sort(ad.begin(), ad.end());
    Ellipsoid<double> e(ad);
    auto ld = to_doubles(caustics);
    std::sort(ld.begin(), ld.end());
    CausticSet<double> cs;
    try {
        cs = existence_check(e, ld);
    } catch (const std::domain_error& ex) {
        std::cout << "existence: rejected (" << ex.what() << ")\n";
        return 1;
    }
    BilliardState start;
    try {
        start = launch_tangent(e, cs, seed);
    } catch (const std::exception& ex) {
        std::cout << "launch failure: " << ex.what() << "\n";
        return 1;
    }
    auto t = run_trajectory(e, start, max_bounces);
    std::cout << std::setprecision(17);
    std::cout << "caustic drift = " << t.caustic_drift << "\n";
    if (t.closure) {
        const auto& c = *t.closure;
        std::cout << "closed: m0 = " << c.m0 << ", elliptic m = " << c.m << ", d = " << c.d
                  << "\n";
        std::cout << "winding =";
        for (int w : c.winding) std::cout << ' ' << w;
        std::cout << "\nelliptic winding =";
        for (int w : c.elliptic_winding) std::cout << ' ' << w;
        std::cout << "\nL0 = " << c.length << "\n";
    } else {
        std::cout << "open after " << max_bounces << " bounces\n";
    }
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        trajectory_csv(e, t, f);
    }
    if (!svg_path.empty() && e.dim() == 2) {
        std::ofstream f(svg_path);
        trajectory_svg(e, t, f);
    }
    return t.closure ? 0 : 1;
}

int cmd_rotation(const NumberList& axes, const std::string& lambda_lit) {
    NumberList ll;
    ll.literals.push_back(lambda_lit);
    ll.values.push_back(parse_rational(lambda_lit));
    combined_mode({&axes, &ll});
    auto ad = to_doubles(axes);
    std::sort(ad.begin(), ad.end());
    if (ad.size() != 2) throw CLI::ValidationError("rotation numbers are planar (two axes)");
    double rho = rotation_number(ad[1], ad[0], to_double(ll.values[0]));
    std::cout << std::setprecision(17) << "rho = " << rho << "\n";
    return 0;
}

int cmd_sweep(const std::string& mode, double a, double lo1, double hi1, int n1, double lo2,
              double hi2, int n2, const std::string& out_path) {
    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!out_path.empty()) {
        f.open(out_path);
        os = &f;
    }
    *os << std::setprecision(17);
    if (mode == "planar") {
        *os << "a,b,m2H,m3H_tau10,m3H_tau01\r\n";
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                double av = lo1 + (hi1 - lo1) * i / std::max(1, n1 - 1);
                double bv = lo2 + (hi2 - lo2) * j / std::max(1, n2 - 1);
                if (!(av > bv && bv > 0)) {
                    *os << av << ',' << bv << ",skipped,skipped,skipped\r\n";
                    continue;
                }
                *os << av << ',' << bv;
                for (const auto& row : planar_rows()) {
                    if (row.type != 'H') continue;
                    *os << ',' << verdict_name(row.exists(av, bv));
                }
                *os << "\r\n";
            }
        return 0;
    }
    if (mode == "spatial") {
        *os << "a,b,c,EH1,H1H1,EH2,H1H2\r\n";
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                double bv = lo1 + (hi1 - lo1) * i / std::max(1, n1 - 1);
                double cv = lo2 + (hi2 - lo2) * j / std::max(1, n2 - 1);
                if (!(a > bv && bv > cv && cv > 0)) {
                    *os << a << ',' << bv << ',' << cv << ",skipped,skipped,skipped,skipped\r\n";
                    continue;
                }
                *os << a << ',' << bv << ',' << cv;
                for (auto st : {SpatialType::EH1, SpatialType::H1H1, SpatialType::EH2,
                                SpatialType::H1H2})
                    *os << ',' << verdict_name(spatial_table(a, bv, cv, st).verdict);
                *os << "\r\n";
            }
        return 0;
    }
    throw CLI::ValidationError("sweep mode must be planar or spatial");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodicity conditions and billiard dynamics inside ellipsoids"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file supplying the options");

    std::string axes_csv, caustics_csv, type, tau_csv, csv_path, svg_path, lambda_lit;
    std::string sweep_mode = "spatial";
    int m = 0, max_bounces = 1000, grid1 = 10, grid2 = 10;
    unsigned seed = 1;
    double sweep_a = 4, lo1 = 0, hi1 = 1, lo2 = 0, hi2 = 1;
    std::string out_path;

    auto* check = app.add_subcommand("check-cayley", "decide periodicity for given caustics");
    check->add_option("--axes", axes_csv);
    check->add_option("--caustics", caustics_csv);
    check->add_option("--m", m);

    auto* solve = app.add_subcommand("solve-caustics", "construct caustics for a given period");
    solve->add_option("--axes", axes_csv);
    solve->add_option("--m", m);
    solve->add_option("--type", type);
    solve->add_option("--tau", tau_csv);
    solve->add_option("--seed", seed);

    auto* sim = app.add_subcommand("simulate", "run the billiard and detect closure");
    sim->add_option("--axes", axes_csv);
    sim->add_option("--caustics", caustics_csv);
    sim->add_option("--max-bounces", max_bounces);
    sim->add_option("--csv", csv_path);
    sim->add_option("--svg", svg_path);
    sim->add_option("--seed", seed);

    auto* rot = app.add_subcommand("rotation-number", "planar rotation number of a caustic");
    rot->add_option("--axes", axes_csv);
    rot->add_option("--lambda", lambda_lit);

    auto* sweep = app.add_subcommand("sweep", "existence verdicts over a parameter grid");
    sweep->add_option("--mode", sweep_mode);
    sweep->add_option("--a", sweep_a);
    sweep->add_option("--range1", [&lo1, &hi1, &grid1](const std::vector<std::string>& v) {
        return sscanf(v[0].c_str(), "%lf:%lf:%d", &lo1, &hi1, &grid1) == 3;
    }, "lo:hi:steps for the first swept parameter");
    sweep->add_option("--range2", [&lo2, &hi2, &grid2](const std::vector<std::string>& v) {
        return sscanf(v[0].c_str(), "%lf:%lf:%d", &lo2, &hi2, &grid2) == 3;
    }, "lo:hi:steps for the second swept parameter");
    sweep->add_option("--out", out_path);

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) sc->fallthrough();

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw CLI::ValidationError("cannot open config file");
            nlohmann::json j;
            f >> j;
            if (j.contains("axes")) axes_csv = j["axes"].get<std::string>();
            if (j.contains("caustics")) caustics_csv = j["caustics"].get<std::string>();
            if (j.contains("m")) m = j["m"].get<int>();
            if (j.contains("type")) type = j["type"].get<std::string>();
            if (j.contains("tau")) tau_csv = j["tau"].get<std::string>();
            if (j.contains("max_bounces")) max_bounces = j["max_bounces"].get<int>();
            if (j.contains("lambda")) lambda_lit = j["lambda"].get<std::string>();
        }
        if (check->parsed())
            return cmd_check_cayley(parse_list(axes_csv), parse_list(caustics_csv), m);
        if (solve->parsed()) return cmd_solve(parse_list(axes_csv), m, type, tau_csv, seed);
        if (sim->parsed())
            return cmd_simulate(parse_list(axes_csv), parse_list(caustics_csv), max_bounces,
                                csv_path, svg_path, seed);
        if (rot->parsed()) return cmd_rotation(parse_list(axes_csv), lambda_lit);
        if (sweep->parsed())
            return cmd_sweep(sweep_mode, sweep_a, lo1, hi1, grid1, lo2, hi2, grid2, out_path);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
