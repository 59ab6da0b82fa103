#include <ebil/simulator.hpp>

#include <ebil/roots.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ebil {

namespace {

// The propagation core runs in extended precision: periodic orbits passing
// close to a coordinate plane amplify state roundoff by several orders of
// magnitude, and closures are measured down to 1e-8.
using Real = long double;
using LVec = std::vector<Real>;

template <class T>
T boundary_residual_t(const Ellipsoid<double>& e, const std::vector<T>& x) {
    T s = -1.0L;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * x[i] / static_cast<T>(e.axes[i]);
    return s;
}

double boundary_residual(const Ellipsoid<double>& e, const std::vector<double>& x) {
    return static_cast<double>(boundary_residual_t(e, x));
}

// Cleared tangency polynomial evaluated at lambda (not an axis):
// [(sum p v w)^2 - (sum v^2 w)(sum p^2 w - 1)] * prod (a_i - lambda),
// with w_i = 1/(a_i - lambda). Degree n-1 in lambda.
template <class T>
T tangency_value_t(const Ellipsoid<double>& e, const std::vector<T>& p, const std::vector<T>& v,
                   T lambda) {
    size_t n = e.axes.size();
    T spv = 0, svv = 0, spp = -1.0L, prod = 1;
    for (size_t i = 0; i < n; ++i) {
        T d = static_cast<T>(e.axes[i]) - lambda;
        T w = T(1) / d;
        spv += p[i] * v[i] * w;
        svv += v[i] * v[i] * w;
        spp += p[i] * p[i] * w;
        prod *= d;
    }
    return (spv * spv - svv * spp) * prod;
}

double tangency_value(const Ellipsoid<double>& e, const std::vector<double>& p,
                      const std::vector<double>& v, double lambda) {
    return static_cast<double>(tangency_value_t(e, p, v, lambda));
}

LVec tangency_gradient_v(const Ellipsoid<double>& e, const LVec& p, const LVec& v, Real lambda) {
    size_t n = e.axes.size();
    Real spv = 0, spp = -1.0L, prod = 1;
    LVec w(n);
    for (size_t i = 0; i < n; ++i) {
        w[i] = 1.0L / (static_cast<Real>(e.axes[i]) - lambda);
        spv += p[i] * v[i] * w[i];
        spp += p[i] * p[i] * w[i];
        prod *= static_cast<Real>(e.axes[i]) - lambda;
    }
    LVec g(n);
    for (size_t j = 0; j < n; ++j) g[j] = (2 * spv * p[j] * w[j] - 2 * v[j] * w[j] * spp) * prod;
    return g;
}

std::vector<double> random_boundary_point(const Ellipsoid<double>& e, std::mt19937& rng) {
    std::normal_distribution<double> N(0, 1);
    size_t n = e.axes.size();
    std::vector<double> x(n);
    double q = 0;
    do {
        q = 0;
        for (size_t i = 0; i < n; ++i) {
            x[i] = N(rng);
            q += x[i] * x[i] / e.axes[i];
        }
    } while (q < 1e-12);
    double s = 1.0 / std::sqrt(q);
    for (auto& xi : x) xi *= s;
    return x;
}

using LMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// One Newton pass on the direction so the chord caustics match exactly;
// used both for launching and for re-polishing before measuring lengths.
bool refine_direction_l(const Ellipsoid<double>& e, const LVec& x, LVec& v,
                        const std::vector<double>& targets, int max_iters) {
    size_t n = e.axes.size();
    LVector u(n);
    for (size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = v[i];
    auto residual = [&](const LVector& w, LVector& r, LMatrix* J) {
        LVec vv(n);
        for (size_t i = 0; i < n; ++i) vv[i] = w[static_cast<Eigen::Index>(i)];
        Real norm2 = 0;
        for (Real c : vv) norm2 += c * c;
        for (size_t k = 0; k < targets.size(); ++k) {
            r[static_cast<Eigen::Index>(k)] = tangency_value_t(e, x, vv, static_cast<Real>(targets[k]));
            if (J) {
                auto g = tangency_gradient_v(e, x, vv, static_cast<Real>(targets[k]));
                for (size_t j = 0; j < n; ++j)
                    (*J)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = g[j];
            }
        }
        r[static_cast<Eigen::Index>(n - 1)] = norm2 - 1.0L;
        if (J)
            for (size_t j = 0; j < n; ++j)
                (*J)(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(j)) = 2 * vv[j];
    };
    for (int it = 0; it < max_iters; ++it) {
        LVector r(n);
        LMatrix J(n, n);
        residual(u, r, &J);
        Real rn = r.lpNorm<Eigen::Infinity>();
        if (rn < 1e-16L) break;
        LVector du = J.fullPivLu().solve(-r);
        if (!du.allFinite()) return false;
        // backtrack until the residual decreases; widens the basin a lot
        Real t = 1;
        LVector r2(n);
        for (int half = 0; half < 25; ++half) {
            LVector u2 = u + t * du;
            residual(u2, r2, nullptr);
            if (r2.lpNorm<Eigen::Infinity>() < rn || half == 24) {
                u = u2;
                break;
            }
            t /= 2;
        }
    }
    LVec vv(n);
    for (size_t i = 0; i < n; ++i) vv[i] = u[static_cast<Eigen::Index>(i)];
    Real norm = 0;
    for (Real c : vv) norm += c * c;
    norm = std::sqrt(norm);
    for (auto& c : vv) c /= norm;
    // Verify against the actual caustic extraction.
    std::vector<double> xd(n), vd(n);
    for (size_t i = 0; i < n; ++i) {
        xd[i] = static_cast<double>(x[i]);
        vd[i] = static_cast<double>(vv[i]);
    }
    std::vector<double> got;
    try {
        got = line_caustics(e, xd, vd);
    } catch (const std::exception&) {
        return false;
    }
    if (got.size() != targets.size()) return false;
    for (size_t k = 0; k < targets.size(); ++k) {
        double scale = std::max(1.0, std::fabs(targets[k]));
        if (std::fabs(got[k] - targets[k]) > 1e-10 * scale) return false;
    }
    v = vv;
    return true;
}

bool refine_direction(const Ellipsoid<double>& e, const std::vector<double>& x,
                      std::vector<double>& v, const std::vector<double>& targets,
                      int max_iters) {
    size_t n = e.axes.size();
    LVec xl(x.begin(), x.end()), vl(v.begin(), v.end());
    if (!refine_direction_l(e, xl, vl, targets, max_iters)) return false;
    for (size_t i = 0; i < n; ++i) v[i] = static_cast<double>(vl[i]);
    return true;
}

// Chord advance and mirror reflection at the far intersection, in place.
Real reflect_core(const Ellipsoid<double>& e, LVec& x, LVec& v) {
    size_t n = e.axes.size();
    Real A = 0, B = 0, C = boundary_residual_t(e, x);
    for (size_t i = 0; i < n; ++i) {
        A += v[i] * v[i] / static_cast<Real>(e.axes[i]);
        B += x[i] * v[i] / static_cast<Real>(e.axes[i]);
    }
    Real disc = B * B - A * C;
    if (disc < 1e-14L) throw std::domain_error("grazing segment");
    // Stable far root: avoid cancellation against the near-zero root.
    Real q = -(B + std::copysign(std::sqrt(disc), B));
    Real r1 = q / A, r2 = (q != 0) ? C / q : 0.0L;
    Real step = std::fabs(r1) >= std::fabs(r2) ? r1 : r2;
    if (step <= 0) throw std::domain_error("grazing segment");

    for (size_t i = 0; i < n; ++i) x[i] += step * v[i];
    LVec nrm(n);
    Real nn = 0;
    for (size_t i = 0; i < n; ++i) {
        nrm[i] = x[i] / static_cast<Real>(e.axes[i]);
        nn += nrm[i] * nrm[i];
    }
    nn = std::sqrt(nn);
    Real dot = 0;
    for (size_t i = 0; i < n; ++i) {
        nrm[i] /= nn;
        dot += v[i] * nrm[i];
    }
    for (size_t i = 0; i < n; ++i) v[i] -= 2 * dot * nrm[i];
    return step;
}

BilliardState rounded(const LVec& x, const LVec& v) {
    BilliardState s;
    s.x.assign(x.begin(), x.end());
    s.v.assign(v.begin(), v.end());
    return s;
}

}  // namespace

std::pair<BilliardState, double> reflect_step(const Ellipsoid<double>& e,
                                              const BilliardState& s) {
    LVec x(s.x.begin(), s.x.end()), v(s.v.begin(), s.v.end());
    Real step = reflect_core(e, x, v);
    return {rounded(x, v), static_cast<double>(step)};
}

std::vector<double> line_caustics(const Ellipsoid<double>& e, const std::vector<double>& p,
                                  const std::vector<double>& v) {
    int n = e.dim();
    // Interpolate the degree-(n-1) cleared polynomial at n Chebyshev nodes
    // inside (0, a_1), then take its real roots.
    std::vector<double> nodes(static_cast<size_t>(n));
    double a1 = e.axes[0];
    for (int k = 0; k < n; ++k)
        nodes[static_cast<size_t>(k)] =
            0.5 * a1 * (1.0 + std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * n)));
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd y(n);
    for (int k = 0; k < n; ++k) {
        double t = 1.0;
        for (int j = 0; j < n; ++j) {
            V(k, j) = t;
            t *= nodes[static_cast<size_t>(k)];
        }
        y[k] = tangency_value(e, p, v, nodes[static_cast<size_t>(k)]);
    }
    Eigen::VectorXd coef = V.fullPivLu().solve(y);
    std::vector<double> cs(coef.data(), coef.data() + n);
    DPoly poly{std::move(cs)};
    std::vector<double> out;
    if (poly.degree() >= 1)
        for (auto& [r, mult] : real_roots(poly, 1e-9))
            for (int i = 0; i < mult; ++i) out.push_back(r);
    if (static_cast<int>(out.size()) != n - 1)
        throw std::runtime_error("tangency extraction failed");
    std::sort(out.begin(), out.end());
    return out;
}

BilliardState launch_tangent(const Ellipsoid<double>& e, const CausticSet<double>& caustics,
                             unsigned seed) {
    size_t n = e.axes.size();
    for (double l : caustics.params)
        for (double a : e.axes)
            if (std::fabs(l - a) < 1e-9 * std::max(1.0, a))
                throw std::runtime_error("launch failure");

    std::mt19937 rng(seed);
    std::normal_distribution<double> N(0, 1);
    // Real tangent directions through x exist only where the caustic
    // parameters interlace the elliptic coordinates of x; reject boundary
    // points outside that band (it can be thin).
    std::vector<double> lam = caustics.params;
    std::sort(lam.begin(), lam.end());
    auto admissible_point = [&]() {
        std::vector<double> x;
        for (int draw = 0; draw < 4096; ++draw) {
            x = random_boundary_point(e, rng);
            auto mu = to_elliptic(e, x).mu;
            bool ok = true;
            for (size_t j = 0; j + 1 < mu.size(); ++j)
                if (lam[j] < mu[j] || lam[j] > mu[j + 1]) ok = false;
            if (ok) return x;
        }
        return x;
    };
    std::vector<double> x = admissible_point();
    for (int attempt = 0; attempt < 96; ++attempt) {
        if (attempt > 0 && attempt % 4 == 0) x = admissible_point();
        std::vector<double> v(n);
        double vn = 0;
        for (size_t i = 0; i < n; ++i) {
            v[i] = N(rng);
            vn += v[i] * v[i];
        }
        vn = std::sqrt(vn);
        double inward = 0;
        for (size_t i = 0; i < n; ++i) {
            v[i] /= vn;
            inward += x[i] * v[i] / e.axes[i];
        }
        if (inward > 0)
            for (auto& c : v) c = -c;
        if (refine_direction(e, x, v, caustics.params, 80)) {
            double in2 = 0;
            for (size_t i = 0; i < n; ++i) in2 += x[i] * v[i] / e.axes[i];
            if (in2 > 0)
                for (auto& c : v) c = -c;
            return BilliardState{x, v};
        }
    }
    throw std::runtime_error("launch failure");
}

namespace {

std::optional<std::vector<int>> matching_sign_vector(const BilliardState& a,
                                                     const BilliardState& b, double tol) {
    size_t n = a.x.size();
    std::vector<int> sigma(n);
    for (size_t i = 0; i < n; ++i) {
        // choose the sign per coordinate, then verify
        double direct = std::max(std::fabs(a.x[i] - b.x[i]), std::fabs(a.v[i] - b.v[i]));
        double flipped = std::max(std::fabs(a.x[i] + b.x[i]), std::fabs(a.v[i] + b.v[i]));
        sigma[i] = direct <= flipped ? 1 : -1;
        if (std::min(direct, flipped) > tol) return std::nullopt;
    }
    return sigma;
}

std::vector<std::vector<double>> sample_mu(const Ellipsoid<double>& e, const Trajectory& t,
                                           int bounces, int per_chord) {
    size_t n = e.axes.size();
    std::vector<std::vector<double>> mus(n);
    for (int k = 0; k < bounces; ++k) {
        const auto& s = t.states[static_cast<size_t>(k)];
        double len = t.chord_lengths[static_cast<size_t>(k)];
        for (int i = 0; i < per_chord; ++i) {
            double f = (i + 0.5) / per_chord;
            std::vector<double> p(n);
            for (size_t j = 0; j < n; ++j) p[j] = s.x[j] + f * len * s.v[j];
            auto mu = to_elliptic(e, p);
            for (size_t j = 0; j < n; ++j) mus[j].push_back(mu.mu[j]);
        }
    }
    return mus;
}

// Complete oscillations of one elliptic coordinate per period: half the
// number of hysteresis crossings of the interval midline over the cyclic
// sample sequence.
std::optional<int> count_oscillations(const std::vector<double>& mu, double lo, double hi) {
    double mid = 0.5 * (lo + hi);
    double band = 0.05 * (hi - lo);
    int state = 0;  // +1 above, -1 below, 0 unknown
    int crossings = 0;
    bool seen = false;
    // one cyclic pass, starting from the first decided sample
    size_t n = mu.size(), start = 0;
    while (start < n && std::fabs(mu[start] - mid) <= band) ++start;
    if (start == n) return std::nullopt;
    state = mu[start] > mid ? 1 : -1;
    for (size_t step = 1; step <= n; ++step) {
        double v = mu[(start + step) % n];
        if (std::fabs(v - mid) <= band) continue;
        int s = v > mid ? 1 : -1;
        if (s != state) {
            ++crossings;
            state = s;
            seen = true;
        }
    }
    (void)seen;
    if (crossings % 2 != 0) return std::nullopt;
    return crossings / 2;
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> winding_numbers(const Ellipsoid<double>& e,
                                                              const Trajectory& t) {
    if (!t.closure) throw std::logic_error("winding numbers need a closed trajectory");
    int n = e.dim();
    int m0 = t.closure->m0;
    // merged spectrum endpoints with a leading zero: mu_j in [c_2j, c_2j+1]
    std::vector<double> cs{0.0};
    for (double a : e.axes) cs.push_back(a);
    if (!t.chord_caustics.empty())
        for (double l : t.chord_caustics.front()) cs.push_back(l);
    std::sort(cs.begin(), cs.end());

    std::vector<int> winding(static_cast<size_t>(n), -1);
    for (int per_chord = 256; per_chord <= 1024; per_chord *= 4) {
        auto mus = sample_mu(e, t, m0, per_chord);
        bool all = true;
        for (int j = 0; j < n; ++j) {
            auto c = count_oscillations(mus[static_cast<size_t>(j)], cs[static_cast<size_t>(2 * j)],
                                        cs[static_cast<size_t>(2 * j + 1)]);
            if (!c) {
                all = false;
                break;
            }
            winding[static_cast<size_t>(j)] = *c;
        }
        if (all) break;
        if (per_chord == 1024) throw std::runtime_error("oscillation count unresolved");
    }

    // Parity rule: an axis endpoint forces an even count.
    for (int j = 0; j < n; ++j) {
        bool axis_endpoint = false;
        for (double a : e.axes)
            if (cs[static_cast<size_t>(2 * j)] == a || cs[static_cast<size_t>(2 * j + 1)] == a)
                axis_endpoint = true;
        if (axis_endpoint && winding[static_cast<size_t>(j)] % 2 != 0)
            throw std::runtime_error("oscillation count unresolved");
    }

    std::vector<int> elliptic;
    for (int j = 0; j < n; ++j)
        elliptic.push_back(winding[static_cast<size_t>(j)] / t.closure->d);
    return {winding, elliptic};
}

Trajectory run_trajectory(const Ellipsoid<double>& e, const BilliardState& start,
                          int max_bounces, double tol) {
    Trajectory t;
    LVec xl(start.x.begin(), start.x.end()), vl(start.v.begin(), start.v.end());
    // Polish the start so the chord caustics are sharp before measuring.
    {
        try {
            auto targets = line_caustics(e, start.x, start.v);
            LVec v = vl;
            if (refine_direction_l(e, xl, v, targets, 4)) vl = v;
        } catch (const std::exception&) {
        }
    }
    BilliardState cur = rounded(xl, vl);
    t.states.push_back(cur);
    t.chord_caustics.push_back(line_caustics(e, cur.x, cur.v));

    int m = 0;
    std::vector<int> sigma_m;
    for (int k = 1; k <= max_bounces; ++k) {
        Real len = reflect_core(e, xl, vl);
        t.chord_lengths.push_back(static_cast<double>(len));
        t.total_length += static_cast<double>(len);
        cur = rounded(xl, vl);
        t.states.push_back(cur);
        t.chord_caustics.push_back(line_caustics(e, cur.x, cur.v));

        auto sigma = matching_sign_vector(t.states.front(), cur, tol);
        if (sigma) {
            if (m == 0) {
                m = k;
                sigma_m = *sigma;
            }
            bool identity = std::all_of(sigma->begin(), sigma->end(),
                                        [](int s) { return s == 1; });
            if (identity) {
                ClosureRecord rec;
                rec.m0 = k;
                rec.m = m;
                rec.d = rec.m0 / rec.m;
                rec.sigma = sigma_m;
                rec.length = t.total_length;
                if (rec.d * rec.m != rec.m0 || (rec.d != 1 && rec.d != 2))
                    throw std::logic_error("closure periods are inconsistent");
                t.closure = rec;
                break;
            }
        }
    }

    // Caustic drift across all chords.
    if (!t.chord_caustics.empty()) {
        size_t nc = t.chord_caustics.front().size();
        for (size_t j = 0; j < nc; ++j) {
            double lo = t.chord_caustics.front()[j], hi = lo;
            for (const auto& c : t.chord_caustics) {
                lo = std::min(lo, c[j]);
                hi = std::max(hi, c[j]);
            }
            t.caustic_drift = std::max(t.caustic_drift, (hi - lo) / std::max(1.0, std::fabs(hi)));
        }
    }

    if (t.closure) {
        auto [w, ew] = winding_numbers(e, t);
        t.closure->winding = w;
        t.closure->elliptic_winding = ew;
    }
    return t;
}

void trajectory_csv(const Ellipsoid<double>& e, const Trajectory& t, std::ostream& os) {
    int n = e.dim();
    os << "index";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    for (int i = 1; i <= n; ++i) os << ",v" << i;
    for (int i = 1; i <= n - 1; ++i) os << ",lambda" << i;
    os << ",cumulative_length\r\n";
    os << std::setprecision(17);
    double cum = 0;
    for (size_t k = 0; k < t.states.size(); ++k) {
        os << k;
        for (double c : t.states[k].x) os << ',' << c;
        for (double c : t.states[k].v) os << ',' << c;
        for (double c : t.chord_caustics[k]) os << ',' << c;
        if (k > 0) cum += t.chord_lengths[k - 1];
        os << ',' << cum << "\r\n";
    }
}

void trajectory_svg(const Ellipsoid<double>& e, const Trajectory& t, std::ostream& os) {
    if (e.dim() != 2) throw std::invalid_argument("planar export only");
    double rx = std::sqrt(e.axes[0]), ry = std::sqrt(e.axes[1]);
    double pad = 0.1 * std::max(rx, ry);
    double w = 2 * (rx + pad), h = 2 * (ry + pad);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << -w / 2 << ' '
       << -h / 2 << ' ' << w << ' ' << h << "\" width=\"600\" height=\""
       << 600 * h / w << "\">\n";
    os << "  <ellipse cx=\"0\" cy=\"0\" rx=\"" << rx << "\" ry=\"" << ry
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << 0.004 * w << "\"/>\n";
    if (!t.chord_caustics.empty() && !t.chord_caustics.front().empty()) {
        double l = t.chord_caustics.front()[0];
        if (l < e.axes[0]) {
            os << "  <ellipse cx=\"0\" cy=\"0\" rx=\"" << std::sqrt(e.axes[0] - l) << "\" ry=\""
               << std::sqrt(e.axes[1] - l) << "\" fill=\"none\" stroke=\"#888\" stroke-width=\""
               << 0.003 * w << "\" stroke-dasharray=\"" << 0.02 * w << "\"/>\n";
        } else if (l < e.axes[1]) {
            // hyperbola x^2/(a1-l) + y^2/(a2-l) = 1 with a1-l < 0: two branches
            double A = l - e.axes[0], B = e.axes[1] - l;  // y^2/B - x^2/A = 1
            for (int br = -1; br <= 1; br += 2) {
                os << "  <polyline fill=\"none\" stroke=\"#888\" stroke-width=\"" << 0.003 * w
                   << "\" stroke-dasharray=\"" << 0.02 * w << "\" points=\"";
                for (int i = 0; i <= 64; ++i) {
                    double xx = -rx + 2 * rx * i / 64.0;
                    double yy = br * std::sqrt(B * (1 + xx * xx / A));
                    os << xx << ',' << yy << ' ';
                }
                os << "\"/>\n";
            }
        }
    }
    os << "  <polyline fill=\"none\" stroke=\"#c00\" stroke-width=\"" << 0.004 * w
       << "\" points=\"";
    for (const auto& s : t.states) os << s.x[0] << ',' << s.x[1] << ' ';
    os << "\"/>\n</svg>\n";
}

}  // namespace ebil
