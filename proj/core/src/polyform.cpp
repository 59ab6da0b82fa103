#include <ebil/polyform.hpp>

#include <ebil/roots.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ebil {

namespace {

template <class T>
Poly<T> radicand_x(const MergedSpectrum<T>& spec) {
    // R(x) = x prod (x - gamma_i)
    std::vector<T> roots(spec.gamma.begin(), spec.gamma.end() - 1);
    roots.push_back(T(0));
    return Poly<T>::from_roots(roots);
}

template <class T>
Poly<T> identity_gap(const MergedSpectrum<T>& spec, const Certificate<T>& cert) {
    Poly<T> lhs = cert.S * cert.S * radicand_x(spec);
    Poly<T> rhs = cert.P * (cert.P - Poly<T>::constant(cert.P.coeff(0)));
    return lhs - rhs;
}

// Label of ascending position p in the paired pattern: true = alpha.
bool alpha_position(int p) { return ((p >> 1) % 2) == 0; }

template <class T>
bool ordering_partition_impl(std::vector<T> a, std::vector<T> b) {
    int m = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != m - 1) return false;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t ia = 0, ib = 0;
    T prev(0);
    bool prev_alpha = true, have_prev = false;
    for (int p = 0; p < 2 * m - 1; ++p) {
        bool want_alpha = alpha_position(p);
        if (want_alpha ? ia >= a.size() : ib >= b.size()) return false;
        T v = want_alpha ? a[ia++] : b[ib++];
        if (!(T(0) < v)) return false;
        if (have_prev) {
            if (v < prev) return false;
            if (prev_alpha != want_alpha && !(prev < v)) return false;
        }
        prev = v;
        prev_alpha = want_alpha;
        have_prev = true;
    }
    return ia == a.size() && ib == b.size();
}

template <class T>
std::vector<T> power_sum_residual_impl(const MergedSpectrum<T>& spec, const Signature& tau,
                                       const std::vector<T>& deltas) {
    int n = spec.n;
    if (static_cast<int>(tau.tau.size()) != n) throw std::invalid_argument("signature length must equal dimension");
    int m = n + tau.excess();
    if (static_cast<int>(deltas.size()) != m - n)
        throw std::invalid_argument("delta count must match the signature excess");
    Decomposition d = decomposition_from_signature(m, n, tau);
    std::vector<T> out;
    out.reserve(static_cast<size_t>(m - 1));
    for (int l = 1; l <= m - 1; ++l) {
        T r(0);
        for (int j : d.J) r += pow_int(spec.gamma[static_cast<size_t>(j - 1)], l);
        for (int k : d.K) r -= pow_int(spec.gamma[static_cast<size_t>(k - 1)], l);
        for (int v : d.V) r += T(2) * pow_int(deltas[static_cast<size_t>(v - 1)], l);
        for (int w : d.W) r -= T(2) * pow_int(deltas[static_cast<size_t>(w - 1)], l);
        out.push_back(r);
    }
    return out;
}

}  // namespace

VerifyReport<Rational> verify_certificate(const MergedSpectrum<Rational>& spec,
                                          const Certificate<Rational>& cert) {
    if (cert.P.coeff(0) == 0) throw std::domain_error("degenerate certificate");
    VerifyReport<Rational> rep;
    rep.ok = identity_gap(spec, cert).is_zero();
    return rep;
}

VerifyReport<double> verify_certificate(const MergedSpectrum<double>& spec,
                                        const Certificate<double>& cert, double tol) {
    if (cert.P.coeff(0) == 0) throw std::domain_error("degenerate certificate");
    Poly<double> gap = identity_gap(spec, cert);
    Poly<double> rhs = cert.P * cert.P;
    double scale = 1.0;
    for (int i = 0; i <= rhs.degree(); ++i) scale = std::max(scale, std::fabs(rhs.coeff(i)));
    VerifyReport<double> rep;
    for (int i = 0; i <= gap.degree(); ++i)
        rep.max_residual = std::max(rep.max_residual, std::fabs(gap.coeff(i)));
    rep.max_residual /= scale;
    rep.ok = rep.max_residual < tol;
    return rep;
}

bool ordering_partition(std::vector<double> alphas, std::vector<double> betas) {
    return ordering_partition_impl(std::move(alphas), std::move(betas));
}
bool ordering_partition(std::vector<Rational> alphas, std::vector<Rational> betas) {
    return ordering_partition_impl(std::move(alphas), std::move(betas));
}

Decomposition decomposition_from_signature(int m, int n, const Signature& tau) {
    if (static_cast<int>(tau.tau.size()) != n) throw std::invalid_argument("signature length must equal dimension");
    if (tau.excess() != m - n) throw std::invalid_argument("signature must sum to the period excess");
    for (int t : tau.tau)
        if (t < 0) throw std::invalid_argument("signature entries must be nonnegative");

    // Synthetic spectrum gamma_j = 2n - j and tau_r markers strictly inside
    // gap r = (gamma_2r, gamma_2r-1); the labels only depend on positions.
    struct Item {
        Rational value;
        bool is_gamma;
        int index;  // gamma index j, or delta index v
    };
    std::vector<Item> items;
    for (int j = 1; j <= 2 * n - 1; ++j) items.push_back({Rational(2 * n - j), true, j});
    std::vector<std::pair<Rational, int>> markers;  // value, preliminary id
    for (int r = 1; r <= n; ++r) {
        Rational lo(2 * n - 2 * r);  // gamma_2r with gamma_2n = 0
        for (int i = 1; i <= tau.tau[static_cast<size_t>(r - 1)]; ++i)
            markers.emplace_back(lo + Rational(i, tau.tau[static_cast<size_t>(r - 1)] + 1), 0);
    }
    // Delta indices count down from the largest marker value.
    std::sort(markers.begin(), markers.end(),
              [](const auto& x, const auto& y) { return y.first < x.first; });
    for (size_t i = 0; i < markers.size(); ++i) markers[i].second = static_cast<int>(i) + 1;
    for (auto& [v, idx] : markers) {
        items.push_back({v, false, idx});
        items.push_back({v, false, idx});
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& x, const Item& y) { return x.value < y.value; });

    Decomposition d;
    std::vector<int> delta_label(markers.size() + 1, -1);
    for (size_t p = 0; p < items.size(); ++p) {
        bool alpha = alpha_position(static_cast<int>(p));
        const Item& it = items[p];
        if (it.is_gamma) {
            (alpha ? d.J : d.K).push_back(it.index);
        } else {
            int& lab = delta_label[static_cast<size_t>(it.index)];
            if (lab == -1)
                lab = alpha ? 1 : 0;
            else if (lab != (alpha ? 1 : 0))
                throw std::logic_error("doubled marker split across labels");
        }
    }
    for (size_t v = 1; v <= markers.size(); ++v)
        (delta_label[v] == 1 ? d.V : d.W).push_back(static_cast<int>(v));
    std::sort(d.J.begin(), d.J.end());
    std::sort(d.K.begin(), d.K.end());
    return d;
}

std::vector<Rational> power_sum_residual(const MergedSpectrum<Rational>& spec,
                                         const Signature& tau,
                                         const std::vector<Rational>& deltas) {
    return power_sum_residual_impl(spec, tau, deltas);
}
std::vector<double> power_sum_residual(const MergedSpectrum<double>& spec, const Signature& tau,
                                       const std::vector<double>& deltas) {
    return power_sum_residual_impl(spec, tau, deltas);
}

namespace {

template <class T, class RootFn>
RootStructureReport root_structure_impl(const Certificate<T>& cert,
                                        const MergedSpectrum<T>& spec, RootFn roots_of,
                                        bool (*lt)(const T&, const T&)) {
    RootStructureReport rep;
    Poly<T> g = poly_gcd(cert.S, cert.S.derivative());
    rep.s_square_free = g.degree() == 0 || cert.S.degree() == 0;

    auto s_roots = roots_of(cert.S);
    int real_count = 0;
    rep.s_roots_in_negative_set = true;
    for (const auto& [root, mult] : s_roots) {
        real_count += mult;
        bool inside = false;
        for (int r = 1; r <= spec.n; ++r) {
            const T& hi = spec.gamma[static_cast<size_t>(2 * r - 2)];
            const T& lo = spec.gamma[static_cast<size_t>(2 * r - 1)];
            if (lt(lo, root) && lt(root, hi)) inside = true;
        }
        if (!inside) rep.s_roots_in_negative_set = false;
    }
    rep.all_s_roots_real = real_count == cert.S.degree();
    rep.nonreal_s_roots = cert.S.degree() - real_count;

    auto count = [&](const Poly<T>& p) {
        int c = 0;
        for (const auto& [root, mult] : roots_of(p)) c += mult;
        return c;
    };
    rep.equal_root_counts =
        count(cert.P) == count(cert.P - Poly<T>::constant(cert.P.coeff(0)));

    if (cert.m <= cert.n + 3 && !rep.all_s_roots_real)
        throw std::logic_error("certificate with nonreal doubled roots below the conjectural range");
    return rep;
}

}  // namespace

RootStructureReport certificate_root_structure(const Certificate<Rational>& cert,
                                               const MergedSpectrum<Rational>& spec) {
    auto roots_of = [](const RPoly& p) { return p.degree() <= 0 ? std::vector<std::pair<Rational, int>>{} : real_roots(p); };
    auto lt = +[](const Rational& a, const Rational& b) { return a < b; };
    return root_structure_impl<Rational>(cert, spec, roots_of, lt);
}

RootStructureReport certificate_root_structure(const Certificate<double>& cert,
                                               const MergedSpectrum<double>& spec, double tol) {
    auto roots_of = [tol](const DPoly& p) {
        return p.degree() <= 0 ? std::vector<std::pair<double, int>>{} : real_roots(p, tol);
    };
    auto lt = +[](const double& a, const double& b) { return a < b; };
    return root_structure_impl<double>(cert, spec, roots_of, lt);
}

Certificate<Rational> certificate_from_nullspace(const MergedSpectrum<Rational>& spec, int m) {
    CayleyMatrix cm = cayley_matrix(spec, m);
    std::vector<Rational> v = null_vector_exact(cm.entries);
    if (v.empty()) throw std::domain_error("condition fails: no certificate exists");
    if (v[0] == 0) throw std::domain_error("degenerate certificate");
    // Column j pairs with the t^j coefficient of s(t); normalize s(0) = 1.
    Rational inv = Rational(1) / v[0];
    for (auto& x : v) x *= inv;
    RPoly s{std::vector<Rational>(v)};

    std::vector<Rational> gs(spec.gamma.begin(), spec.gamma.end() - 1);
    TaylorSeries f = taylor_coeffs(gs, m);
    // g = s * f through degree m: g_0..g_{m-1} are q, and alpha = 2 g_m.
    std::vector<Rational> q(static_cast<size_t>(m), Rational(0));
    Rational gm(0);
    for (int l = 0; l <= m; ++l) {
        Rational acc(0);
        for (int j = 0; j <= std::min(l, s.degree()); ++j)
            acc += s.coeff(j) * f.coeffs[static_cast<size_t>(l - j)];
        if (l < m)
            q[static_cast<size_t>(l)] = acc;
        else
            gm = acc;
    }
    Certificate<Rational> cert =
        Certificate<Rational>::from_tform(m, spec.n, s, RPoly(std::move(q)), 2 * gm);
    if (!verify_certificate(spec, cert).ok)
        throw std::logic_error("nullspace certificate failed the identity check");
    return cert;
}

namespace {

struct SlotLayout {
    // gamma indices (1-based, decreasing scale) that are unknown caustics,
    // plus the c-space interval (axis gap) each one lives in.
    std::vector<int> unknown_gamma_index;
    std::vector<std::pair<double, double>> c_interval;  // (a_g, a_{g+1}), a_0 = 0
    std::vector<double> known_gamma;                    // full 2n-1 slots; NaN where unknown
};

SlotLayout slot_layout(const Ellipsoid<double>& e, const std::vector<int>& type_vector) {
    int n = e.dim();
    if (static_cast<int>(type_vector.size()) != n - 1)
        throw std::invalid_argument("type vector length must be dimension minus one");
    // Ascending merged tokens: caustic k sits in axis gap type_vector[k-1].
    struct Tok {
        bool axis;
        int k;  // caustic ordinal (1-based) or axis ordinal
    };
    std::vector<Tok> toks;
    std::vector<std::vector<int>> per_gap(static_cast<size_t>(n));
    for (int k = 1; k <= n - 1; ++k) {
        int g = type_vector[static_cast<size_t>(k - 1)];
        if (g < k - 1 || g > k) throw std::invalid_argument("invalid caustic type vector");
        per_gap[static_cast<size_t>(g)].push_back(k);
    }
    for (int g = 0; g < n; ++g) {
        for (int k : per_gap[static_cast<size_t>(g)]) toks.push_back({false, k});
        if (g + 1 <= n) toks.push_back({true, g + 1});
    }
    SlotLayout lay;
    lay.known_gamma.assign(static_cast<size_t>(2 * n - 1),
                           std::numeric_limits<double>::quiet_NaN());
    for (size_t pos = 0; pos < toks.size(); ++pos) {
        int gamma_idx = static_cast<int>(pos) + 1;  // gamma_i = 1/c_i shares the index
        if (toks[pos].axis) {
            lay.known_gamma[static_cast<size_t>(gamma_idx - 1)] =
                1.0 / e.axes[static_cast<size_t>(toks[pos].k - 1)];
        } else {
            int g = type_vector[static_cast<size_t>(toks[pos].k - 1)];
            double lo = (g == 0) ? 0.0 : e.axes[static_cast<size_t>(g - 1)];
            double hi = e.axes[static_cast<size_t>(g)];
            lay.unknown_gamma_index.push_back(gamma_idx);
            lay.c_interval.emplace_back(lo, hi);
        }
    }
    return lay;
}

}  // namespace

std::vector<SignatureSolution> solve_signature(const Ellipsoid<double>& e,
                                               const std::vector<int>& type_vector,
                                               const Signature& tau, unsigned seed) {
    int n = e.dim();
    int m = n + tau.excess();
    int nd = m - n;
    int nu = (n - 1) + nd;  // unknowns = equations = m-1
    if (nu != m - 1) throw std::logic_error("system is not square");
    Decomposition dec = decomposition_from_signature(m, n, tau);
    SlotLayout lay = slot_layout(e, type_vector);

    // Which gap each delta index lives in: indices run down the gaps from
    // the top (delta_1 is the largest value, gap 1 the highest gap).
    std::vector<int> gap_of(static_cast<size_t>(nd) + 1, 0);
    {
        int idx = 1;
        for (int r = 1; r <= n; ++r)
            for (int i = 0; i < tau.tau[static_cast<size_t>(r - 1)]; ++i)
                gap_of[static_cast<size_t>(idx++)] = r;
    }

    std::vector<int> sign_gamma(static_cast<size_t>(2 * n), 0);
    for (int j : dec.J) sign_gamma[static_cast<size_t>(j)] = +1;
    for (int k : dec.K) sign_gamma[static_cast<size_t>(k)] = -1;
    std::vector<int> sign_delta(static_cast<size_t>(nd) + 1, 0);
    for (int v : dec.V) sign_delta[static_cast<size_t>(v)] = +1;
    for (int w : dec.W) sign_delta[static_cast<size_t>(w)] = -1;

    auto assemble = [&](const Eigen::VectorXd& u, std::vector<double>& gam,
                        std::vector<double>& del) {
        gam = lay.known_gamma;
        for (size_t i = 0; i < lay.unknown_gamma_index.size(); ++i)
            gam[static_cast<size_t>(lay.unknown_gamma_index[i] - 1)] = u[static_cast<Eigen::Index>(i)];
        del.assign(static_cast<size_t>(nd), 0.0);
        for (int v = 0; v < nd; ++v)
            del[static_cast<size_t>(v)] = u[static_cast<Eigen::Index>(lay.unknown_gamma_index.size()) + v];
    };

    auto residual = [&](const Eigen::VectorXd& u) {
        std::vector<double> gam, del;
        assemble(u, gam, del);
        Eigen::VectorXd r(nu);
        for (int l = 1; l <= m - 1; ++l) {
            double acc = 0;
            for (int j = 1; j <= 2 * n - 1; ++j)
                acc += sign_gamma[static_cast<size_t>(j)] *
                       std::pow(gam[static_cast<size_t>(j - 1)], l);
            for (int v = 1; v <= nd; ++v)
                acc += 2.0 * sign_delta[static_cast<size_t>(v)] *
                       std::pow(del[static_cast<size_t>(v - 1)], l);
            r[l - 1] = acc;
        }
        return r;
    };

    auto jacobian = [&](const Eigen::VectorXd& u) {
        std::vector<double> gam, del;
        assemble(u, gam, del);
        Eigen::MatrixXd J(nu, nu);
        for (int l = 1; l <= m - 1; ++l) {
            for (size_t i = 0; i < lay.unknown_gamma_index.size(); ++i) {
                int j = lay.unknown_gamma_index[i];
                J(l - 1, static_cast<Eigen::Index>(i)) =
                    sign_gamma[static_cast<size_t>(j)] * l *
                    std::pow(gam[static_cast<size_t>(j - 1)], l - 1);
            }
            for (int v = 1; v <= nd; ++v)
                J(l - 1, static_cast<Eigen::Index>(lay.unknown_gamma_index.size()) + v - 1) =
                    2.0 * sign_delta[static_cast<size_t>(v)] * l *
                    std::pow(del[static_cast<size_t>(v - 1)], l - 1);
        }
        return J;
    };

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);

    std::vector<SignatureSolution> found;
    for (int restart = 0; restart < 8; ++restart) {
        Eigen::VectorXd u(nu);
        // Caustic seeds at interval midpoints (evenly spread when several
        // caustics share an axis gap), in c-space, then inverted.
        {
            // Solutions often hug a slot boundary, so later restarts probe
            // edge-biased fractions of each interval instead of jittering
            // around the midpoint.
            static const double edge_fracs[7] = {0.07, 0.93, 0.3, 0.7, 0.15, 0.85, 0.5};
            std::vector<double> frac(lay.c_interval.size());
            for (size_t i = 0; i < lay.c_interval.size(); ++i) {
                size_t same = 0, rank_in = 0;
                for (size_t k = 0; k < lay.c_interval.size(); ++k)
                    if (lay.c_interval[k] == lay.c_interval[i]) {
                        if (k < i) ++rank_in;
                        ++same;
                    }
                if (restart == 0) {
                    frac[i] = static_cast<double>(rank_in + 1) / static_cast<double>(same + 1);
                } else {
                    double f = edge_fracs[(static_cast<size_t>(restart - 1) + 2 * i) % 7];
                    f += 0.05 * U(rng);
                    frac[i] = std::min(std::max(f, 0.01), 0.99);
                }
            }
            // Caustics sharing an axis gap must stay ordered.
            for (size_t i = 0; i + 1 < frac.size(); ++i)
                if (lay.c_interval[i] == lay.c_interval[i + 1] && frac[i] > frac[i + 1])
                    std::swap(frac[i], frac[i + 1]);
            for (size_t i = 0; i < frac.size(); ++i) {
                auto [lo, hi] = lay.c_interval[i];
                u[static_cast<Eigen::Index>(i)] = 1.0 / (lo + (hi - lo) * frac[i]);
            }
        }
        // Delta seeds at gap midpoints in gamma-space, using the seed
        // caustics for the gap endpoints.
        {
            std::vector<double> gam, del_unused;
            assemble(u, gam, del_unused);
            int idx = 1;
            for (int r = 1; r <= n; ++r) {
                int cnt = tau.tau[static_cast<size_t>(r - 1)];
                if (cnt == 0) continue;
                double hi = gam[static_cast<size_t>(2 * r - 2)];
                double lo = (2 * r - 1 < 2 * n - 1) ? gam[static_cast<size_t>(2 * r - 1)] : 0.0;
                for (int i = 0; i < cnt; ++i) {
                    double frac = static_cast<double>(cnt - i) / static_cast<double>(cnt + 1);
                    double d = lo + (hi - lo) * frac;
                    if (restart > 0) d += 0.3 * (hi - lo) * U(rng) * frac * (1 - frac) * 4;
                    u[static_cast<Eigen::Index>(lay.unknown_gamma_index.size()) + idx - 1] = d;
                    ++idx;
                }
            }
        }

        // Damped Newton with backtracking on the residual norm.
        Eigen::VectorXd r = residual(u);
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            if (r.lpNorm<Eigen::Infinity>() < 1e-12) {
                converged = true;
                break;
            }
            Eigen::MatrixXd J = jacobian(u);
            Eigen::VectorXd du = J.fullPivLu().solve(-r);
            if (!du.allFinite()) break;
            double t = 1.0;
            Eigen::VectorXd un, rn;
            bool stepped = false;
            for (int h = 0; h < 30; ++h) {
                un = u + t * du;
                rn = residual(un);
                if (rn.norm() < r.norm() * (1.0 - 1e-4 * t) + 1e-300) {
                    stepped = true;
                    break;
                }
                t *= 0.5;
            }
            if (!stepped) break;
            u = un;
            r = rn;
        }
        if (!converged || r.lpNorm<Eigen::Infinity>() >= 1e-12) continue;

        // Gap and ordering constraints.
        std::vector<double> gam, del;
        assemble(u, gam, del);
        bool ok = true;
        for (size_t i = 0; i + 1 < gam.size(); ++i)
            if (!(gam[i] > gam[i + 1])) ok = false;
        if (!(gam.back() > 0)) ok = false;
        for (int v = 1; v <= nd && ok; ++v) {
            int gp = gap_of[static_cast<size_t>(v)];
            double hi = gam[static_cast<size_t>(2 * gp - 2)];
            double lo = (2 * gp < 2 * n) ? gam[static_cast<size_t>(2 * gp - 1)] : 0.0;
            double d = del[static_cast<size_t>(v - 1)];
            if (!(lo < d && d < hi)) ok = false;
            double scale = std::max({std::fabs(hi), std::fabs(lo), 1.0});
            if (std::min(hi - d, d - lo) < 1e-8 * scale) ok = false;  // singular: delta on a gamma
            if (v > 1 && !(del[static_cast<size_t>(v - 2)] > d)) ok = false;
        }
        if (!ok) continue;

        // Deduplicate converged points.
        bool dup = false;
        for (const auto& s : found) {
            double diff = 0, scale = 1;
            for (size_t i = 0; i < gam.size(); ++i) {
                diff = std::max(diff, std::fabs(gam[i] - s.gammas[i]));
                scale = std::max(scale, std::fabs(gam[i]));
            }
            for (size_t i = 0; i < del.size(); ++i)
                diff = std::max(diff, std::fabs(del[i] - s.deltas[i]));
            if (diff < 1e-8 * scale) dup = true;
        }
        if (dup) continue;

        SignatureSolution sol;
        sol.gammas = gam;
        sol.deltas = del;
        sol.residual_norm = r.lpNorm<Eigen::Infinity>();
        for (size_t i = 0; i < lay.unknown_gamma_index.size(); ++i)
            sol.lambdas.push_back(1.0 / u[static_cast<Eigen::Index>(i)]);
        std::sort(sol.lambdas.begin(), sol.lambdas.end());

        // Exact route when everything snaps to small rationals.
        [&] {
            std::vector<Rational> rg, rd;
            for (double g : gam) {
                auto s = snap_to_rational(g, 1000000, 1e-9);
                if (!s) return;
                rg.push_back(*s);
            }
            for (double d : del) {
                auto s = snap_to_rational(d, 1000000, 1e-9);
                if (!s) return;
                rd.push_back(*s);
            }
            try {
                auto spec = MergedSpectrum<Rational>::from_gammas(rg);
                for (const auto& res : power_sum_residual(spec, tau, rd))
                    if (res != 0) return;
                auto cert = certificate_from_nullspace(spec, m);
                sol.exact = cert;
                sol.exact_spec = spec;
            } catch (const std::exception&) {
            }
        }();

        found.push_back(std::move(sol));
    }
    return found;
}

}  // namespace ebil
