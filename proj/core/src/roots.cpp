#include <ebil/roots.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace ebil {

namespace {

std::vector<RPoly> sturm_sequence(const RPoly& p) {
    std::vector<RPoly> seq;
    seq.push_back(p);
    seq.push_back(p.derivative());
    while (!seq.back().is_zero() && seq.back().degree() > 0) {
        auto [q, r] = seq[seq.size() - 2].divmod(seq.back());
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    return seq;
}

int sign_variations_at(const std::vector<RPoly>& seq, const Rational& x) {
    int var = 0, prev = 0;
    for (const auto& s : seq) {
        int sg = s.is_zero() ? 0 : sign(s.eval(x));
        if (sg != 0) {
            if (prev != 0 && sg != prev) ++var;
            prev = sg;
        }
    }
    return var;
}

// Cauchy bound on |roots|.
Rational root_bound(const RPoly& p) {
    Rational m(0);
    Rational lead = abs(p.leading());
    for (int i = 0; i < p.degree(); ++i) {
        Rational r = abs(p.coeff(i)) / lead;
        if (r > m) m = r;
    }
    return m + 1;
}

struct Isolated {
    Rational lo, hi;     // open-ish isolating interval, exactly one root inside
    bool exact = false;  // root == lo == hi
};

// Isolate all real roots of a square-free polynomial in (lo_b, hi_b).
void isolate(const std::vector<RPoly>& seq, const RPoly& p, Rational lo, Rational hi,
             int count, std::vector<Isolated>& out) {
    if (count == 0) return;
    if (count == 1) {
        out.push_back({lo, hi, false});
        return;
    }
    Rational mid = (lo + hi) / 2;
    // A split point that is itself a root breaks the variation counting;
    // move it until the polynomial is nonzero there.
    for (unsigned long k = 3; p.eval(mid) == 0; k += 2) mid = lo + (hi - lo) / Rational(k);
    int left = sign_variations_at(seq, lo) - sign_variations_at(seq, mid);
    isolate(seq, p, lo, mid, left, out);
    isolate(seq, p, mid, hi, count - left, out);
}

}  // namespace

RPoly square_free_part(const RPoly& p) {
    RPoly g = poly_gcd(p, p.derivative());
    if (g.degree() <= 0) return p.monic();
    return p.divmod(g).first.monic();
}

int sturm_count(const RPoly& p, const Rational& lo, const Rational& hi) {
    RPoly sf = square_free_part(p);
    auto seq = sturm_sequence(sf);
    return sign_variations_at(seq, lo) - sign_variations_at(seq, hi);
}

std::vector<std::pair<Rational, int>> real_roots(const RPoly& p, const RationalInterval& iv) {
    if (p.is_zero()) throw std::invalid_argument("undefined root set");
    if (p.degree() == 0) return {};

    // Square-free decomposition: multiplicity of each root of the
    // square-free part is recovered from repeated gcds.
    RPoly sf = square_free_part(p);
    auto seq = sturm_sequence(sf);

    Rational bound = root_bound(sf);
    Rational lo = iv.lo ? *iv.lo : -bound;
    Rational hi = iv.hi ? *iv.hi : bound;
    if (!iv.lo && lo > -bound) lo = -bound;
    if (lo >= hi) return {};

    // Open interval: exclude endpoints that are roots by nudging inward a hair.
    Rational width = hi - lo;
    Rational eps = width / 1000000;
    while (sf.eval(lo) == 0) lo += eps, eps /= 2;
    while (sf.eval(hi) == 0) hi -= eps, eps /= 2;
    if (lo >= hi) return {};

    int total = sign_variations_at(seq, lo) - sign_variations_at(seq, hi);
    std::vector<Isolated> iso;
    isolate(seq, sf, lo, hi, total, iso);

    // Refine each isolating interval by bisection to width 2^-60, trying
    // the simplest rational candidate for an exact hit first.
    Rational target_width = Rational(1, 1);
    mpz_class two_60;
    mpz_ui_pow_ui(two_60.get_mpz_t(), 2, 60);
    target_width = Rational(1) / Rational(two_60);

    std::vector<std::pair<Rational, int>> roots;
    for (auto& is : iso) {
        Rational root;
        if (is.exact) {
            root = is.lo;
        } else {
            Rational a = is.lo, b = is.hi;
            int sa = sign(sf.eval(a));
            bool found_exact = false;
            while (b - a > target_width) {
                Rational cand = simplest_rational_in(a, b);
                if (sf.eval(cand) == 0) {
                    root = cand;
                    found_exact = true;
                    break;
                }
                Rational m = (a + b) / 2;
                int sm = sign(sf.eval(m));
                if (sm == 0) {
                    root = m;
                    found_exact = true;
                    break;
                }
                if (sm == sa)
                    a = m;
                else
                    b = m;
            }
            if (!found_exact) root = (a + b) / 2;
        }
        // Multiplicity: largest k with gcd chain still containing the root;
        // equivalently count derivative vanishing for exact roots, or track
        // via repeated square-free factorization. We use the gcd chain.
        int mult = 1;
        RPoly g = poly_gcd(p, p.derivative());
        RPoly cur = g;
        RPoly factor(std::vector<Rational>{-root, Rational(1)});
        if (is.exact || p.eval(root) == 0) {
            while (!cur.is_zero() && cur.degree() > 0 && cur.eval(root) == 0) {
                ++mult;
                cur = poly_gcd(cur, cur.derivative());
            }
        } else {
            // Irrational root: count via sturm on successive gcds inside the
            // isolating interval.
            Rational a = is.lo, b = is.hi;
            while (!cur.is_zero() && cur.degree() > 0 && sturm_count(cur, a, b) > 0) {
                ++mult;
                cur = poly_gcd(cur, cur.derivative());
            }
        }
        roots.emplace_back(root, mult);
    }
    std::sort(roots.begin(), roots.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return roots;
}

std::vector<std::pair<double, int>> real_roots(const DPoly& p, double tol) {
    if (p.is_zero()) throw std::invalid_argument("undefined root set");
    int n = p.degree();
    if (n == 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    double lead = p.leading();
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i) / lead;
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    double scale = 0;
    for (int i = 0; i <= n; ++i) scale = std::max(scale, std::fabs(p.coeff(i)) / std::fabs(lead));
    scale = std::max(scale, 1.0);
    std::vector<double> vals;
    for (int i = 0; i < n; ++i) {
        auto z = es.eigenvalues()[i];
        if (std::fabs(z.imag()) <= tol * scale) vals.push_back(z.real());
    }
    std::sort(vals.begin(), vals.end());
    std::vector<std::pair<double, int>> out;
    for (double v : vals) {
        if (!out.empty() && std::fabs(v - out.back().first) <= tol * scale) {
            out.back().second += 1;
            out.back().first += (v - out.back().first) / out.back().second;
        } else {
            out.emplace_back(v, 1);
        }
    }
    return out;
}

}  // namespace ebil
