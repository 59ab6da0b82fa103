#include <ebil/cayley.hpp>

#include <Eigen/SVD>

#include <stdexcept>

namespace ebil {

TaylorSeries taylor_coeffs(const std::vector<Rational>& gammas, int L) {
    if (L < 0) throw std::invalid_argument("negative truncation order");
    TaylorSeries s;
    s.gammas = gammas;
    s.coeffs.assign(static_cast<size_t>(L) + 1, Rational(0));
    s.coeffs[0] = Rational(1);
    for (int l = 1; l <= L; ++l) {
        Rational acc = elementary_symmetric(gammas, l);
        if (l % 2 == 1) acc = -acc;
        for (int k = 1; k <= l - 1; ++k)
            acc -= s.coeffs[static_cast<size_t>(k)] * s.coeffs[static_cast<size_t>(l - k)];
        s.coeffs[static_cast<size_t>(l)] = acc / 2;
    }
    // f^2 must reproduce prod (1 - gamma_i t) through degree L.
    for (int l = 0; l <= L; ++l) {
        Rational sq(0);
        for (int k = std::max(0, l - L); k <= std::min(l, L); ++k)
            sq += s.coeffs[static_cast<size_t>(k)] * s.coeffs[static_cast<size_t>(l - k)];
        Rational target = (l <= static_cast<int>(gammas.size())) ? elementary_symmetric(gammas, l)
                                                                 : Rational(0);
        if (l % 2 == 1) target = -target;
        if (sq != target) throw std::logic_error("series square deviates from radicand");
    }
    return s;
}

CayleyMatrix cayley_matrix(const MergedSpectrum<Rational>& spec, int m) {
    int n = spec.n;
    if (m < n) throw std::domain_error("elliptic period below dimension");
    std::vector<Rational> gs(spec.gamma.begin(), spec.gamma.end() - 1);
    TaylorSeries f = taylor_coeffs(gs, 2 * m - 1);

    CayleyMatrix cm;
    cm.m = m;
    cm.n = n;
    int rows = m - 1, cols = m - n + 1;
    cm.entries.assign(static_cast<size_t>(rows), std::vector<Rational>(static_cast<size_t>(cols)));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            int idx = m + 1 + i - j;
            cm.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                f.coeffs[static_cast<size_t>(idx)];
        }
    return cm;
}

CayleyVerdict cayley_condition(const MergedSpectrum<Rational>& spec, int m) {
    CayleyMatrix cm = cayley_matrix(spec, m);
    CayleyVerdict v;
    v.threshold = m - spec.n + 1;
    v.rank = rank_exact(cm.entries);
    v.periodic = v.rank < v.threshold;
    return v;
}

Rational minor_system(const MergedSpectrum<Rational>& spec, int m, int l) {
    int n = spec.n;
    if (l < 1 || l > n - 1) throw std::out_of_range("minor index out of range");
    if (m < n) throw std::domain_error("elliptic period below dimension");
    CayleyMatrix cm = cayley_matrix(spec, m);
    RMatrix sq;
    for (int i = 0; i < m - n; ++i) sq.push_back(cm.entries[static_cast<size_t>(i)]);
    sq.push_back(cm.entries[static_cast<size_t>(m - n + l - 1)]);
    return det_exact(sq);
}

CayleyDiagnostics cayley_diagnostics(const std::vector<double>& gammas, int m, double tol) {
    int n = static_cast<int>(gammas.size() + 1) / 2;
    if (m < n) throw std::domain_error("elliptic period below dimension");
    int L = 2 * m - 1;
    std::vector<double> f(static_cast<size_t>(L) + 1, 0.0);
    f[0] = 1.0;
    // Elementary symmetric polynomials of the gammas, then the same recursion
    // as the exact path.
    std::vector<double> e(static_cast<size_t>(L) + 1, 0.0);
    e[0] = 1.0;
    for (double g : gammas)
        for (int k = L; k >= 1; --k) e[static_cast<size_t>(k)] += g * e[static_cast<size_t>(k - 1)];
    for (int l = 1; l <= L; ++l) {
        double acc = (l <= static_cast<int>(gammas.size())) ? e[static_cast<size_t>(l)] : 0.0;
        if (l % 2 == 1) acc = -acc;
        for (int k = 1; k <= l - 1; ++k)
            acc -= f[static_cast<size_t>(k)] * f[static_cast<size_t>(l - k)];
        f[static_cast<size_t>(l)] = acc / 2;
    }
    int rows = m - 1, cols = m - n + 1;
    Eigen::MatrixXd A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A(i, j) = f[static_cast<size_t>(m + 1 + i - j)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    CayleyDiagnostics d;
    double smax = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        d.singular_values.push_back(svd.singularValues()[i]);
        smax = std::max(smax, d.singular_values.back());
    }
    for (double s : d.singular_values)
        if (s > tol * std::max(smax, 1.0)) ++d.numerical_rank;
    return d;
}

}  // namespace ebil
