#include <ebil/confocal.hpp>

#include <algorithm>
#include <cmath>

namespace ebil {

namespace {

// g restricted to the nonzero coordinates; strictly increasing between
// consecutive poles.
double g_partial(const std::vector<double>& a, const std::vector<double>& x2,
                 const std::vector<size_t>& idx, double mu) {
    double s = -1.0;
    for (size_t j : idx) s += x2[j] / (a[j] - mu);
    return s;
}

double bisect_root(const std::vector<double>& a, const std::vector<double>& x2,
                   const std::vector<size_t>& idx, double lo, double hi,
                   bool lo_is_pole) {
    // Open endpoints: g -> -inf at a pole from above, +inf from below, so
    // interior sign decides the half. When lo is a finite bracket it must
    // already satisfy g(lo) < 0.
    (void)lo_is_pole;
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g_partial(a, x2, idx, mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EllipticCoords to_elliptic(const Ellipsoid<double>& e, const std::vector<double>& x) {
    const auto& a = e.axes;
    size_t n = a.size();
    if (x.size() != n) throw std::invalid_argument("point dimension mismatch");

    std::vector<double> x2(n);
    std::vector<size_t> nz;
    std::vector<double> values;  // boundary contributions first
    for (size_t j = 0; j < n; ++j) {
        x2[j] = x[j] * x[j];
        if (x2[j] == 0.0)
            values.push_back(a[j]);
        else
            nz.push_back(j);
    }

    if (!nz.empty()) {
        double sum2 = 0;
        for (size_t j : nz) sum2 += x2[j];
        // One root below the smallest pole: g(lo) < 0 by construction.
        double lo = a[nz.front()] - sum2 - 1.0;
        values.push_back(bisect_root(a, x2, nz, lo, a[nz.front()], false));
        // One root between each pair of consecutive poles.
        for (size_t i = 0; i + 1 < nz.size(); ++i)
            values.push_back(bisect_root(a, x2, nz, a[nz[i]], a[nz[i + 1]], true));
    }

    std::sort(values.begin(), values.end());
    return EllipticCoords{values};
}

std::vector<double> from_elliptic(const Ellipsoid<double>& e, const EllipticCoords& mu) {
    const auto& a = e.axes;
    size_t n = a.size();
    if (mu.mu.size() != n) throw std::invalid_argument("elliptic coordinate dimension mismatch");

    double scale = a.back();
    std::vector<double> x(n);
    for (size_t j = 0; j < n; ++j) {
        double num = 1.0, den = 1.0;
        for (size_t i = 0; i < n; ++i) {
            num *= a[j] - mu.mu[i];
            if (i != j) den *= a[j] - a[i];
        }
        double r = num / den;
        if (r < -1e-9 * scale) throw std::domain_error("non-interlaced input");
        x[j] = std::sqrt(std::max(r, 0.0));
    }
    return x;
}

}  // namespace ebil
