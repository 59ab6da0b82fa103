#include <ebil/linalg.hpp>

#include <stdexcept>

namespace ebil {

namespace {

// Clear denominators row by row so Bareiss stays in integers.
std::vector<std::vector<mpz_class>> clear_rows(const RMatrix& m) {
    std::vector<std::vector<mpz_class>> z;
    z.reserve(m.size());
    for (const auto& row : m) {
        mpz_class l = 1;
        for (const auto& v : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        std::vector<mpz_class> zr;
        zr.reserve(row.size());
        for (const auto& v : row) zr.push_back(v.get_num() * (l / mpz_class(v.get_den())));
        z.push_back(std::move(zr));
    }
    return z;
}

}  // namespace

int rank_exact(const RMatrix& m) {
    if (m.empty()) return 0;
    auto a = clear_rows(m);
    size_t rows = a.size(), cols = a[0].size();
    for (const auto& r : m)
        if (r.size() != cols) throw std::invalid_argument("ragged matrix");

    // Fraction-free elimination; exact divisions by the previous pivot.
    mpz_class prev = 1;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                mpz_class t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return static_cast<int>(r);
}

Rational det_exact(const RMatrix& m) {
    size_t n = m.size();
    if (n == 0) return Rational(1);
    for (const auto& r : m)
        if (r.size() != n) throw std::invalid_argument("determinant of non-square matrix");

    // Work directly in rationals: plain Gaussian elimination.
    RMatrix a = m;
    Rational det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            Rational f = a[i][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

std::vector<Rational> null_vector_exact(const RMatrix& m) {
    if (m.empty() || m[0].empty()) return {};
    size_t rows = m.size(), cols = m[0].size();
    RMatrix a = m;

    // Reduced row echelon form.
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        Rational inv = Rational(1) / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    if (pivot_col.size() == cols) return {};

    // Free variable = first non-pivot column, set to 1.
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    size_t free_c = 0;
    while (is_pivot[free_c]) ++free_c;

    std::vector<Rational> v(cols, Rational(0));
    v[free_c] = Rational(1);
    for (size_t i = 0; i < pivot_col.size(); ++i)
        v[static_cast<size_t>(pivot_col[i])] = -a[i][free_c];

    // Scale to integer entries with gcd 1 for stable presentation.
    mpz_class l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    mpz_class g = 0;
    for (auto& x : v) {
        x *= Rational(l);
        x.canonicalize();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
    }
    if (g > 1)
        for (auto& x : v) {
            x /= Rational(g);
            x.canonicalize();
        }
    return v;
}

}  // namespace ebil
