#pragma once

// Rank formulation of the periodicity condition: Taylor coefficients of
// f(t) = sqrt(prod (1 - gamma_i t)), the Hankel-type coefficient matrix,
// the rank test, and the bordered-minor system.

#include <ebil/confocal.hpp>
#include <ebil/linalg.hpp>
#include <ebil/poly.hpp>

#include <vector>

namespace ebil {

struct TaylorSeries {
    std::vector<Rational> gammas;
    std::vector<Rational> coeffs;  // f_0 .. f_L
    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Exact coefficients via 2 f_l = (-1)^l e_l(gamma) - sum_{k=1}^{l-1} f_k f_{l-k}.
// The square of the truncated series is checked against prod (1 - gamma_i t)
// through degree L on construction.
TaylorSeries taylor_coeffs(const std::vector<Rational>& gammas, int L);

// Rows run f_{m+1} .. f_{2m-1} down the first column; entry (i, j) is
// f_{m+1+i-j}. Corners: f_{m+1} top-left, f_{n+1} top-right, f_{2m-1}
// bottom-left, f_{m+n-1} bottom-right. Dimensions (m-1) x (m-n+1).
struct CayleyMatrix {
    int m = 0, n = 0;
    RMatrix entries;
};

CayleyMatrix cayley_matrix(const MergedSpectrum<Rational>& spec, int m);

struct CayleyVerdict {
    bool periodic = false;
    int rank = 0;
    int threshold = 0;  // verdict is rank < threshold, threshold = m-n+1
};

// True iff trajectories sharing this spectrum close up with elliptic
// period m. Throws "elliptic period below dimension" when m < n.
CayleyVerdict cayley_condition(const MergedSpectrum<Rational>& spec, int m);

// Determinant M_{m,n,l}: first m-n rows of the matrix plus its (m-n+l)-th
// row, 1 <= l <= n-1.
Rational minor_system(const MergedSpectrum<Rational>& spec, int m, int l);

// Float diagnostics only; never used for the boolean verdict.
struct CayleyDiagnostics {
    std::vector<double> singular_values;
    int numerical_rank = 0;
};
CayleyDiagnostics cayley_diagnostics(const std::vector<double>& gammas, int m, double tol = 1e-9);

}  // namespace ebil
