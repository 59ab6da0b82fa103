#pragma once

// Polynomial-certificate formulation: monic pairs (S, P) with
// S^2 R = P (P - P(0)), trajectory signatures, the induced index
// decompositions, power-sum residual systems, and a Newton solver that
// recovers caustics and doubled roots for a prescribed signature.

#include <ebil/cayley.hpp>
#include <ebil/confocal.hpp>
#include <ebil/poly.hpp>

#include <optional>
#include <vector>

namespace ebil {

// Canonical x-form (gamma scale). The t-form (s, q, alpha) used for
// display interconverts via R(x) = x^{2n} r(1/x), S(x) = x^{m-n} s(1/x),
// P(x) = alpha + x^m q(1/x).
template <class T>
struct Certificate {
    int m = 0, n = 0;
    Poly<T> S;  // monic, degree m-n
    Poly<T> P;  // monic, degree m, P(0) != 0

    T alpha() const { return P.coeff(0); }
    Poly<T> s_tform() const { return S.reversed(m - n); }
    Poly<T> q_tform() const {
        Poly<T> body = P - Poly<T>::constant(P.coeff(0));
        Poly<T> q = body.reversed(m);
        // reversal parks the dropped constant at degree m; it is zero.
        return q;
    }

    static Certificate from_tform(int m, int n, const Poly<T>& s, const Poly<T>& q,
                                  const T& alpha) {
        Certificate c;
        c.m = m;
        c.n = n;
        c.S = s.reversed(m - n);
        c.P = q.reversed(m) + Poly<T>::constant(alpha);
        return c;
    }
};

template <class T>
struct VerifyReport {
    bool ok = false;
    double max_residual = 0;  // float path only; 0 on the exact path
};

// Checks S^2(x) R(x) = P(x)(P(x) - P(0)) with R(x) = x prod (x - gamma_i).
// Exact on rationals; the float overload compares coefficients against a
// relative tolerance. Throws "degenerate certificate" when P(0) = 0.
VerifyReport<Rational> verify_certificate(const MergedSpectrum<Rational>& spec,
                                          const Certificate<Rational>& cert);
VerifyReport<double> verify_certificate(const MergedSpectrum<double>& spec,
                                        const Certificate<double>& cert, double tol = 1e-9);

struct RootStructureReport {
    bool s_square_free = false;
    bool s_roots_in_negative_set = false;  // every real root of S inside some (gamma_2r, gamma_2r-1)
    bool equal_root_counts = false;        // real roots of P and P - P(0), with multiplicity
    bool all_s_roots_real = false;
    int nonreal_s_roots = 0;  // evidence only for m > n+3
};

// Asserts the structural facts that hold for every valid certificate; for
// m <= n+3 a failure of all_s_roots_real throws (it would mean a bug or a
// bad certificate), for larger m it is merely reported.
RootStructureReport certificate_root_structure(const Certificate<Rational>& cert,
                                               const MergedSpectrum<Rational>& spec);
RootStructureReport certificate_root_structure(const Certificate<double>& cert,
                                               const MergedSpectrum<double>& spec,
                                               double tol = 1e-9);

// True iff the merged ascending sequence follows the paired pattern
// alpha,alpha,beta,beta,alpha,alpha,... (ties allowed inside a pair,
// strict increase across label changes).
bool ordering_partition(std::vector<double> alphas, std::vector<double> betas);
bool ordering_partition(std::vector<Rational> alphas, std::vector<Rational> betas);

struct Signature {
    std::vector<int> tau;  // tau_1..tau_n, nonnegative, sums to m-n

    int excess() const {
        int s = 0;
        for (int t : tau) s += t;
        return s;
    }
};

struct Decomposition {
    std::vector<int> J, K;  // partition of {1..2n-1}, |J| = n
    std::vector<int> V, W;  // partition of {1..m-n}, indices of the deltas
};

// Places tau_r doubled markers in gap r = (gamma_2r, gamma_2r-1) (with
// gamma_2n = 0), sorts everything ascending, and labels positions by the
// paired pattern; alpha-labelled entries land in J/V, beta-labelled in K/W.
// Delta indices count down from the largest value (delta_1 is the biggest).
Decomposition decomposition_from_signature(int m, int n, const Signature& tau);

// residual_l = (sum_J gamma_j^l + 2 sum_V delta_v^l)
//            - (sum_K gamma_k^l + 2 sum_W delta_w^l),  l = 1..m-1.
// deltas are passed in decreasing order (delta_1 first). Zero vector iff
// a certificate with these data exists.
std::vector<Rational> power_sum_residual(const MergedSpectrum<Rational>& spec,
                                         const Signature& tau,
                                         const std::vector<Rational>& deltas);
std::vector<double> power_sum_residual(const MergedSpectrum<double>& spec, const Signature& tau,
                                       const std::vector<double>& deltas);

struct SignatureSolution {
    std::vector<double> lambdas;       // caustic parameters, increasing
    std::vector<double> gammas;        // full spectrum, decreasing
    std::vector<double> deltas;        // doubled roots, decreasing
    double residual_norm = 0;
    std::optional<Certificate<Rational>> exact;  // when a rational snap verifies
    std::optional<MergedSpectrum<Rational>> exact_spec;
};

// Solves the square system residual_1..m-1 = 0 for the n-1 unknown caustic
// reciprocals (slotted by the caustic type vector) and the m-n deltas, by
// damped Newton from midpoint seeds with jittered restarts. Returns all
// distinct converged solutions that satisfy the gap constraints.
std::vector<SignatureSolution> solve_signature(const Ellipsoid<double>& e,
                                               const std::vector<int>& type_vector,
                                               const Signature& tau, unsigned seed = 1);

// Constructive route from the rank formulation: a null vector of the
// coefficient matrix gives s(t); the series product s*f yields q and alpha.
// Throws if the condition fails (no null vector) or the certificate does
// not verify.
Certificate<Rational> certificate_from_nullspace(const MergedSpectrum<Rational>& spec, int m);

}  // namespace ebil
