#pragma once

// The ellipsoid sum x_j^2/a_j = 1, its confocal family, caustic parameter
// sets, the merged spectrum feeding the periodicity tests, and Jacobi
// elliptic coordinates.

#include <ebil/rational.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace ebil {

template <class T>
struct Ellipsoid {
    std::vector<T> axes;  // 0 < a_1 < ... < a_n, strictly

    explicit Ellipsoid(std::vector<T> a) : axes(std::move(a)) {
        if (axes.size() < 2) throw std::invalid_argument("dimension must be at least 2");
        T prev(0);
        for (const T& v : axes) {
            if (!(prev < v)) throw std::invalid_argument("axes must be positive and strictly increasing");
            prev = v;
        }
    }
    int dim() const { return static_cast<int>(axes.size()); }
};

// Caustic parameters lambda_1 < ... < lambda_{n-1} together with the type
// vector: type[k] records which gap of the axis sequence lambda_{k+1}
// occupies (0-based value in {k-1, k} for the 1-based index k+1).
template <class T>
struct CausticSet {
    std::vector<T> params;
    std::vector<int> type_vector;
};

enum class SpectrumTag { Axis, Caustic };

// Axes and caustic parameters merged and sorted, plus the reciprocals in
// decreasing order. gamma carries a trailing zero entry (index 2n-1) so
// downstream index arithmetic can treat gamma_{2n} = 0 uniformly.
template <class T>
struct MergedSpectrum {
    int n = 0;
    std::vector<T> c;               // c_1 < ... < c_{2n-1}
    std::vector<T> gamma;           // gamma_i = 1/c_i decreasing, then 0
    std::vector<SpectrumTag> tags;  // tag of each c_i

    MergedSpectrum() = default;
    MergedSpectrum(const Ellipsoid<T>& e, const CausticSet<T>& cs) {
        n = e.dim();
        if (static_cast<int>(cs.params.size()) != n - 1)
            throw std::invalid_argument("caustic count must be dimension minus one");
        std::vector<std::pair<T, SpectrumTag>> merged;
        for (const T& a : e.axes) merged.emplace_back(a, SpectrumTag::Axis);
        for (const T& l : cs.params) merged.emplace_back(l, SpectrumTag::Caustic);
        std::sort(merged.begin(), merged.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (size_t i = 0; i + 1 < merged.size(); ++i)
            if (!(merged[i].first < merged[i + 1].first))
                throw std::invalid_argument("axes and caustic parameters must be pairwise distinct");
        for (auto& [v, t] : merged) {
            c.push_back(v);
            tags.push_back(t);
        }
        for (const T& v : c) gamma.push_back(T(1) / v);  // gamma_i = 1/c_i, decreasing
        gamma.push_back(T(0));
    }

    // Raw spectrum, for inputs given directly as gamma values.
    static MergedSpectrum from_gammas(std::vector<T> gs) {
        if (gs.size() % 2 == 0) throw std::invalid_argument("need an odd number of gamma values");
        MergedSpectrum s;
        s.n = static_cast<int>(gs.size() + 1) / 2;
        std::sort(gs.begin(), gs.end(), [](const T& x, const T& y) { return y < x; });
        for (size_t i = 0; i + 1 < gs.size(); ++i)
            if (!(gs[i + 1] < gs[i])) throw std::invalid_argument("gamma values must be distinct");
        if (!(T(0) < gs.back())) throw std::invalid_argument("gamma values must be positive");
        s.gamma = gs;
        s.gamma.push_back(T(0));
        for (const T& g : gs) s.c.push_back(T(1) / g);  // c_i = 1/gamma_i, increasing
        s.tags.assign(s.c.size(), SpectrumTag::Axis);
        return s;
    }
};

// Accepts iff every lambda_k lies in (a_{k-1}, a_k) u (a_k, a_{k+1}) with
// a_0 = 0; computes the type vector. Throws std::domain_error with message
// "singular caustic" when some lambda hits an axis and "no tangent
// trajectories exist" when it falls outside the allowed union.
template <class T>
CausticSet<T> existence_check(const Ellipsoid<T>& e, const std::vector<T>& lambdas) {
    int n = e.dim();
    if (static_cast<int>(lambdas.size()) != n - 1)
        throw std::invalid_argument("expected dimension minus one caustic parameters");
    for (size_t i = 0; i + 1 < lambdas.size(); ++i)
        if (!(lambdas[i] < lambdas[i + 1]))
            throw std::invalid_argument("caustic parameters must be strictly increasing");

    CausticSet<T> out;
    out.params = lambdas;
    for (int k = 1; k <= n - 1; ++k) {
        const T& l = lambdas[static_cast<size_t>(k - 1)];
        T lo = (k == 1) ? T(0) : e.axes[static_cast<size_t>(k - 2)];
        const T& mid = e.axes[static_cast<size_t>(k - 1)];
        const T& hi = e.axes[static_cast<size_t>(k)];
        for (const T& a : e.axes)
            if (l == a) throw std::domain_error("singular caustic");
        if (lo < l && l < mid)
            out.type_vector.push_back(k - 1);
        else if (mid < l && l < hi)
            out.type_vector.push_back(k);
        else
            throw std::domain_error("no tangent trajectories exist");
    }
    return out;
}

struct EllipticCoords {
    std::vector<double> mu;  // mu_0 <= a_1 <= mu_1 <= ... <= mu_{n-1} <= a_n
};

// The n roots of sum x_j^2/(a_j - mu) = 1, interlaced with the axes.
// Coordinates that are exactly zero contribute the boundary value a_j,
// slotted by ascending sort (lower slot unless a smaller genuine root
// forces it up).
EllipticCoords to_elliptic(const Ellipsoid<double>& e, const std::vector<double>& x);

// Inverse map onto the closed positive orthant. Throws on radicands more
// negative than the interlacing tolerance.
std::vector<double> from_elliptic(const Ellipsoid<double>& e, const EllipticCoords& mu);

}  // namespace ebil
