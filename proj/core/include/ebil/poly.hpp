#pragma once

// Dense univariate polynomials over an exact field (Rational) or double.
// Coefficients are stored lowest degree first; the zero polynomial is the
// empty coefficient list.

#include <ebil/rational.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ebil {

template <class T>
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
    static Poly identity() { return Poly(std::vector<T>{T(0), T(1)}); }

    // prod_i (x - roots[i])
    static Poly from_roots(const std::vector<T>& roots) {
        Poly p = constant(T(1));
        for (const T& r : roots) p *= Poly(std::vector<T>{-r, T(1)});
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<T>& coeffs() const { return c_; }
    const T& operator[](int i) const { return c_[static_cast<size_t>(i)]; }
    T coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : T(0);
    }
    const T& leading() const {
        if (is_zero()) throw std::logic_error("zero polynomial has no leading coefficient");
        return c_.back();
    }

    T eval(const T& x) const {
        T acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<T> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<int>(i));
        return Poly(std::move(d));
    }

    Poly& operator+=(const Poly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), T(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), T(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) {
        if (is_zero() || o.is_zero()) {
            c_.clear();
            return *this;
        }
        std::vector<T> r(c_.size() + o.c_.size() - 1, T(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        c_ = std::move(r);
        trim();
        return *this;
    }
    Poly& operator*=(const T& s) {
        for (auto& v : c_) v *= s;
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend Poly operator*(Poly a, const T& s) { return a *= s; }
    friend Poly operator*(const T& s, Poly a) { return a *= s; }
    friend Poly operator-(Poly a) {
        for (auto& v : a.c_) v = -v;
        return a;
    }
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    // Euclidean division; requires an exact field scalar.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
        Poly rem = *this;
        if (rem.degree() < d.degree()) return {Poly(), rem};
        std::vector<T> q(static_cast<size_t>(rem.degree() - d.degree() + 1), T(0));
        while (!rem.is_zero() && rem.degree() >= d.degree()) {
            T f = rem.leading() / d.leading();
            int shift = rem.degree() - d.degree();
            q[static_cast<size_t>(shift)] = f;
            std::vector<T> sub(rem.c_);
            for (size_t i = 0; i < d.c_.size(); ++i)
                sub[i + static_cast<size_t>(shift)] -= f * d.c_[i];
            rem = Poly(std::move(sub));
        }
        return {Poly(std::move(q)), rem};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        Poly p = *this;
        T inv = T(1) / leading();
        for (auto& v : p.c_) v *= inv;
        return p;
    }

    // x^deg * p(1/x) for given target degree >= degree(); reverses the
    // coefficient list padded with zeros.
    Poly reversed(int deg) const {
        if (deg < degree()) throw std::invalid_argument("reversal degree too small");
        std::vector<T> r(static_cast<size_t>(deg) + 1, T(0));
        for (size_t i = 0; i < c_.size(); ++i) r[static_cast<size_t>(deg) - i] = c_[i];
        return Poly(std::move(r));
    }

    double eval_double(double x) const {
        double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
        return acc;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }
    std::vector<T> c_;
};

// Monic gcd over an exact field.
template <class T>
Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// e_l(values); 1 for l == 0, 0 for l > #values.
template <class T>
T elementary_symmetric(const std::vector<T>& values, int l) {
    if (l < 0) throw std::invalid_argument("negative degree");
    if (l == 0) return T(1);
    if (l > static_cast<int>(values.size())) return T(0);
    // DP over prefix products of prod (1 + x_i t).
    std::vector<T> e(static_cast<size_t>(l) + 1, T(0));
    e[0] = T(1);
    for (const T& x : values)
        for (int k = l; k >= 1; --k)
            e[static_cast<size_t>(k)] += x * e[static_cast<size_t>(k - 1)];
    return e[static_cast<size_t>(l)];
}

using RPoly = Poly<Rational>;
using DPoly = Poly<double>;

}  // namespace ebil
