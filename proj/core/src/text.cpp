#include <ebil/rational.hpp>

#include <cstdlib>
#include <sstream>

namespace ebil {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty number literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        mpz_class num(text.substr(0, slash), 10);
        mpz_class den(text.substr(slash + 1), 10);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    auto dot = text.find('.');
    auto exp = text.find_first_of("eE");
    if (exp != std::string::npos) throw std::invalid_argument("exponent literal not exact: '" + text + "'");
    if (dot == std::string::npos) {
        Rational q{mpz_class(text, 10)};  // base fixed: leading zeros are not octal
        return q;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("malformed literal '" + text + "'");
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

Rational simplest_rational_in(const Rational& lo, const Rational& hi) {
    if (lo > hi) throw std::invalid_argument("empty interval");
    if (lo <= 0 && hi >= 0) return Rational(0);
    if (hi < 0) return -simplest_rational_in(-hi, -lo);
    // Stern-Brocot descent over positive rationals.
    mpz_class p_lo = lo.get_num(), q_lo = lo.get_den();
    mpz_class ceil_lo = (p_lo + q_lo - 1) / q_lo;
    if (Rational(ceil_lo) <= hi) return Rational(ceil_lo);
    mpz_class int_lo = p_lo / q_lo;  // floor; lo and hi share it here
    // simplest in [lo,hi] = n + 1/simplest_in([1/frac_hi, 1/frac_lo]).
    Rational frac_lo = lo - Rational(int_lo);
    Rational frac_hi = hi - Rational(int_lo);
    Rational inner = simplest_rational_in(Rational(1) / frac_hi, Rational(1) / frac_lo);
    return Rational(int_lo) + Rational(1) / inner;
}

std::optional<Rational> snap_to_rational(double x, long max_den, double reltol) {
    if (!std::isfinite(x)) return std::nullopt;
    // Continued fraction expansion of x with denominator bound.
    double v = x;
    long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // convergents p/q
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(v);
        if (fl > 9e17 || fl < -9e17) break;
        long long a = static_cast<long long>(fl);
        long long h = a * h0 + h1;
        long long k = a * k0 + k1;
        if (k > max_den || k < 0) break;
        h1 = h0; h0 = h;
        k1 = k0; k0 = k;
        double approx = static_cast<double>(h) / static_cast<double>(k);
        double scale = std::max(1.0, std::fabs(x));
        if (std::fabs(approx - x) <= reltol * scale) {
            Rational q(static_cast<long>(h), static_cast<long>(k));
            q.canonicalize();
            return q;
        }
        double rem = v - fl;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    return std::nullopt;
}

}  // namespace ebil
