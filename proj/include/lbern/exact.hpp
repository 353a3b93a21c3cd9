/**
 * @file exact.hpp
 * @brief Exact rational evaluation of the Bernstein and lambda-Bezier bases
 * and of raw moments by direct summation. Intended as a fixture generator and
 * test oracle for degrees up to kMaxExactDegree.
 *
 * Every double is a dyadic rational, so converting inputs is lossless and the
 * only rounding happens when a result is converted back with to_double().
 */
#pragma once

#include "core.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace lbern::exact {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline constexpr int kMaxExactDegree = 64;

inline Rational from_double(double v) { return Rational(v); }
inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Integer c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

inline Rational power(const Rational& base, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

inline Rational bernstein(int n, int i, const Rational& x) {
    if (i < 0 || i > n) return 0;
    return Rational(binomial(n, i)) * power(x, i) * power(Rational(1) - x, n - i);
}

inline void require_exact_degree(int n) {
    if (n < 1 || n > kMaxExactDegree)
        throw std::domain_error("exact oracle supports 1 <= n <= 64");
}

/// All b_{n,i}(x) over the common denominator den(x)^n: with x = p/q,
/// b_{n,i} = C(n,i) p^i (q-p)^(n-i) / q^n.
inline std::vector<Rational> bernstein_basis(int n, const Rational& x) {
    require_exact_degree(n);
    const Integer p = boost::multiprecision::numerator(x);
    const Integer q = boost::multiprecision::denominator(x);
    const Integer r = q - p;
    std::vector<Integer> rpow(static_cast<std::size_t>(n) + 1);
    rpow[0] = 1;
    for (int k = 1; k <= n; ++k) rpow[k] = rpow[k - 1] * r;
    Integer den = 1;
    for (int k = 0; k < n; ++k) den *= q;
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    Integer ppow = 1;
    Integer c = 1;
    for (int i = 0; i <= n; ++i) {
        out.emplace_back(c * ppow * rpow[n - i], den);
        ppow *= p;
        c = c * (n - i) / (i + 1);
    }
    return out;
}

inline std::vector<Rational> lambda_basis(int n, const Rational& lambda, const Rational& x) {
    require_exact_degree(n);
    if (n < 2) throw std::domain_error("lambda basis needs n >= 2");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    const Rational denom = Rational(n) * n - 1;
    for (int i = 0; i <= n; ++i) {
        Rational v = bernstein(n, i, x);
        if (i == 0) {
            v -= lambda / (n + 1) * bernstein(n + 1, 1, x);
        } else if (i == n) {
            v -= lambda / (n + 1) * bernstein(n + 1, n, x);
        } else {
            v += lambda * (Rational(n - 2 * i + 1) / denom * bernstein(n + 1, i, x) -
                           Rational(n - 2 * i - 1) / denom * bernstein(n + 1, i + 1, x));
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// sum_i (i/n)^j * lambda-basis_i(x), exactly.
inline Rational raw_moment(int n, const Rational& lambda, int j, const Rational& x) {
    const auto basis = lambda_basis(n, lambda, x);
    Rational total = 0;
    for (int i = 0; i <= n; ++i) total += power(Rational(i, n), j) * basis[i];
    return total;
}

} // namespace lbern::exact
