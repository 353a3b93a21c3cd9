/**
 * @file basis.hpp
 * @brief Classical Bernstein bases b_{n,i}(x) and the lambda-modified Bezier
 * bases built from them.
 *
 * Evaluation never forms binomial coefficients. The basis is generated by the
 * ratio recurrence b_{n,i+1}/b_{n,i} = (n-i)/(i+1) * x/(1-x) starting from the
 * mode (set to 1) and walking outwards, then normalised by the sum. The mode is
 * the largest term, so nothing overflows; tails that fall below kTailCutoff
 * relative to the mode are stored as exact zeros and reported through the
 * active window so hot loops can skip them.
 */
#pragma once

#include "core.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace lbern {

/// Entries below this fraction of the modal entry are flushed to zero.
inline constexpr double kTailCutoff = 1e-30;

/// Half-open range [first, last) of basis indices that may be nonzero.
struct BasisWindow {
    std::size_t first = 0;
    std::size_t last = 0;
};

namespace detail {

/// Writes b_{n,i}(x) into out[i] for i inside the returned window
/// (out.size() >= n+1). Entries outside the window are zero by definition and
/// are left untouched.
inline BasisWindow bernstein_into(int n, double x, std::span<double> out) {
    const auto size = static_cast<std::size_t>(n) + 1;
    if (x <= 0.0) {
        out[0] = 1.0;
        return {0, 1};
    }
    if (x >= 1.0) {
        out[size - 1] = 1.0;
        return {size - 1, size};
    }
    const double ratio = x / (1.0 - x);
    const double inv_ratio = (1.0 - x) / x;
    auto mode = static_cast<int>(std::floor((n + 1) * x));
    mode = std::clamp(mode, 0, n);

    out[mode] = 1.0;
    double sum = 1.0;
    int hi = mode;
    for (int i = mode; i < n; ++i) {
        const double next = out[i] * (static_cast<double>(n - i) / (i + 1)) * ratio;
        if (next < kTailCutoff) break;
        out[i + 1] = next;
        sum += next;
        hi = i + 1;
    }
    int lo = mode;
    for (int i = mode; i > 0; --i) {
        const double prev = out[i] * (static_cast<double>(i) / (n - i + 1)) * inv_ratio;
        if (prev < kTailCutoff) break;
        out[i - 1] = prev;
        sum += prev;
        lo = i - 1;
    }
    const double inv_sum = 1.0 / sum;
    for (int i = lo; i <= hi; ++i) out[i] *= inv_sum;
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi) + 1};
}

/// Three sums sum_i b_{n,i}(x) c_i for coefficient vectors a, b, c (each of
/// size >= n+1), accumulated in one outward sweep from the mode without
/// storing the basis.
struct BasisDot3 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

inline BasisDot3 bernstein_dot3(int n, double x, std::span<const double> a,
                                std::span<const double> b, std::span<const double> c) {
    if (x <= 0.0) return {a[0], b[0], c[0]};
    if (x >= 1.0) return {a[n], b[n], c[n]};
    const double ratio = x / (1.0 - x);
    const double inv_ratio = (1.0 - x) / x;
    const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * x)), 0, n);
    double sum = 1.0;
    BasisDot3 acc{a[mode], b[mode], c[mode]};
    double r = 1.0;
    for (int i = mode; i < n; ++i) {
        r *= (static_cast<double>(n - i) / (i + 1)) * ratio;
        if (r < kTailCutoff) break;
        sum += r;
        acc.a += r * a[i + 1];
        acc.b += r * b[i + 1];
        acc.c += r * c[i + 1];
    }
    r = 1.0;
    for (int i = mode; i > 0; --i) {
        r *= (static_cast<double>(i) / (n - i + 1)) * inv_ratio;
        if (r < kTailCutoff) break;
        sum += r;
        acc.a += r * a[i - 1];
        acc.b += r * b[i - 1];
        acc.c += r * c[i - 1];
    }
    return {acc.a / sum, acc.b / sum, acc.c / sum};
}

/// Reusable scratch for lambda-basis evaluation inside grid sweeps.
struct BasisScratch {
    std::vector<double> classical;
    std::vector<double> raised;
    std::vector<double> values;
};

/// Writes the lambda-basis at x into scratch.values for indices inside the
/// returned window; entries outside it are zero and are not written. The
/// degree-(n+1) basis comes from degree raising,
/// b_{n+1,i} = x b_{n,i-1} + (1-x) b_{n,i}.
inline BasisWindow lambda_basis_into(int n, double lambda, double x, BasisScratch& s) {
    const auto size = static_cast<std::size_t>(n) + 1;
    if (s.classical.size() < size) s.classical.resize(size);
    if (s.raised.size() < size + 1) s.raised.resize(size + 1);
    if (s.values.size() < size) s.values.resize(size);
    const BasisWindow w = bernstein_into(n, x, s.classical);
    auto classical = [&](std::size_t i) {
        return (i >= w.first && i < w.last) ? s.classical[i] : 0.0;
    };

    if (x <= 0.0 || x >= 1.0 || lambda == 0.0) {
        for (std::size_t i = w.first; i < w.last; ++i) s.values[i] = s.classical[i];
        return w;
    }

    // b_{n+1,i} can be nonzero for i in [first, last].
    const std::size_t rfirst = w.first;
    const std::size_t rlast = w.last + 1;
    for (std::size_t i = rfirst; i < rlast; ++i)
        s.raised[i] = x * (i > 0 ? classical(i - 1) : 0.0) + (1.0 - x) * classical(i);
    auto raised = [&](std::size_t i) { return (i >= rfirst && i < rlast) ? s.raised[i] : 0.0; };

    const double nd = n;
    const double denom = nd * nd - 1.0;
    const std::size_t vfirst = w.first > 0 ? w.first - 1 : 0;
    const std::size_t vlast = std::min(size, w.last + 1);
    for (std::size_t i = vfirst; i < vlast; ++i) {
        double v = classical(i);
        if (i == 0) {
            v -= lambda / (nd + 1.0) * raised(1);
        } else if (i == size - 1) {
            v -= lambda / (nd + 1.0) * raised(size - 1);
        } else {
            const double k = static_cast<double>(i);
            v += lambda * ((nd - 2.0 * k + 1.0) / denom * raised(i) -
                           (nd - 2.0 * k - 1.0) / denom * raised(i + 1));
        }
        s.values[i] = v;
    }
    return {vfirst, vlast};
}

} // namespace detail

/// Classical Bernstein basis b_{n,i}(x), i = 0..n. Accepts n >= 1.
inline std::vector<double> bernstein_basis(int n, double x) {
    if (n < 1) throw std::domain_error("bernstein_basis: degree must be >= 1");
    detail::require_unit_interval(x, "bernstein_basis: x");
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    detail::bernstein_into(n, x, out);
    return out;
}

/// Values of the lambda-modified Bezier basis at one point.
struct BasisVector {
    std::vector<double> values;
    double x = 0.0;
    double lambda = 0.0;
};

/// The n+1 lambda-basis functions at x. End functions subtract
/// lambda/(n+1) * b_{n+1,1} (resp. b_{n+1,n}); interior ones add
/// lambda * ((n-2i+1) b_{n+1,i} - (n-2i-1) b_{n+1,i+1}) / (n^2-1).
inline BasisVector lambda_basis(Degree n, ShapeParam lambda, double x) {
    detail::require_unit_interval(x, "lambda_basis: x");
    detail::BasisScratch scratch;
    const auto w = detail::lambda_basis_into(n.value(), lambda.value(), x, scratch);
    std::vector<double> values(static_cast<std::size_t>(n.value()) + 1, 0.0);
    std::copy(scratch.values.begin() + w.first, scratch.values.begin() + w.last,
              values.begin() + w.first);
    return {std::move(values), x, lambda.value()};
}

inline BasisVector lambda_basis(int n, double lambda, double x) {
    return lambda_basis(Degree{n}, ShapeParam{lambda}, x);
}

} // namespace lbern
