/**
 * @file bivariate.hpp
 * @brief Tensor-product lambda-Bernstein operators on I = [0,1]^2,
 *   Bbar_{n,m}(f; x, y) = sum_{k1} sum_{k2} f(k1/n, k2/m) btilde_{n,k1}(x) btilde_{m,k2}(y),
 * with one shared shape parameter, their low-order moments, bivariate moduli
 * of continuity, the complete-modulus error bound, Volkov-type convergence
 * tables and the weighted rho-norm error.
 */
#pragma once

#include "basis.hpp"
#include "bounds.hpp"
#include "core.hpp"
#include "function.hpp"
#include "smoothness.hpp"
#include "univariate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace lbern {

struct BivariateSpec {
    Degree n;
    Degree m;
    ShapeParam lambda;

    BivariateSpec(int n_, int m_, double lambda_) : n{n_}, m{m_}, lambda{lambda_} {}

    [[nodiscard]] OperatorSpec x_operator() const { return {n, lambda}; }
    [[nodiscard]] OperatorSpec y_operator() const { return {m, lambda}; }
};

using RealFn2 = std::function<double(double, double)>;

struct BivariateFunctionHandle {
    std::string name;
    RealFn2 value;
    double operator()(double s, double t) const { return value(s, t); }
};

/// const1, e10 (s), e01 (t), e20_plus_e02 (s^2 + t^2), prod (s t),
/// exp_sum (e^{s+t}), ripple (sin(pi s) sin(pi t)).
inline const std::vector<BivariateFunctionHandle>& bivariate_catalog() {
    using std::numbers::pi;
    static const std::vector<BivariateFunctionHandle> catalog = {
        {"const1", [](double, double) { return 1.0; }},
        {"e10", [](double s, double) { return s; }},
        {"e01", [](double, double t) { return t; }},
        {"e20_plus_e02", [](double s, double t) { return s * s + t * t; }},
        {"prod", [](double s, double t) { return s * t; }},
        {"exp_sum", [](double s, double t) { return std::exp(s + t); }},
        {"ripple", [](double s, double t) { return std::sin(pi * s) * std::sin(pi * t); }},
    };
    return catalog;
}

inline const BivariateFunctionHandle& find_bivariate_function(std::string_view name) {
    return find_in_catalog(bivariate_catalog(), name, "bivariate function");
}

/// Bbar_{n,m}(f; x, y). Summation order is fixed: k1 outer, k2 inner.
template <typename F>
double apply2(const BivariateSpec& spec, const F& f, double x, double y) {
    detail::require_unit_interval(x, "apply2: x");
    detail::require_unit_interval(y, "apply2: y");
    const int n = spec.n.value();
    const int m = spec.m.value();
    detail::BasisScratch sx;
    detail::BasisScratch sy;
    const auto wx = detail::lambda_basis_into(n, spec.lambda.value(), x, sx);
    const auto wy = detail::lambda_basis_into(m, spec.lambda.value(), y, sy);
    double total = 0.0;
    for (std::size_t k1 = wx.first; k1 < wx.last; ++k1) {
        const double bx = sx.values[k1];
        if (bx == 0.0) continue;
        const double s = static_cast<double>(k1) / n;
        double inner = 0.0;
        for (std::size_t k2 = wy.first; k2 < wy.last; ++k2) {
            const double by = sy.values[k2];
            if (by == 0.0) continue;
            inner += f(s, static_cast<double>(k2) / m) * by;
        }
        total += bx * inner;
    }
    return total;
}

/// Bbar_{n,m} on fixed node values, applied one variable at a time through
/// SampledOperator: an inner degree-m operator in y along each node line
/// s = k1/n, then a degree-n operator in x on the results.
class SampledOperator2 {
  public:
    template <typename F>
    SampledOperator2(const BivariateSpec& spec, const F& f) : spec_{spec} {
        const int n = spec.n.value();
        const int m = spec.m.value();
        lines_.reserve(static_cast<std::size_t>(n) + 1);
        for (int k1 = 0; k1 <= n; ++k1) {
            const double s = static_cast<double>(k1) / n;
            lines_.emplace_back(spec.y_operator(),
                                node_samples(m, [&f, s](double t) { return f(s, t); }));
        }
    }

    double operator()(double x, double y) const {
        detail::require_unit_interval(x, "SampledOperator2: x");
        detail::require_unit_interval(y, "SampledOperator2: y");
        std::vector<double> column(lines_.size());
        for (std::size_t k1 = 0; k1 < lines_.size(); ++k1) column[k1] = lines_[k1](y);
        return SampledOperator(spec_.x_operator(), std::move(column))(x);
    }

  private:
    BivariateSpec spec_;
    std::vector<SampledOperator> lines_;
};

enum class Monomial2 { one, s, t, s2, t2 };

/// Closed forms of Bbar_{n,m} applied to 1, s, t, s^2, t^2.
inline double raw_moment2(const BivariateSpec& spec, Monomial2 which, double x, double y) {
    const double l = spec.lambda.value();
    switch (which) {
    case Monomial2::one:
        return 1.0;
    case Monomial2::s: {
        const double n = spec.n.value();
        return x + (1.0 - 2.0 * x + std::pow(x, n + 1) - std::pow(1.0 - x, n + 1)) /
                       (n * (n - 1.0)) * l;
    }
    case Monomial2::t: {
        const double m = spec.m.value();
        return y + (1.0 - 2.0 * y + std::pow(y, m + 1) - std::pow(1.0 - y, m + 1)) /
                       (m * (m - 1.0)) * l;
    }
    case Monomial2::s2: {
        const double n = spec.n.value();
        const double p = std::pow(x, n + 1);
        const double q = std::pow(1.0 - x, n + 1);
        return x * x + x * (1.0 - x) / n +
               ((2.0 * x - 4.0 * x * x + 2.0 * p) / (n * (n - 1.0)) +
                (p + q - 1.0) / (n * n * (n - 1.0))) *
                   l;
    }
    case Monomial2::t2: {
        const double m = spec.m.value();
        const double p = std::pow(y, m + 1);
        const double q = std::pow(1.0 - y, m + 1);
        return y * y + y * (1.0 - y) / m +
               ((2.0 * y - 4.0 * y * y + 2.0 * p) / (m * (m - 1.0)) +
                (p + q - 1.0) / (m * m * (m - 1.0))) *
                   l;
    }
    }
    throw unsupported_order_error("raw_moment2: unsupported monomial");
}

/// The same moments by direct double summation.
inline double raw_moment2_oracle(const BivariateSpec& spec, Monomial2 which, double x,
                                 double y) {
    auto monomial = [which](double s, double t) {
        switch (which) {
        case Monomial2::one: return 1.0;
        case Monomial2::s: return s;
        case Monomial2::t: return t;
        case Monomial2::s2: return s * s;
        case Monomial2::t2: return t * t;
        }
        return 0.0;
    };
    return apply2(spec, monomial, x, y);
}

/// Samples of f on the (N+1) x (N+1) grid (i/N, j/N), N = resolution. Moduli
/// are suprema over pairs of grid points, so they never exceed the true ones.
class BivariateModulus {
  public:
    template <typename F>
    BivariateModulus(const F& f, int resolution = default_resolution())
        : size_{static_cast<std::size_t>(resolution) + 1}, resolution_{resolution} {
        detail::require_resolution(resolution);
        samples_.resize(size_ * size_);
        for (std::size_t i = 0; i < size_; ++i) {
            const double s = static_cast<double>(i) / resolution;
            for (std::size_t j = 0; j < size_; ++j)
                samples_[i * size_ + j] = f(s, static_cast<double>(j) / resolution);
        }
    }

    [[nodiscard]] int resolution() const noexcept { return resolution_; }

    /// sup |f(s,t) - f(x,y)| over grid pairs with |s-x| <= dx and |t-y| <= dy.
    /// Equals the largest oscillation over dx-by-dy grid windows.
    [[nodiscard]] ModulusEstimate complete(double delta_x, double delta_y) const {
        require_nonnegative(delta_x);
        require_nonnegative(delta_y);
        return {oscillation(cells(delta_x), cells(delta_y)), std::max(delta_x, delta_y),
                resolution_, ModulusKind::bivariate_complete};
    }

    /// sup |f(x1, y) - f(x2, y)| over |x1 - x2| <= delta.
    [[nodiscard]] ModulusEstimate partial_x(double delta) const {
        require_nonnegative(delta);
        return {oscillation(cells(delta), 0), delta, resolution_,
                ModulusKind::bivariate_partial_x};
    }

    /// sup |f(x, y1) - f(x, y2)| over |y1 - y2| <= delta.
    [[nodiscard]] ModulusEstimate partial_y(double delta) const {
        require_nonnegative(delta);
        return {oscillation(0, cells(delta)), delta, resolution_,
                ModulusKind::bivariate_partial_y};
    }

    /// sup |f(s,t) - f(x,y)| over grid pairs at Euclidean distance <= delta,
    /// scanned on every `stride`-th grid line.
    [[nodiscard]] ModulusEstimate euclidean(double delta, std::size_t stride = 8) const {
        require_nonnegative(delta);
        stride = std::max<std::size_t>(stride, 1);
        const double step = static_cast<double>(stride) / resolution_;
        const auto reach = static_cast<long>(std::floor(delta / step + 1e-9));
        const long points = static_cast<long>((size_ - 1) / stride) + 1;
        double best = 0.0;
        for (long a = 0; a < points; ++a)
            for (long b = 0; b < points; ++b) {
                const double base = at(a * stride, b * stride);
                for (long u = 0; u <= reach; ++u)
                    for (long v = -reach; v <= reach; ++v) {
                        if (u == 0 && v <= 0) continue;
                        if ((u * u + v * v) * step * step > delta * delta * (1.0 + 1e-12))
                            continue;
                        const long a2 = a + u;
                        const long b2 = b + v;
                        if (a2 >= points || b2 < 0 || b2 >= points) continue;
                        best = std::max(best, std::abs(at(a2 * stride, b2 * stride) - base));
                    }
            }
        return {best, delta, resolution_, ModulusKind::bivariate_complete};
    }

  private:
    static void require_nonnegative(double d) {
        if (!(d >= 0.0) || !std::isfinite(d))
            throw std::domain_error("bivariate modulus: delta must be finite and >= 0");
    }

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return samples_[i * size_ + j]; }

    [[nodiscard]] std::size_t cells(double delta) const {
        const double c = std::floor(delta * resolution_ + 1e-9);
        return static_cast<std::size_t>(std::min<double>(c, static_cast<double>(size_ - 1)));
    }

    /// Largest max - min over all windows of (wi+1) x (wj+1) samples,
    /// memoized by window shape.
    [[nodiscard]] double oscillation(std::size_t wi, std::size_t wj) const {
        const std::lock_guard lock(cache_mutex_);
        const auto key = std::make_pair(wi, wj);
        if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
        const double value = window_oscillation(wi, wj);
        cache_.emplace(key, value);
        return value;
    }

    [[nodiscard]] double window_oscillation(std::size_t wi, std::size_t wj) const {
        const std::size_t pj = size_ - wj;
        // Pass 1: extrema along j within each row i.
        std::vector<double> rmin(size_ * pj);
        std::vector<double> rmax(size_ * pj);
        std::vector<std::size_t> queue(size_);
        for (std::size_t i = 0; i < size_; ++i) {
            const double* row = samples_.data() + i * size_;
            sliding<std::less_equal<>>(row, 1, size_, wj + 1, rmin.data() + i * pj, 1, queue);
            sliding<std::greater_equal<>>(row, 1, size_, wj + 1, rmax.data() + i * pj, 1, queue);
        }
        // Pass 2: extrema along i for each window column j.
        const std::size_t pi = size_ - wi;
        std::vector<double> lo(pi);
        std::vector<double> hi(pi);
        double best = 0.0;
        for (std::size_t j = 0; j < pj; ++j) {
            sliding<std::less_equal<>>(rmin.data() + j, pj, size_, wi + 1, lo.data(), 1, queue);
            sliding<std::greater_equal<>>(rmax.data() + j, pj, size_, wi + 1, hi.data(), 1, queue);
            for (std::size_t i = 0; i < pi; ++i) best = std::max(best, hi[i] - lo[i]);
        }
        return best;
    }

    /// Sliding-window extremum of v[0], v[stride], ... (count values) with a
    /// monotone index queue; Keep(a, b) is true when b may be dropped for a.
    template <typename Keep>
    static void sliding(const double* v, std::size_t stride, std::size_t count, std::size_t width,
                        double* out, std::size_t out_stride, std::vector<std::size_t>& queue) {
        const Keep keep;
        std::size_t head = 0;
        std::size_t tail = 0;
        for (std::size_t k = 0; k < count; ++k) {
            const double x = v[k * stride];
            while (tail > head && keep(x, v[queue[tail - 1] * stride])) --tail;
            queue[tail++] = k;
            if (k + 1 >= width) {
                const std::size_t start = k + 1 - width;
                while (queue[head] < start) ++head;
                out[start * out_stride] = v[queue[head] * stride];
            }
        }
    }

    std::size_t size_;
    int resolution_;
    std::vector<double> samples_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<std::size_t, std::size_t>, double> cache_;
};

/// Two-parameter complete modulus omega(f; delta_x, delta_y).
template <typename F>
double complete_modulus(const F& f, double delta_x, double delta_y,
                        int resolution = default_resolution()) {
    detail::require_positive(delta_x, "complete_modulus: delta_x");
    detail::require_positive(delta_y, "complete_modulus: delta_y");
    return BivariateModulus(f, resolution).complete(delta_x, delta_y).value;
}

/// Single-delta complete modulus with the Euclidean constraint.
template <typename F>
double complete_modulus_euclidean(const F& f, double delta, int resolution = default_resolution()) {
    detail::require_positive(delta, "complete_modulus_euclidean: delta");
    return BivariateModulus(f, resolution).euclidean(delta).value;
}

struct PartialModuli {
    double w1 = 0.0; ///< varying the first coordinate
    double w2 = 0.0; ///< varying the second coordinate
};

template <typename F>
PartialModuli partial_moduli(const F& f, double delta, int resolution = default_resolution()) {
    detail::require_positive(delta, "partial_moduli: delta");
    const BivariateModulus mod(f, resolution);
    return {mod.partial_x(delta).value, mod.partial_y(delta).value};
}

struct BivariateBoundReport {
    double x = 0.0;
    double y = 0.0;
    double error = 0.0;
    double bound = 0.0;
    bool holds = true;
};

/// |Bbar f - f| <= 4 omega(f; sqrt(delta_n(x)), sqrt(delta_m(y))), with the
/// univariate delta of degree n at x and of degree m at y.
template <typename F>
BivariateBoundReport bound_bivariate(const BivariateSpec& spec, const F& f,
                                     const BivariateModulus& modulus, double x, double y) {
    const double dx = std::sqrt(delta_n(spec.x_operator(), x).value);
    const double dy = std::sqrt(delta_n(spec.y_operator(), y).value);
    const double bound = 4.0 * modulus.complete(dx, dy).value;
    const double error = std::abs(apply2(spec, f, x, y) - f(x, y));
    return {x, y, error, bound, bound + kBoundSlack >= error};
}

template <typename F>
BivariateBoundReport bound_bivariate(const BivariateSpec& spec, const F& f, double x, double y,
                                     int resolution = default_resolution()) {
    return bound_bivariate(spec, f, BivariateModulus(f, resolution), x, y);
}

/// max over the points x points grid of |Bbar f - f|, with bases cached per
/// grid line.
template <typename F>
double sup_error2(const BivariateSpec& spec, const F& f, int points) {
    const auto grid = unit_grid(points);
    double worst = 0.0;
    for (double x : grid)
        for (double y : grid) worst = std::max(worst, std::abs(apply2(spec, f, x, y) - f(x, y)));
    return worst;
}

inline constexpr double rho_weight(double x, double y) { return x * x + y * y + 1.0; }

struct RhoNorm {
    double value = 0.0;
};

/// sup over the grid of |Bbar f - f| / rho(x, y), rho = x^2 + y^2 + 1.
template <typename F>
RhoNorm rho_norm_error(const BivariateSpec& spec, const F& f, int points) {
    const auto grid = unit_grid(points);
    double worst = 0.0;
    for (double x : grid)
        for (double y : grid)
            worst = std::max(worst, std::abs(apply2(spec, f, x, y) - f(x, y)) / rho_weight(x, y));
    return {worst};
}

/// Sup-errors of the four Korovkin-Volkov test functions 1, s, t, s^2 + t^2
/// along a ladder of n = m.
struct VolkovTable {
    std::vector<int> ladder;
    double lambda = 0.0;
    std::vector<double> columns[4]; ///< e00, e10, e01, e20+e02
    bool decreasing[4] = {};        ///< strictly decreasing, or zero (<= 1e-14) throughout
    bool within_rate[4] = {};       ///< last entry <= 5 / last degree
    bool pass = false;
};

inline const char* volkov_column_name(int c) {
    static constexpr const char* names[] = {"e00", "e10", "e01", "e20_plus_e02"};
    return names[c];
}

inline VolkovTable volkov_check(double lambda, std::vector<int> ladder, int points) {
    if (ladder.empty()) throw std::invalid_argument("volkov_check: empty ladder");
    const RealFn2 tests[4] = {
        [](double, double) { return 1.0; },
        [](double s, double) { return s; },
        [](double, double t) { return t; },
        [](double s, double t) { return s * s + t * t; },
    };
    VolkovTable table;
    table.ladder = std::move(ladder);
    table.lambda = lambda;
    for (int c = 0; c < 4; ++c) {
        for (int n : table.ladder)
            table.columns[c].push_back(sup_error2(BivariateSpec{n, n, lambda}, tests[c], points));
        const auto& col = table.columns[c];
        const bool all_zero =
            std::all_of(col.begin(), col.end(), [](double v) { return v <= 1e-14; });
        bool strict = true;
        for (std::size_t i = 1; i < col.size(); ++i)
            if (!(col[i] < col[i - 1])) strict = false;
        table.decreasing[c] = all_zero || strict;
        table.within_rate[c] = col.back() <= 5.0 / table.ladder.back();
    }
    table.pass = std::all_of(std::begin(table.decreasing), std::end(table.decreasing),
                             [](bool b) { return b; }) &&
                 std::all_of(std::begin(table.within_rate), std::end(table.within_rate),
                             [](bool b) { return b; });
    return table;
}

} // namespace lbern
