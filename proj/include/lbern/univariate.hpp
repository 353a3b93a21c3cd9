/**
 * @file univariate.hpp
 * @brief The univariate lambda-Bernstein operator
 *   B_{n,lambda}(f; x) = sum_i f(i/n) * btilde_{n,i}(lambda; x),
 * its closed-form raw moments of order 0..4, a direct-summation moment oracle,
 * central moments and grid sup-errors.
 */
#pragma once

#include "basis.hpp"
#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace lbern {

/// Node values f(i/n), i = 0..n.
template <typename F>
std::vector<double> node_samples(int n, const F& f) {
    std::vector<double> samples(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) samples[i] = f(static_cast<double>(i) / n);
    return samples;
}

/// B_{n,lambda} applied to fixed node values, evaluated through the
/// classical basis alone:
///   B_{n,lambda} f(x) = sum_i b_{n,i}(x) [f_i + lambda((1-x) g_i + x g_{i+1})],
///   g_i = (n-2i+1)/(n^2-1) (f_i - f_{i-1}) for 1 <= i <= n, g_0 = g_{n+1} = 0.
/// This is an independent algebraic route to the value computed by apply().
class SampledOperator {
  public:
    SampledOperator(const OperatorSpec& spec, std::vector<double> samples)
        : spec_{spec}, samples_{std::move(samples)} {
        const int n = spec.degree();
        if (samples_.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("SampledOperator: need n+1 node values");
        lower_.assign(samples_.size(), 0.0);
        upper_.assign(samples_.size(), 0.0);
        const double denom = static_cast<double>(n) * n - 1.0;
        // lower_[i] = g_i, upper_[i] = g_{i+1}
        for (int i = 1; i <= n; ++i) {
            const double g = (n - 2.0 * i + 1.0) / denom * (samples_[i] - samples_[i - 1]);
            lower_[i] = g;
            upper_[i - 1] = g;
        }
    }

    template <typename F>
    SampledOperator(const OperatorSpec& spec, const F& f)
        : SampledOperator(spec, node_samples(spec.degree(), f)) {}

    double operator()(double x) const {
        const auto d = detail::bernstein_dot3(spec_.degree(), x, samples_, lower_, upper_);
        return d.a + spec_.shape() * ((1.0 - x) * d.b + x * d.c);
    }

    [[nodiscard]] const OperatorSpec& spec() const noexcept { return spec_; }

  private:
    OperatorSpec spec_;
    std::vector<double> samples_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// B_{n,lambda}(f; x). f is called only at nodes i/n whose basis weight at x
/// is not flushed to zero, and always at the node itself when x is 0 or 1.
template <typename F>
double apply(const OperatorSpec& spec, const F& f, double x) {
    detail::require_unit_interval(x, "apply: x");
    detail::BasisScratch scratch;
    const int n = spec.degree();
    const auto w = detail::lambda_basis_into(n, spec.shape(), x, scratch);
    double total = 0.0;
    for (std::size_t i = w.first; i < w.last; ++i) {
        if (scratch.values[i] == 0.0) continue;
        total += f(static_cast<double>(i) / n) * scratch.values[i];
    }
    return total;
}

/// Which transcription of the order-3 and order-4 lambda-brackets to use.
/// kCorrected agrees with direct summation; kAsPrinted reproduces the
/// commonly printed form, whose t^3 and t^4 brackets do not.
enum class MomentForm { kCorrected, kAsPrinted };

/// Closed-form B_{n,lambda}(t^j; x) for j = 0..4.
inline double raw_moment(const OperatorSpec& spec, int j, double x,
                         MomentForm form = MomentForm::kCorrected) {
    const double n = spec.degree();
    const double l = spec.shape();
    const double xn1 = std::pow(x, n + 1.0);
    const double yn1 = std::pow(1.0 - x, n + 1.0);
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x3 * x;
    const double n2 = n * n;
    const double n3 = n2 * n;
    const double n4 = n3 * n;
    const double nm1 = n - 1.0;

    switch (j) {
    case 0:
        return 1.0;
    case 1:
        return x + (1.0 - 2.0 * x + xn1 - yn1) / (n * nm1) * l;
    case 2:
        return x2 + x * (1.0 - x) / n +
               ((2.0 * x - 4.0 * x2 + 2.0 * xn1) / (n * nm1) + (xn1 + yn1 - 1.0) / (n2 * nm1)) * l;
    case 3: {
        const double classical = x3 + 3.0 * x2 * (1.0 - x) / n + (2.0 * x3 - 3.0 * x2 + x) / n2;
        double bracket = (6.0 * xn1 - 6.0 * x3) / n2 + (3.0 * x2 - 3.0 * xn1) / (n * nm1) +
                         (9.0 * xn1 - 9.0 * x2) / (n2 * nm1);
        if (form == MomentForm::kCorrected) {
            bracket += (xn1 - 2.0 * x + 1.0 - yn1) / (n3 * nm1);
        } else {
            bracket += (4.0 * xn1 - 4.0 * x) / (n3 * nm1) +
                       (1.0 - xn1 + yn1) / (n3 * (n2 - 1.0));
        }
        return classical + bracket * l;
    }
    case 4: {
        const double classical = x4 + 6.0 * x3 * (1.0 - x) / n +
                                 (7.0 * x2 - 18.0 * x3 + 11.0 * x4) / n2 +
                                 (x - 7.0 * x2 + 12.0 * x3 - 6.0 * x4) / n3;
        const double lead = form == MomentForm::kCorrected
                                ? (4.0 * x3 - 8.0 * x4 + 4.0 * xn1) / n2
                                : (6.0 * x2 - 2.0 * x3 - 8.0 * x4 + 4.0 * xn1) / n2;
        const double bracket = lead + (17.0 * xn1 + 16.0 * x4 - 32.0 * x3 - x2) / n3 +
                               (x - xn1) / n4 + (7.0 * x2 - 7.0 * xn1) / (n2 * nm1) +
                               (x - 23.0 * x2 + 22.0 * xn1) / (n3 * nm1) +
                               (yn1 + x - 1.0) / (n4 * nm1);
        return classical + bracket * l;
    }
    default:
        throw unsupported_order_error("raw_moment: closed forms exist for orders 0..4 only");
    }
}

/// sum_i (i/n)^j * btilde_{n,i}(lambda; x) by direct summation, any j >= 0.
inline double raw_moment_oracle(const OperatorSpec& spec, int j, double x) {
    if (j < 0) throw unsupported_order_error("raw_moment_oracle: order must be >= 0");
    detail::require_unit_interval(x, "raw_moment_oracle: x");
    return apply(spec, [j](double t) { return std::pow(t, j); }, x);
}

struct CentralMoments {
    double beta = 0.0;  ///< B((t - x); x)
    double alpha = 0.0; ///< B((t - x)^2; x)
};

/// First and second central moments at x, from the closed-form raw moments.
inline CentralMoments central_moments(const OperatorSpec& spec, double x) {
    const double m1 = raw_moment(spec, 1, x);
    const double m2 = raw_moment(spec, 2, x);
    return {m1 - x, m2 - 2.0 * x * m1 + x * x};
}

/// Raw moments m0..m4 with derived central moments at one point.
struct MomentSet {
    double at = 0.0;
    double m[5] = {};
    double beta = 0.0;
    double alpha = 0.0;
};

inline MomentSet moment_set(const OperatorSpec& spec, double x) {
    MomentSet s;
    s.at = x;
    for (int j = 0; j <= 4; ++j) s.m[j] = raw_moment(spec, j, x);
    s.beta = s.m[1] - x;
    s.alpha = s.m[2] - 2.0 * x * s.m[1] + x * x;
    return s;
}

/// Uniform grid of `points` values from 0 to 1 inclusive.
inline std::vector<double> unit_grid(int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
    g.back() = 1.0;
    return g;
}

/// max over grid of |B_{n,lambda}(f; x) - f(x)|.
template <typename F>
double sup_error(const OperatorSpec& spec, const F& f, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("sup_error: empty grid");
    for (double x : grid) detail::require_unit_interval(x, "sup_error: grid point");
    const SampledOperator op(spec, f);
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::abs(op(x) - f(x)));
    return worst;
}

} // namespace lbern
