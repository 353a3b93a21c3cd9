/**
 * @file smoothness.hpp
 * @brief Grid estimators for moduli of continuity and smoothness on [0,1]:
 * the ordinary modulus, the step-weighted first-order modulus, the
 * Ditzian-Totik second-order and midpoint moduli with phi(x) = sqrt(x(1-x)),
 * and a membership check for the two-parameter Lipschitz class.
 *
 * Every estimate is a supremum over a finite set of admissible (x, h) pairs
 * and therefore never exceeds the true modulus. The coarse grid is
 * x_i = i/r (i = 0..r) by h_j = delta*j/r (j = 1..r); a second pass then
 * scans +-1 coarse cell around the coarse maximiser at 32x density.
 */
#pragma once

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

namespace lbern {

inline constexpr int kDefaultResolution = 512;
inline constexpr int kMinResolution = 64;
inline constexpr int kRefineFactor = 32;

/// Modulus resolution from LB_RESOLUTION when set to an integer >= 64,
/// otherwise 512.
inline int default_resolution() {
    if (const char* env = std::getenv("LB_RESOLUTION")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= kMinResolution && v <= 1 << 20)
            return static_cast<int>(v);
    }
    return kDefaultResolution;
}

enum class ModulusKind {
    first,
    dt_first_stepweight,
    dt_first_midpoint,
    dt_second,
    bivariate_complete,
    bivariate_partial_x,
    bivariate_partial_y,
};

inline const char* to_string(ModulusKind k) {
    switch (k) {
    case ModulusKind::first: return "first";
    case ModulusKind::dt_first_stepweight: return "dt_first_stepweight";
    case ModulusKind::dt_first_midpoint: return "dt_first_midpoint";
    case ModulusKind::dt_second: return "dt_second";
    case ModulusKind::bivariate_complete: return "bivariate_complete";
    case ModulusKind::bivariate_partial_x: return "bivariate_partial_x";
    case ModulusKind::bivariate_partial_y: return "bivariate_partial_y";
    }
    return "unknown";
}

struct ModulusEstimate {
    double value = 0.0;
    double delta = 0.0;
    int resolution = 0;
    ModulusKind kind = ModulusKind::first;
};

/// phi(x) = sqrt(x(1-x)).
inline double dt_phi(double x) { return std::sqrt(std::max(0.0, x * (1.0 - x))); }

namespace detail {

inline void require_resolution(int resolution) {
    if (resolution < kMinResolution)
        throw std::domain_error("modulus resolution must be >= 64, got " +
                                std::to_string(resolution));
}

/// Supremum over the coarse grid and one refinement pass. row(x) returns a
/// callable h -> value for that x (so per-x work such as f(x) or phi(x) is
/// done once); the callable returns NaN for inadmissible pairs. With
/// two_sided the h grid also covers [-delta, 0).
template <typename Row>
ModulusEstimate grid_sup(const Row& row, double delta, int resolution, ModulusKind kind,
                         bool two_sided) {
    require_positive(delta, "modulus delta");
    require_resolution(resolution);
    const int r = resolution;
    double best = 0.0;
    double best_x = -1.0;
    double best_h = 0.0;
    for (int i = 0; i <= r; ++i) {
        const double x = static_cast<double>(i) / r;
        const auto diff = row(x);
        for (int j = 1; j <= r; ++j) {
            const double h = delta * j / r;
            const double v = diff(h);
            if (v > best) { // NaN compares false
                best = v;
                best_x = x;
                best_h = h;
            }
            if (two_sided) {
                const double w = diff(-h);
                if (w > best) {
                    best = w;
                    best_x = x;
                    best_h = -h;
                }
            }
        }
    }
    if (best_x >= 0.0) {
        const double cx = best_x;
        const double ch = best_h;
        const double sign = ch < 0.0 ? -1.0 : 1.0;
        const double xstep = 1.0 / (static_cast<double>(r) * kRefineFactor);
        const double hstep = delta / (static_cast<double>(r) * kRefineFactor);
        for (int a = -kRefineFactor; a <= kRefineFactor; ++a) {
            const double x = cx + a * xstep;
            if (x < 0.0 || x > 1.0) continue;
            const auto diff = row(x);
            for (int b = -kRefineFactor; b <= kRefineFactor; ++b) {
                const double mag = std::abs(ch) + b * hstep;
                if (mag <= 0.0 || mag > delta) continue;
                const double v = diff(sign * mag);
                if (v > best) best = v;
            }
        }
    }
    return {best, delta, resolution, kind};
}

inline constexpr double kInadmissible = std::numeric_limits<double>::quiet_NaN();

inline bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace detail

/// omega(f, delta) = sup |f(x+h) - f(x)| over 0 < |h| <= delta, x, x+h in [0,1].
template <typename F>
ModulusEstimate modulus_first(const F& f, double delta, int resolution = default_resolution()) {
    auto row = [&f](double x) {
        return [&f, x, fx = f(x)](double h) {
            const double y = x + h;
            return detail::in_unit(y) ? std::abs(f(y) - fx) : detail::kInadmissible;
        };
    };
    return detail::grid_sup(row, delta, resolution, ModulusKind::first, true);
}

/// omega_xi(f, delta) = sup |f(x + h xi(x)) - f(x)| over 0 < |h| <= delta with
/// x, x + h xi(x) in [0,1]. The step weight must be nonnegative.
template <typename F, typename W>
ModulusEstimate modulus_dt_first(const F& f, double delta, const W& stepweight,
                                 int resolution = default_resolution()) {
    detail::require_resolution(resolution);
    for (int i = 0; i <= resolution; ++i) {
        const double x = static_cast<double>(i) / resolution;
        if (!(stepweight(x) >= 0.0))
            throw std::domain_error("modulus_dt_first: step weight negative at x = " +
                                    std::to_string(x));
    }
    auto row = [&f, &stepweight](double x) {
        return [&f, x, fx = f(x), w = stepweight(x)](double h) {
            const double y = x + h * w;
            return detail::in_unit(y) ? std::abs(f(y) - fx) : detail::kInadmissible;
        };
    };
    return detail::grid_sup(row, delta, resolution, ModulusKind::dt_first_stepweight, true);
}

/// omega_2^phi(f, delta) = sup |f(x + h phi) - 2 f(x) + f(x - h phi)|.
template <typename F>
ModulusEstimate modulus_dt_second(const F& f, double delta,
                                  int resolution = default_resolution()) {
    auto row = [&f](double x) {
        return [&f, x, twice = 2.0 * f(x), p = dt_phi(x)](double h) {
            const double up = x + h * p;
            const double down = x - h * p;
            if (!detail::in_unit(up) || !detail::in_unit(down)) return detail::kInadmissible;
            return std::abs(f(up) - twice + f(down));
        };
    };
    return detail::grid_sup(row, delta, resolution, ModulusKind::dt_second, false);
}

/// omega_phi(f, delta) = sup |f(x + h phi/2) - f(x - h phi/2)|.
template <typename F>
ModulusEstimate modulus_dt_midpoint(const F& f, double delta,
                                    int resolution = default_resolution()) {
    auto row = [&f](double x) {
        return [&f, x, p = 0.5 * dt_phi(x)](double h) {
            const double up = x + h * p;
            const double down = x - h * p;
            if (!detail::in_unit(up) || !detail::in_unit(down)) return detail::kInadmissible;
            return std::abs(f(up) - f(down));
        };
    };
    return detail::grid_sup(row, delta, resolution, ModulusKind::dt_first_midpoint, false);
}

/// Parameters of the class
/// |f(t) - f(x)| <= M |t-x|^eta / (k1 x^2 + k2 x + t)^(eta/2), x in (0,1], t in [0,1].
struct LipschitzSpec {
    double M = 1.0;
    double eta = 1.0;
    double k1 = 0.0;
    double k2 = 1.0;

    LipschitzSpec(double m, double eta_, double k1_, double k2_)
        : M{m}, eta{eta_}, k1{k1_}, k2{k2_} {
        if (!(M > 0.0)) throw std::domain_error("LipschitzSpec: M must be > 0");
        if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("LipschitzSpec: eta in (0,1]");
        if (!(k1 >= 0.0)) throw std::domain_error("LipschitzSpec: k1 must be >= 0");
        if (!(k2 > 0.0)) throw std::domain_error("LipschitzSpec: k2 must be > 0");
    }

    /// Right-hand side of the defining inequality.
    [[nodiscard]] double allowance(double x, double t) const {
        return M * std::pow(std::abs(t - x), eta) / std::pow(k1 * x * x + k2 * x + t, eta / 2.0);
    }
};

struct LipschitzReport {
    bool holds = true;
    double worst_x = 0.0;
    double worst_t = 0.0;
    double worst_ratio = 0.0; ///< max |f(t)-f(x)| / allowance over the grid
};

/// Checks the Lipschitz-class inequality at every grid pair x = i/r
/// (i = 1..r), t = j/r (j = 0..r). The ratio test carries a 1e-12 relative
/// slack for rounding.
template <typename F>
LipschitzReport lipschitz_check(const F& f, const LipschitzSpec& spec,
                                int resolution = default_resolution()) {
    detail::require_resolution(resolution);
    const int r = resolution;
    std::vector<double> values(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) values[j] = f(static_cast<double>(j) / r);
    LipschitzReport report;
    for (int i = 1; i <= r; ++i) {
        const double x = static_cast<double>(i) / r;
        for (int j = 0; j <= r; ++j) {
            if (i == j) continue;
            const double t = static_cast<double>(j) / r;
            const double lhs = std::abs(values[j] - values[i]);
            const double ratio = lhs / spec.allowance(x, t);
            if (ratio > report.worst_ratio) {
                report.worst_ratio = ratio;
                report.worst_x = x;
                report.worst_t = t;
            }
        }
    }
    report.holds = report.worst_ratio <= 1.0 + 1e-12;
    return report;
}

} // namespace lbern
