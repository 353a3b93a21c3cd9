/**
 * @file bounds.hpp
 * @brief Numerical right-hand sides of the pointwise error estimates for
 * B_{n,lambda}, each paired with the true error at the same point, and the
 * quantitative Voronovskaja residual.
 *
 * beta_n(x) and alpha_n(x) are the first and second central moments of the
 * operator; delta_n(x) = sqrt(alpha_n(x) + beta_n(x)^2) by default.
 */
#pragma once

#include "function.hpp"
#include "smoothness.hpp"
#include "univariate.hpp"

#include <cmath>
#include <span>
#include <string>

namespace lbern {

/// Absolute slack used by every holds-test.
inline constexpr double kBoundSlack = 1e-12;

/// Default value of the unspecified absolute constant in the global
/// (second-order Ditzian-Totik) estimate.
inline constexpr double kGlobalBoundConstant = 4.0;

enum class BoundKind { global, lipschitz, c1, voronovskaja, bivariate_complete };

inline const char* to_string(BoundKind k) {
    switch (k) {
    case BoundKind::global: return "global";
    case BoundKind::lipschitz: return "lipschitz";
    case BoundKind::c1: return "c1";
    case BoundKind::voronovskaja: return "voronovskaja";
    case BoundKind::bivariate_complete: return "bivariate_complete";
    }
    return "unknown";
}

struct BoundReport {
    double x = 0.0;
    double error = 0.0;
    double bound = 0.0;
    bool holds = true;
    BoundKind kind = BoundKind::global;
    /// Part of the bound multiplied by the absolute constant (global only).
    double scaled_term = 0.0;
    /// Part of the bound that carries no constant.
    double fixed_term = 0.0;
};

inline BoundReport make_report(double x, double error, double bound, BoundKind kind) {
    return {x, error, bound, bound + kBoundSlack >= error, kind, 0.0, bound};
}

enum class DeltaDefinition {
    composite,     ///< sqrt(alpha + beta^2)
    second_moment, ///< sqrt(alpha)
};

struct DeltaN {
    double value = 0.0;
    DeltaDefinition definition = DeltaDefinition::composite;
};

inline DeltaN delta_n(const OperatorSpec& spec, double x,
                      DeltaDefinition def = DeltaDefinition::composite) {
    const auto c = central_moments(spec, x);
    const double alpha = std::max(0.0, c.alpha);
    const double sq = def == DeltaDefinition::composite ? alpha + c.beta * c.beta : alpha;
    return {std::sqrt(sq), def};
}

/// |B f(x) - f(x)| <= C omega_2^phi(f, delta_n/(2 phi(x))) + omega_xi(f, beta_n/xi(x)).
/// phi^2 concave is assumed, not checked. |beta_n| is used as the modulus
/// argument; a zero argument contributes zero.
template <typename F, typename Phi, typename Xi>
BoundReport bound_global(const OperatorSpec& spec, const F& f, double x, const Phi& phi,
                         const Xi& xi, int resolution = default_resolution(),
                         double constant = kGlobalBoundConstant) {
    detail::require_unit_interval(x, "bound_global: x");
    const double phi_x = phi(x);
    const double xi_x = xi(x);
    if (phi_x == 0.0 || xi_x == 0.0)
        throw singularity_error("bound_global: phi(x) or xi(x) vanishes at x = " +
                                std::to_string(x));
    const double error = std::abs(apply(spec, f, x) - f(x));
    const auto c = central_moments(spec, x);
    const double dn = delta_n(spec, x).value;

    const double arg2 = dn / (2.0 * std::abs(phi_x));
    const double second =
        arg2 > 0.0 ? modulus_dt_second(f, arg2, resolution).value : 0.0;
    const double arg1 = std::abs(c.beta) / std::abs(xi_x);
    const double first =
        arg1 > 0.0 ? modulus_dt_first(f, arg1, xi, resolution).value : 0.0;

    BoundReport r = make_report(x, error, constant * second + first, BoundKind::global);
    r.scaled_term = second;
    r.fixed_term = first;
    return r;
}

/// |B f(x) - f(x)| <= M alpha_n(x)^(eta/2) (k1 x^2 + k2 x)^(-eta/2), x in (0,1].
/// Membership of f in the class is the caller's responsibility.
template <typename F>
BoundReport bound_lipschitz(const OperatorSpec& spec, const F& f, const LipschitzSpec& lip,
                            double x) {
    detail::require_unit_interval(x, "bound_lipschitz: x");
    if (x == 0.0) throw singularity_error("bound_lipschitz: bound is singular at x = 0");
    const double alpha = std::max(0.0, central_moments(spec, x).alpha);
    const double bound = lip.M * std::pow(alpha, lip.eta / 2.0) *
                         std::pow(lip.k1 * x * x + lip.k2 * x, -lip.eta / 2.0);
    const double error = std::abs(apply(spec, f, x) - f(x));
    return make_report(x, error, bound, BoundKind::lipschitz);
}

/// |B f(x) - f(x)| <= |beta_n| |f'(x)| + 2 sqrt(alpha_n) omega(f', sqrt(alpha_n)).
inline BoundReport bound_c1(const OperatorSpec& spec, const FunctionHandle& f, double x,
                            int resolution = default_resolution()) {
    if (!f.has_first()) throw missing_derivative_error("bound_c1: " + f.name + " has no f'");
    detail::require_unit_interval(x, "bound_c1: x");
    const auto c = central_moments(spec, x);
    const double root = std::sqrt(std::max(0.0, c.alpha));
    const double omega = root > 0.0 ? modulus_first(f.first, root, resolution).value : 0.0;
    const double bound = std::abs(c.beta) * std::abs(f.first(x)) + 2.0 * root * omega;
    const double error = std::abs(apply(spec, f, x) - f(x));
    return make_report(x, error, bound, BoundKind::c1);
}

/// Second-order coefficient convention in the Voronovskaja expansion.
enum class VoronovskajaReading {
    half_alpha,          ///< alpha_n / 2 (exact for quadratics)
    alpha_plus_one_half, ///< (alpha_n + 1) / 2, kept for comparison
};

/// R_n(x) = B f(x) - f(x) - beta_n f'(x) - c_n f''(x), c_n per `reading`.
inline double voronovskaja_residual(const OperatorSpec& spec, const FunctionHandle& f, double x,
                                    VoronovskajaReading reading = VoronovskajaReading::half_alpha) {
    if (!f.has_first() || !f.has_second())
        throw missing_derivative_error("voronovskaja_residual: " + f.name + " needs f' and f''");
    detail::require_unit_interval(x, "voronovskaja_residual: x");
    const auto c = central_moments(spec, x);
    const double coeff =
        reading == VoronovskajaReading::half_alpha ? c.alpha / 2.0 : (c.alpha + 1.0) / 2.0;
    return apply(spec, f, x) - f(x) - c.beta * f.first(x) - coeff * f.second(x);
}

/// (C/n) phi^2(x) omega_phi(f'', n^{-1/2}); reported next to |R_n| for
/// inspection, no automated pass/fail.
inline double voronovskaja_rhs(const OperatorSpec& spec, const FunctionHandle& f, double x,
                               double constant = 1.0, int resolution = default_resolution()) {
    if (!f.has_second()) throw missing_derivative_error("voronovskaja_rhs: " + f.name);
    const double n = spec.degree();
    const double p = dt_phi(x);
    return constant / n * p * p *
           modulus_dt_midpoint(f.second, 1.0 / std::sqrt(n), resolution).value;
}

/// n (B_{n,lambda} f(x) - f(x)).
template <typename F>
double voronovskaja_limit(const OperatorSpec& spec, const F& f, double x) {
    return spec.degree() * (apply(spec, f, x) - f(x));
}

/// x(1-x) f''(x) / 2, the limit of voronovskaja_limit as n grows.
inline double voronovskaja_target(const FunctionHandle& f, double x) {
    if (!f.has_second()) throw missing_derivative_error("voronovskaja_target: " + f.name);
    return x * (1.0 - x) * f.second(x) / 2.0;
}

/// Smallest C = 2^k, k in [-16, 16], for which C*scaled_term + fixed_term
/// covers the error in every report; 0 when none does.
inline double calibrate_global_constant(std::span<const BoundReport> reports) {
    for (int k = -16; k <= 16; ++k) {
        const double c = std::ldexp(1.0, k);
        bool all = true;
        for (const auto& r : reports)
            if (c * r.scaled_term + r.fixed_term + kBoundSlack < r.error) {
                all = false;
                break;
            }
        if (all) return c;
    }
    return 0.0;
}

} // namespace lbern
