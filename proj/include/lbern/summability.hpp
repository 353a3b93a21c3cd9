/**
 * @file summability.hpp
 * @brief Lower-triangular summability matrices (Cesaro, weighted Riesz means,
 * identity, and weighted-mean compositions), A-densities of index sets, and a
 * finite-ladder decision procedure for A-statistical limits.
 *
 * An infinite limit cannot be certified from finitely many terms. Reports
 * therefore carry the full density trajectories; the verdict only summarises
 * them (see StatLimitReport).
 */
#pragma once

#include "core.hpp"
#include "function.hpp"
#include "univariate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lbern {

using SequenceFn = std::function<double(std::size_t)>;

struct SequenceHandle {
    std::string name;
    SequenceFn term;
    double operator()(std::size_t k) const { return term(k); }
};

inline bool is_perfect_square(std::size_t k) {
    auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(k)));
    while (r * r > k) --r;
    while ((r + 1) * (r + 1) <= k) ++r;
    return r * r == k;
}

/// zero, one_over_n (1/(k+1)), spike_squares (1 on perfect squares, else 0),
/// alt_sign ((-1)^k), spike_even (1 on even k, else 0).
inline const std::vector<SequenceHandle>& sequence_catalog() {
    static const std::vector<SequenceHandle> catalog = {
        {"zero", [](std::size_t) { return 0.0; }},
        {"one_over_n", [](std::size_t k) { return 1.0 / static_cast<double>(k + 1); }},
        {"spike_squares", [](std::size_t k) { return is_perfect_square(k) ? 1.0 : 0.0; }},
        {"alt_sign", [](std::size_t k) { return k % 2 == 0 ? 1.0 : -1.0; }},
        {"spike_even", [](std::size_t k) { return k % 2 == 0 ? 1.0 : 0.0; }},
    };
    return catalog;
}

/// Nonnegative weights q_k with q_0 > 0.
struct WeightSequence {
    std::string name;
    SequenceFn q;

    /// Q_0..Q_n. Throws if q_0 <= 0 or any q_k < 0.
    [[nodiscard]] std::vector<double> prefix_sums(std::size_t n) const {
        std::vector<double> sums(n + 1);
        double acc = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double w = q(k);
            if (k == 0 && !(w > 0.0)) throw std::domain_error(name + ": q_0 must be > 0");
            if (!(w >= 0.0)) throw std::domain_error(name + ": weights must be >= 0");
            acc += w;
            sums[k] = acc;
        }
        return sums;
    }
};

inline WeightSequence unit_weights() {
    return {"unit", [](std::size_t) { return 1.0; }};
}

inline WeightSequence linear_weights() {
    return {"linear", [](std::size_t k) { return static_cast<double>(k + 1); }};
}

/// Row-generated lower-triangular matrix; row(n) has n+1 entries a_{n,0..n}.
struct SummabilityMatrix {
    std::string name;
    std::function<std::vector<double>(std::size_t)> row_fn;

    [[nodiscard]] std::vector<double> row(std::size_t n) const { return row_fn(n); }
};

/// a_{nk} = q_k / Q_n for k <= n.
inline SummabilityMatrix weighted_mean_matrix(WeightSequence q) {
    auto name = "riesz[" + q.name + "]";
    return {std::move(name), [q = std::move(q)](std::size_t n) {
                const auto sums = q.prefix_sums(n);
                std::vector<double> row(n + 1);
                for (std::size_t k = 0; k <= n; ++k) row[k] = q.q(k) / sums[n];
                return row;
            }};
}

inline SummabilityMatrix cesaro_matrix() {
    return {"cesaro", [](std::size_t n) {
                return std::vector<double>(n + 1, 1.0 / static_cast<double>(n + 1));
            }};
}

/// Riesz mean with q_k = k + 1: a_{nk} = 2(k+1)/((n+1)(n+2)).
inline SummabilityMatrix riesz_linear_matrix() {
    auto m = weighted_mean_matrix(linear_weights());
    m.name = "riesz_linear";
    return m;
}

inline SummabilityMatrix identity_matrix() {
    return {"identity", [](std::size_t n) {
                std::vector<double> row(n + 1, 0.0);
                row[n] = 1.0;
                return row;
            }};
}

/// Product of A with the weighted mean matrix of q:
/// c_{nk} = q_k * sum_{j=k..n} a_{nj} / Q_j.
inline SummabilityMatrix compose_with_weighted_mean(SummabilityMatrix a, WeightSequence q) {
    auto name = a.name + "*riesz[" + q.name + "]";
    return {std::move(name), [a = std::move(a), q = std::move(q)](std::size_t n) {
                const auto outer = a.row(n);
                const auto sums = q.prefix_sums(n);
                std::vector<double> row(n + 1);
                double tail = 0.0;
                for (std::size_t k = n + 1; k-- > 0;) {
                    tail += outer[k] / sums[k];
                    row[k] = q.q(k) * tail;
                }
                return row;
            }};
}

/// Matrix presets: cesaro, riesz_linear, identity.
inline SummabilityMatrix matrix_preset(std::string_view name) {
    if (name == "cesaro") return cesaro_matrix();
    if (name == "riesz_linear") return riesz_linear_matrix();
    if (name == "identity") return identity_matrix();
    throw std::invalid_argument("unknown matrix '" + std::string(name) +
                                "'; valid options: cesaro, riesz_linear, identity");
}

/// Weight presets for the weighted-mean stage: none (plain A), unit, linear.
inline SummabilityMatrix with_weight_preset(SummabilityMatrix a, std::string_view weights) {
    if (weights == "none") return a;
    if (weights == "unit") return compose_with_weighted_mean(std::move(a), unit_weights());
    if (weights == "linear") return compose_with_weighted_mean(std::move(a), linear_weights());
    throw std::invalid_argument("unknown weights '" + std::string(weights) +
                                "'; valid options: none, unit, linear");
}

struct RegularityReport {
    bool nonnegative = true;
    double max_row_sum_deviation = 0.0; ///< over the sampled rows n >= 1000
    double max_column_entry = 0.0;      ///< max a_{N,k}, k <= 8, at the last sampled row
    bool regular = true;
};

/// Empirical Silverman-Toeplitz checks: a_{nk} >= 0, |row sum - 1| <= 1e-9
/// on the sampled rows, and a_{N,k} <= 1e-2 for k <= 8 at the last row.
inline RegularityReport check_regularity(const SummabilityMatrix& a,
                                         std::span<const std::size_t> rows) {
    RegularityReport rep;
    std::vector<double> last;
    for (std::size_t n : rows) {
        last = a.row(n);
        double sum = 0.0;
        for (double v : last) {
            if (v < 0.0) rep.nonnegative = false;
            sum += v;
        }
        rep.max_row_sum_deviation = std::max(rep.max_row_sum_deviation, std::abs(sum - 1.0));
    }
    for (std::size_t k = 0; k <= 8 && k < last.size(); ++k)
        rep.max_column_entry = std::max(rep.max_column_entry, last[k]);
    rep.regular =
        rep.nonnegative && rep.max_row_sum_deviation <= 1e-9 && rep.max_column_entry <= 1e-2;
    return rep;
}

inline RegularityReport check_regularity(const SummabilityMatrix& a) {
    static constexpr std::size_t rows[] = {1000, 2000, 5000, 10000};
    return check_regularity(a, rows);
}

/// sum_{k <= n, indicator(k)} a_{nk}.
template <typename Pred>
double a_density_partial(const SummabilityMatrix& a, const Pred& indicator, std::size_t n) {
    const auto row = a.row(n);
    double total = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        if (indicator(k)) total += row[k];
    return total;
}

struct StatLimitOptions {
    std::vector<double> epsilons{0.1, 0.02, 0.004};
    std::vector<std::size_t> ladder{100, 1000, 10000};
    double threshold = 0.05;
};

/// Evidence for (or against) st_A-lim x_k = L.
///
/// density[e][l] = sum over k <= ladder[l] with |x_k - L| >= epsilons[e] of
/// a_{ladder[l], k}. The verdict is true iff, for every epsilon, the density at
/// the last ladder point is <= threshold and the last (up to) three ladder
/// densities are nonincreasing. tail_sup[l] = max |x_k - L| over
/// ladder[l] <= k <= ladder.back(), attained at tail_argmax[l].
struct StatLimitReport {
    double limit = 0.0;
    std::vector<double> epsilons;
    std::vector<std::size_t> ladder;
    std::vector<std::vector<double>> density;
    std::vector<double> tail_sup;
    std::vector<std::size_t> tail_argmax;
    double threshold = 0.05;
    bool verdict = false;
};

namespace detail {

inline void require_increasing(std::span<const std::size_t> ladder) {
    if (ladder.empty()) throw std::invalid_argument("ladder must be nonempty");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1]) throw std::invalid_argument("ladder must increase");
}

} // namespace detail

/// terms must hold x_0..x_N with N >= ladder.back().
inline StatLimitReport a_stat_limit(const SummabilityMatrix& a, std::span<const double> terms,
                                    double limit, const StatLimitOptions& opt = {}) {
    detail::require_increasing(opt.ladder);
    if (opt.epsilons.empty()) throw std::invalid_argument("epsilon ladder must be nonempty");
    if (terms.size() <= opt.ladder.back())
        throw std::invalid_argument("a_stat_limit: sequence shorter than the ladder");

    StatLimitReport rep;
    rep.limit = limit;
    rep.epsilons = opt.epsilons;
    rep.ladder = opt.ladder;
    rep.threshold = opt.threshold;
    rep.density.assign(opt.epsilons.size(), std::vector<double>(opt.ladder.size(), 0.0));

    for (std::size_t l = 0; l < opt.ladder.size(); ++l) {
        const std::size_t n = opt.ladder[l];
        const auto row = a.row(n);
        for (std::size_t e = 0; e < opt.epsilons.size(); ++e) {
            double d = 0.0;
            for (std::size_t k = 0; k <= n; ++k)
                if (std::abs(terms[k] - limit) >= opt.epsilons[e]) d += row[k];
            rep.density[e][l] = d;
        }
    }

    const std::size_t last = opt.ladder.back();
    rep.tail_sup.assign(opt.ladder.size(), 0.0);
    rep.tail_argmax.assign(opt.ladder.size(), 0);
    double run = -1.0;
    std::size_t arg = last;
    std::size_t l = opt.ladder.size();
    for (std::size_t k = last + 1; k-- > 0;) {
        const double dev = std::abs(terms[k] - limit);
        if (dev > run) {
            run = dev;
            arg = k;
        }
        while (l > 0 && opt.ladder[l - 1] == k) {
            --l;
            rep.tail_sup[l] = run;
            rep.tail_argmax[l] = arg;
        }
        if (l == 0) break;
    }

    rep.verdict = true;
    const std::size_t tail_from = opt.ladder.size() > 3 ? opt.ladder.size() - 3 : 0;
    for (const auto& traj : rep.density) {
        if (traj.back() > opt.threshold) rep.verdict = false;
        for (std::size_t i = tail_from + 1; i < traj.size(); ++i)
            if (traj[i] > traj[i - 1] + 1e-12) rep.verdict = false;
    }
    return rep;
}

inline StatLimitReport a_stat_limit(const SummabilityMatrix& a, const SequenceFn& x,
                                    double limit, const StatLimitOptions& opt = {}) {
    detail::require_increasing(opt.ladder);
    std::vector<double> terms(opt.ladder.back() + 1);
    for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = x(k);
    return a_stat_limit(a, terms, limit, opt);
}

/// Operator degree used for sequence index k; indices 0 and 1 map to 2.
inline int degree_for_index(std::size_t k) { return static_cast<int>(std::max<std::size_t>(k, 2)); }

/// e_k = sup over grid of |B_{d(k),lambda} f - f|, k = 0..count-1.
template <typename F>
std::vector<double> operator_error_sequence(double lambda, const F& f,
                                            std::span<const double> grid, std::size_t count) {
    std::vector<double> e(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (k >= 1 && degree_for_index(k) == degree_for_index(k - 1)) {
            e[k] = e[k - 1];
            continue;
        }
        e[k] = sup_error(OperatorSpec{degree_for_index(k), lambda}, f, grid);
    }
    return e;
}

struct ErrorSequenceReport {
    std::vector<double> errors;
    StatLimitReport stat;
};

/// A-statistical decision for ||B_{n,lambda} f - f|| -> 0 (sup over grid).
template <typename F>
ErrorSequenceReport statistical_error_experiment(double lambda, const F& f,
                                                 const SummabilityMatrix& a,
                                                 std::span<const double> grid,
                                                 const StatLimitOptions& opt = {}) {
    detail::require_increasing(opt.ladder);
    ErrorSequenceReport rep;
    rep.errors = operator_error_sequence(lambda, f, grid, opt.ladder.back() + 1);
    rep.stat = a_stat_limit(a, rep.errors, 0.0, opt);
    return rep;
}

struct PerturbedVoronovskajaReport {
    std::vector<double> scaled; ///< y_k = d (1 + p_k) B_d f(x) - d f(x), d = d(k)
    double target = 0.0;        ///< x(1-x) f''(x)/2
    StatLimitReport stat;
};

/// y_k = d ((1 + p_k) B_{d,lambda}(f; x) - f(x)) tested for the A-statistical
/// limit x(1-x) f''(x)/2.
inline PerturbedVoronovskajaReport statistical_voronovskaja_experiment(
    double lambda, const FunctionHandle& f, double x, const SequenceFn& perturbation,
    const SummabilityMatrix& a, const StatLimitOptions& opt = {}) {
    detail::require_increasing(opt.ladder);
    detail::require_unit_interval(x, "statistical_voronovskaja_experiment: x");
    PerturbedVoronovskajaReport rep;
    if (!f.has_second())
        throw missing_derivative_error("statistical_voronovskaja_experiment: " + f.name);
    rep.target = x * (1.0 - x) * f.second(x) / 2.0;
    const std::size_t count = opt.ladder.back() + 1;
    rep.scaled.resize(count);
    const double fx = f(x);
    double bx = 0.0;
    int prev = -1;
    for (std::size_t k = 0; k < count; ++k) {
        const int d = degree_for_index(k);
        if (d != prev) bx = apply(OperatorSpec{d, lambda}, f, x);
        prev = d;
        rep.scaled[k] = d * ((1.0 + perturbation(k)) * bx - fx);
    }
    rep.stat = a_stat_limit(a, rep.scaled, rep.target, opt);
    return rep;
}

} // namespace lbern
