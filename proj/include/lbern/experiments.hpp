/**
 * @file experiments.hpp
 * @brief Command drivers behind the lbern CLI. Each driver takes a validated
 * ExperimentConfig and returns a CsvReport whose summary lines decide the exit
 * status. Drivers are deterministic: the same config yields the same bytes.
 */
#pragma once

#include "bivariate.hpp"
#include "bounds.hpp"
#include "csv.hpp"
#include "exact.hpp"
#include "function.hpp"
#include "smoothness.hpp"
#include "summability.hpp"
#include "univariate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lbern {

/// Bad command, flag value or catalog name.
class usage_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string command;
    std::string check;
    int n = 10;
    std::optional<int> m;
    double lambda = 1.0;
    std::string fn;
    int grid = 0; ///< 0 selects the command default
    std::vector<int> ladder;
    std::string matrix = "cesaro";
    std::string weights = "none";
    std::string seq;
    double x = 0.5;
    double y = 0.5;
    std::string out;
    int resolution = default_resolution();

    [[nodiscard]] int m_or_n() const { return m.value_or(n); }
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"eval",        "moments",     "converge",
                                                   "voronovskaja", "statistical", "bivariate"};
    return names;
}

/// Valid --check values per command; the empty string is the plain table.
inline std::vector<std::string> check_names(std::string_view command) {
    if (command == "eval") return {"", "identities"};
    if (command == "moments") return {"", "oracle"};
    if (command == "converge") return {"", "lipschitz", "bounds", "moduli"};
    if (command == "voronovskaja") return {"", "limit"};
    if (command == "statistical") return {"", "error_sequence", "perturbed_voronovskaja"};
    if (command == "bivariate") return {"", "volkov", "bound", "rho", "acceptance"};
    return {};
}

namespace detail {

inline std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& items) {
    std::vector<std::string> s;
    for (const auto& v : items) {
        if constexpr (std::is_floating_point_v<T>)
            s.push_back(format_real(v));
        else
            s.push_back(std::to_string(v));
    }
    return join(s, ",");
}

inline bool in_univariate_catalog(std::string_view name) {
    const auto& c = univariate_catalog();
    return std::any_of(c.begin(), c.end(), [&](const auto& f) { return f.name == name; });
}

inline bool in_bivariate_catalog(std::string_view name) {
    const auto& c = bivariate_catalog();
    return std::any_of(c.begin(), c.end(), [&](const auto& f) { return f.name == name; });
}

inline std::vector<std::size_t> to_ladder(const std::vector<int>& l) {
    return {l.begin(), l.end()};
}

inline std::string fmt_max(std::string_view what, double value, std::string_view op,
                           double tolerance) {
    char tol[32];
    std::snprintf(tol, sizeof tol, "%g", tolerance);
    return std::string(what) + "=" + format_real(value) + " " + std::string(op) + " " + tol;
}

inline const std::vector<int>& standard_degrees() {
    static const std::vector<int> d = {2, 3, 5, 10, 25, 50};
    return d;
}

inline const std::vector<double>& standard_lambdas() {
    static const std::vector<double> l = {-1.0, -0.5, 0.0, 0.5, 1.0};
    return l;
}

inline const std::vector<int>& small_degrees() {
    static const std::vector<int> d = {2, 3, 5, 10};
    return d;
}

/// Uses the univariate catalog unless --m is given or the name is bivariate-only.
inline bool eval_is_bivariate(const ExperimentConfig& c) {
    if (!in_univariate_catalog(c.fn)) return true;
    return c.m.has_value() && in_bivariate_catalog(c.fn);
}

} // namespace detail

/// Fills command defaults and rejects bad names or values with the valid options.
inline ExperimentConfig validate(ExperimentConfig c) {
    const auto& commands = command_names();
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw usage_error("unknown command '" + c.command +
                          "'; valid commands: " + detail::join(commands));
    const auto checks = check_names(c.command);
    if (std::find(checks.begin(), checks.end(), c.check) == checks.end()) {
        std::vector<std::string> shown(checks.begin() + 1, checks.end());
        throw usage_error("unknown check '" + c.check + "' for " + c.command +
                          "; valid checks: " + detail::join(shown));
    }
    if (c.n < 2) throw usage_error("--n must be >= 2");
    if (c.m && *c.m < 2) throw usage_error("--m must be >= 2");
    if (!(c.lambda >= -1.0 && c.lambda <= 1.0)) throw usage_error("--lambda must lie in [-1, 1]");
    if (!(c.x >= 0.0 && c.x <= 1.0)) throw usage_error("--x must lie in [0, 1]");
    if (!(c.y >= 0.0 && c.y <= 1.0)) throw usage_error("--y must lie in [0, 1]");
    if (c.resolution < kMinResolution)
        throw usage_error("resolution must be >= " + std::to_string(kMinResolution));
    for (std::size_t i = 0; i < c.ladder.size(); ++i) {
        if (c.ladder[i] < 2) throw usage_error("--ladder entries must be >= 2");
        if (i && c.ladder[i] <= c.ladder[i - 1])
            throw usage_error("--ladder must be strictly increasing");
    }

    const bool bivariate_cmd = c.command == "bivariate";
    if (c.fn.empty()) {
        if (c.command == "eval") c.fn = "id";
        else if (bivariate_cmd) c.fn = "exp_sum";
        else if (c.command == "converge" || c.command == "voronovskaja" ||
                 (c.command == "statistical" && c.seq.empty()))
            c.fn = "exp";
    }
    if (!c.fn.empty()) {
        const bool uni = detail::in_univariate_catalog(c.fn);
        const bool bi = detail::in_bivariate_catalog(c.fn);
        const bool ok = bivariate_cmd ? bi : (c.command == "eval" ? (uni || bi) : uni);
        if (!ok) {
            std::string msg = "unknown function '" + c.fn + "'; ";
            if (!bivariate_cmd)
                msg += "univariate catalog: " + catalog_names(univariate_catalog());
            if (c.command == "eval") msg += "; ";
            if (bivariate_cmd || c.command == "eval")
                msg += "bivariate catalog: " + catalog_names(bivariate_catalog());
            throw usage_error(msg);
        }
    }
    if (!c.seq.empty()) {
        const auto& s = sequence_catalog();
        if (std::none_of(s.begin(), s.end(), [&](const auto& h) { return h.name == c.seq; })) {
            std::vector<std::string> names;
            for (const auto& h : s) names.push_back(h.name);
            throw usage_error("unknown sequence '" + c.seq +
                              "'; valid sequences: " + detail::join(names));
        }
    }
    try {
        (void)with_weight_preset(matrix_preset(c.matrix), c.weights);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }

    if (c.grid == 0) c.grid = (bivariate_cmd || (c.command == "eval" && detail::eval_is_bivariate(c)))
                                  ? 11
                                  : 101;
    if (c.grid < 2) throw usage_error("--grid must be >= 2");
    if (c.ladder.empty()) {
        if (c.command == "converge") c.ladder = {10, 50, 200};
        else if (c.command == "voronovskaja") c.ladder = {128, 256, 512, 1024};
        else if (c.command == "statistical") c.ladder = {100, 1000, 10000};
        else if (bivariate_cmd) c.ladder = c.check == "rho" ? std::vector<int>{10, 40, 160}
                                                             : std::vector<int>{10, 20, 40, 80};
    }
    return c;
}

/// One-line rendering of the effective configuration.
inline std::string config_echo(const ExperimentConfig& c) {
    std::string s = "config command=" + c.command;
    s += " check=" + (c.check.empty() ? std::string("none") : c.check);
    s += " n=" + std::to_string(c.n) + " m=" + std::to_string(c.m_or_n());
    s += " lambda=" + format_real(c.lambda);
    s += " fn=" + (c.fn.empty() ? std::string("none") : c.fn);
    s += " grid=" + std::to_string(c.grid);
    s += " ladder=" + (c.ladder.empty() ? std::string("none") : detail::join_numbers(c.ladder));
    s += " matrix=" + c.matrix + " weights=" + c.weights;
    s += " seq=" + (c.seq.empty() ? std::string("none") : c.seq);
    s += " x=" + format_real(c.x) + " y=" + format_real(c.y);
    s += " resolution=" + std::to_string(c.resolution);
    return s;
}

// ---------------------------------------------------------------- eval

inline CsvReport cmd_eval(const ExperimentConfig& c) {
    CsvReport r;
    bool finite = true;
    if (c.check == "identities") {
        r.header = {"check", "n", "lambda", "max_deviation", "tolerance", "pass"};
        auto emit = [&](const char* check, int n, double lambda, double dev, double tol) {
            RowBuilder b;
            b << check << n << lambda << dev << tol << (dev <= tol);
            r.rows.push_back(b.take());
            return dev <= tol;
        };
        const auto grid = unit_grid(101);
        std::vector<int> degrees;
        for (int n = 2; n <= 200; ++n) degrees.push_back(n);
        degrees.push_back(1000);
        std::vector<double> lambdas;
        for (int k = 0; k <= 10; ++k) lambdas.push_back(k == 10 ? 1.0 : -1.0 + 0.2 * k);

        bool unity_ok = true;
        bool positive_ok = true;
        double unity_max = 0.0;
        double lowest = 0.0;
        for (int n : degrees)
            for (double l : lambdas) {
                double dev = 0.0;
                double low = 0.0;
                for (double x : grid) {
                    double s = 0.0;
                    for (double v : lambda_basis(n, l, x).values) {
                        s += v;
                        low = std::min(low, v);
                    }
                    dev = std::max(dev, std::abs(s - 1.0));
                }
                unity_max = std::max(unity_max, dev);
                lowest = std::min(lowest, low);
                unity_ok &= emit("partition_of_unity", n, l, dev, 1e-12);
                positive_ok &= emit("negative_part", n, l, -low, 1e-12);
            }
        r.add_summary(unity_ok, "identities.partition_of_unity",
                      detail::fmt_max("max_deviation", unity_max, "<=", 1e-12));
        r.add_summary(positive_ok, "identities.nonnegativity",
                      detail::fmt_max("min_basis_value", lowest, ">=", -1e-12));

        bool ends_ok = true;
        for (int n : degrees)
            for (double l : lambdas) {
                double dev = 0.0;
                for (const auto& f : univariate_catalog()) {
                    for (double e : {0.0, 1.0}) {
                        const double d = std::abs(apply(OperatorSpec{n, l}, f, e) - f(e));
                        dev = std::max(dev, d);
                    }
                }
                ends_ok &= emit("endpoint_interpolation", n, l, dev, 0.0);
            }
        r.add_summary(ends_ok, "identities.endpoint_interpolation", "exact at x = 0 and x = 1");

        bool reduce_ok = true;
        double reduce_max = 0.0;
        for (int n : detail::standard_degrees()) {
            double dev = 0.0;
            for (double x : grid) {
                const auto fast = lambda_basis(n, 0.0, x).values;
                const auto ref = exact::bernstein_basis(n, exact::from_double(x));
                for (std::size_t i = 0; i < fast.size(); ++i)
                    dev = std::max(dev, std::abs(fast[i] - exact::to_double(ref[i])));
            }
            reduce_max = std::max(reduce_max, dev);
            reduce_ok &= emit("lambda_zero_reduction", n, 0.0, dev, 1e-14);
        }
        {
            double dev = 0.0;
            for (int n : degrees)
                for (double x : grid) {
                    const auto fast = lambda_basis(n, 0.0, x).values;
                    const auto classical = bernstein_basis(n, x);
                    for (std::size_t i = 0; i < fast.size(); ++i)
                        dev = std::max(dev, std::abs(fast[i] - classical[i]));
                }
            reduce_max = std::max(reduce_max, dev);
            reduce_ok &= emit("lambda_zero_vs_classical", degrees.back(), 0.0, dev, 1e-14);
        }
        r.add_summary(reduce_ok, "identities.lambda_zero_reduction",
                      detail::fmt_max("max_deviation", reduce_max, "<=", 1e-14));

        bool sep_ok = true;
        double sep_max = 0.0;
        const auto& exp_f = find_function("exp");
        const auto& sin_f = find_function("sinpi");
        const auto g11 = unit_grid(11);
        for (int n : detail::small_degrees())
            for (int m : detail::small_degrees())
                for (double l : detail::standard_lambdas()) {
                    const BivariateSpec spec{n, m, l};
                    auto prod = [&](double s, double t) { return exp_f(s) * sin_f(t); };
                    double dev = 0.0;
                    for (double x : g11)
                        for (double y : g11) {
                            const double lhs = apply2(spec, prod, x, y);
                            const double rhs = apply(spec.x_operator(), exp_f, x) *
                                               apply(spec.y_operator(), sin_f, y);
                            dev = std::max(dev, std::abs(lhs - rhs));
                        }
                    sep_max = std::max(sep_max, dev);
                    sep_ok &= dev <= 1e-12;
                }
        {
            RowBuilder b;
            b << "separable_factorization" << 10 << 1.0 << sep_max << 1e-12 << sep_ok;
            r.rows.push_back(b.take());
        }
        r.add_summary(sep_ok, "identities.separable_factorization",
                      detail::fmt_max("max_deviation", sep_max, "<=", 1e-12));
        return r;
    }

    const auto grid = unit_grid(c.grid);
    if (detail::eval_is_bivariate(c)) {
        const auto& f = find_bivariate_function(c.fn);
        const SampledOperator2 op(BivariateSpec{c.n, c.m_or_n(), c.lambda}, f);
        r.header = {"x", "y", "f", "B_f", "error"};
        for (double x : grid)
            for (double y : grid) {
                const double fx = f(x, y);
                const double bf = op(x, y);
                finite &= std::isfinite(bf);
                RowBuilder b;
                b << x << y << fx << bf << std::abs(bf - fx);
                r.rows.push_back(b.take());
            }
    } else {
        const auto& f = find_function(c.fn);
        const SampledOperator op(OperatorSpec{c.n, c.lambda}, f);
        r.header = {"x", "f", "B_f", "error"};
        for (double x : grid) {
            const double fx = f(x);
            const double bf = op(x);
            finite &= std::isfinite(bf);
            RowBuilder b;
            b << x << fx << bf << std::abs(bf - fx);
            r.rows.push_back(b.take());
        }
    }
    r.add_summary(finite, "eval.finite", std::to_string(r.rows.size()) + " rows");
    return r;
}

// ---------------------------------------------------------------- moments

namespace detail {

inline double moment_oracle_delta(const OperatorSpec& spec, double x) {
    double worst = 0.0;
    for (int j = 0; j <= 4; ++j)
        worst = std::max(worst, std::abs(raw_moment(spec, j, x) - raw_moment_oracle(spec, j, x)));
    return worst;
}

inline double moment2_oracle_delta(const BivariateSpec& spec, double x, double y) {
    double worst = 0.0;
    for (auto w : {Monomial2::one, Monomial2::s, Monomial2::t, Monomial2::s2, Monomial2::t2})
        worst = std::max(worst, std::abs(raw_moment2(spec, w, x, y) -
                                         raw_moment2_oracle(spec, w, x, y)));
    return worst;
}

} // namespace detail

inline CsvReport cmd_moments(const ExperimentConfig& c) {
    CsvReport r;
    constexpr double tol = 1e-10;
    if (c.check == "oracle") {
        r.header = {"kind", "n", "m", "lambda", "max_abs_delta"};
        double uni = 0.0;
        const auto grid = unit_grid(101);
        for (int n : detail::standard_degrees())
            for (double l : detail::standard_lambdas()) {
                const OperatorSpec spec{n, l};
                double worst = 0.0;
                for (double x : grid) worst = std::max(worst, detail::moment_oracle_delta(spec, x));
                uni = std::max(uni, worst);
                RowBuilder b;
                b << "univariate" << n << n << l << worst;
                r.rows.push_back(b.take());
            }
        double bi = 0.0;
        const auto g11 = unit_grid(11);
        for (int n : detail::small_degrees())
            for (int m : detail::small_degrees())
                for (double l : detail::standard_lambdas()) {
                    const BivariateSpec spec{n, m, l};
                    double worst = 0.0;
                    for (double x : g11)
                        for (double y : g11)
                            worst = std::max(worst, detail::moment2_oracle_delta(spec, x, y));
                    bi = std::max(bi, worst);
                    RowBuilder b;
                    b << "bivariate" << n << m << l << worst;
                    r.rows.push_back(b.take());
                }
        r.add_summary(uni <= tol, "moments.oracle", detail::fmt_max("max_abs_delta", uni, "<=", tol));
        r.add_summary(bi <= tol, "moments.bivariate_oracle",
                      detail::fmt_max("max_abs_delta", bi, "<=", tol));
        return r;
    }

    const OperatorSpec spec{c.n, c.lambda};
    r.header = {"x",  "m0", "m1", "m2", "m3", "m4", "beta", "alpha",
                "d0", "d1", "d2", "d3", "d4"};
    double worst = 0.0;
    for (double x : unit_grid(c.grid)) {
        const auto s = moment_set(spec, x);
        RowBuilder b;
        b << x;
        for (double v : s.m) b << v;
        b << s.beta << s.alpha;
        for (int j = 0; j <= 4; ++j) {
            const double d = s.m[j] - raw_moment_oracle(spec, j, x);
            worst = std::max(worst, std::abs(d));
            b << d;
        }
        r.rows.push_back(b.take());
    }
    r.add_summary(worst <= tol, "moments.oracle", detail::fmt_max("max_abs_delta", worst, "<=", tol));
    return r;
}

// ---------------------------------------------------------------- converge

namespace detail {

inline std::vector<double> interior(const std::vector<double>& grid) {
    return {grid.begin() + 1, grid.end() - 1};
}

} // namespace detail

inline CsvReport converge_lipschitz(const ExperimentConfig& c) {
    CsvReport r;
    r.header = {"n", "lambda", "x", "error", "bound", "holds"};
    const LipschitzSpec lip{std::sqrt(2.0), 1.0, 0.0, 1.0};
    const auto& f = find_function("lip_id");
    const auto member = lipschitz_check(f, lip, c.resolution);
    r.add_summary(member.holds, "lipschitz.membership",
                  "worst_ratio=" + format_real(member.worst_ratio));

    bool all = true;
    std::size_t fails = 0;
    for (int n : {2, 10, 100})
        for (double l : {-1.0, 0.0, 1.0})
            for (int i = 1; i <= 99; ++i) {
                const double x = static_cast<double>(i) / 99.0;
                const auto rep = bound_lipschitz(OperatorSpec{n, l}, f, lip, x);
                if (!rep.holds) ++fails;
                all &= rep.holds;
                RowBuilder b;
                b << n << l << x << rep.error << rep.bound << rep.holds;
                r.rows.push_back(b.take());
            }
    r.add_summary(all, "lipschitz.bound", std::to_string(fails) + " violations on 99-point grid");

    const auto fx = bound_lipschitz(OperatorSpec{2, 1.0}, f, lip, 0.25);
    RowBuilder b;
    b << 2 << 1.0 << 0.25 << fx.error << fx.bound << fx.holds;
    r.rows.push_back(b.take());
    const bool fixture = std::abs(fx.error - 0.046875) <= 1e-15 && fx.bound > fx.error;
    r.add_summary(fixture, "lipschitz.fixture",
                  "error=" + format_real(fx.error) + " bound=" + format_real(fx.bound));
    return r;
}

inline CsvReport converge_bounds(const ExperimentConfig& c) {
    CsvReport r;
    r.header = {"fn", "n", "lambda", "x", "kind", "error", "bound", "holds"};
    const auto points = detail::interior(unit_grid(21));
    std::vector<BoundReport> globals;
    std::size_t global_fails = 0, c1_fails = 0, c1_rows = 0;
    auto emit = [&](const FunctionHandle& f, int n, const BoundReport& rep) {
        RowBuilder b;
        b << f.name << n << c.lambda << rep.x << to_string(rep.kind) << rep.error << rep.bound
          << rep.holds;
        r.rows.push_back(b.take());
    };
    for (const auto& f : univariate_catalog())
        for (int n : {10, 50, 200}) {
            const OperatorSpec spec{n, c.lambda};
            for (double x : points) {
                const auto g = bound_global(spec, f, x, dt_phi, dt_phi, c.resolution);
                globals.push_back(g);
                if (!g.holds) ++global_fails;
                emit(f, n, g);
                if (f.has_first()) {
                    const auto d = bound_c1(spec, f, x, c.resolution);
                    ++c1_rows;
                    if (!d.holds) ++c1_fails;
                    emit(f, n, d);
                }
            }
        }
    r.add_summary(global_fails == 0, "bounds.global",
                  std::to_string(global_fails) + " violations in " +
                      std::to_string(globals.size()) + " rows with C=" +
                      format_real(kGlobalBoundConstant));
    r.add_summary(c1_fails == 0, "bounds.c1",
                  std::to_string(c1_fails) + " violations in " + std::to_string(c1_rows) + " rows");
    const double calibrated = calibrate_global_constant(globals);
    r.add_summary(calibrated > 0.0 && calibrated <= kGlobalBoundConstant, "bounds.calibration",
                  "smallest power-of-two constant=" + format_real(calibrated));
    return r;
}

inline CsvReport converge_moduli(const ExperimentConfig& c) {
    CsvReport r;
    r.header = {"case", "delta", "estimate", "expected", "relative_gap", "pass"};
    const auto id = [](double x) { return x; };
    const auto sq = [](double x) { return x * x; };
    const auto one = [](double) { return 1.0; };
    bool all = true;
    auto emit = [&](const char* name, double delta, double est, double expected, double tol) {
        const double gap = std::abs(est - expected) / expected;
        const bool ok = gap <= tol;
        all &= ok;
        RowBuilder b;
        b << name << delta << est << expected << gap << ok;
        r.rows.push_back(b.take());
    };
    for (double d : {0.05, 0.1, 0.2, 0.5}) {
        emit("first_id", d, modulus_first(id, d, c.resolution).value, d, 0.05);
        emit("dt_second_square", d, modulus_dt_second(sq, d, c.resolution).value, d * d / 2.0,
             0.05);
        emit("dt_midpoint_id", d, modulus_dt_midpoint(id, d, c.resolution).value, d / 2.0, 0.05);
        emit("stepweight_one_id", d, modulus_dt_first(id, d, one, c.resolution).value,
             modulus_first(id, d, c.resolution).value, 1e-12);
    }
    r.add_summary(all, "moduli.analytic", "all estimates within 5% of closed forms");
    return r;
}

inline CsvReport cmd_converge(const ExperimentConfig& c) {
    if (c.check == "lipschitz") return converge_lipschitz(c);
    if (c.check == "bounds") return converge_bounds(c);
    if (c.check == "moduli") return converge_moduli(c);

    CsvReport r;
    r.header = {"n", "x", "f", "B_f", "error", "global_bound", "global_holds", "c1_bound",
                "c1_holds"};
    const auto& f = find_function(c.fn);
    bool all = true;
    for (int n : c.ladder) {
        const OperatorSpec spec{n, c.lambda};
        for (double x : detail::interior(unit_grid(c.grid))) {
            const auto g = bound_global(spec, f, x, dt_phi, dt_phi, c.resolution);
            RowBuilder b;
            b << n << x << f(x) << apply(spec, f, x) << g.error << g.bound << g.holds;
            all &= g.holds;
            if (f.has_first()) {
                const auto d = bound_c1(spec, f, x, c.resolution);
                all &= d.holds;
                b << d.bound << d.holds;
            } else {
                b << "" << "";
            }
            r.rows.push_back(b.take());
        }
    }
    r.add_summary(all, "converge.bounds", "global and C1 bounds at interior grid points");
    return r;
}

// ---------------------------------------------------------------- voronovskaja

inline CsvReport cmd_voronovskaja(const ExperimentConfig& c) {
    CsvReport r;
    if (c.check == "limit") {
        r.header = {"case", "n", "lambda", "value", "reference", "pass"};
        auto emit = [&](const std::string& name, int n, double l, double v, double ref, bool ok) {
            RowBuilder b;
            b << name << n << l << v << ref << ok;
            r.rows.push_back(b.take());
        };
        std::vector<FunctionHandle> quadratics;
        for (const char* name : {"const1", "id", "square"}) quadratics.push_back(find_function(name));
        quadratics.push_back({"quadratic_3_m2_1", [](double x) { return 3 * x * x - 2 * x + 1; },
                              [](double x) { return 6 * x - 2; }, [](double) { return 6.0; }});
        double worst = 0.0;
        const auto grid = unit_grid(101);
        for (const auto& f : quadratics)
            for (int n : {2, 3, 5, 10, 25, 50, 200})
                for (double l : detail::standard_lambdas()) {
                    double w = 0.0;
                    for (double x : grid)
                        w = std::max(w, std::abs(voronovskaja_residual(OperatorSpec{n, l}, f, x)));
                    worst = std::max(worst, w);
                    emit(f.name + ":max_abs_residual", n, l, w, 1e-12, w <= 1e-12);
                }
        r.add_summary(worst <= 1e-12, "voronovskaja.quadratics",
                      detail::fmt_max("max_abs_residual", worst, "<=", 1e-12));

        const auto& e = find_function("exp");
        const double lim = voronovskaja_limit(OperatorSpec{2000, 1.0}, e, 0.5);
        const bool lim_ok = std::abs(lim - 0.20609) <= 0.05;
        emit("exp:n_times_error", 2000, 1.0, lim, 0.20609, lim_ok);
        r.add_summary(lim_ok, "voronovskaja.exp_limit",
                      "n(Bf-f)=" + format_real(lim) + " within 0.05 of 0.20609");

        const double r128 = 128.0 * std::abs(voronovskaja_residual(OperatorSpec{128, 1.0}, e, 0.5));
        const double r1024 =
            1024.0 * std::abs(voronovskaja_residual(OperatorSpec{1024, 1.0}, e, 0.5));
        const bool decay = r1024 < 0.25 * r128;
        emit("exp:n_times_residual", 128, 1.0, r128, r128, true);
        emit("exp:n_times_residual", 1024, 1.0, r1024, 0.25 * r128, decay);
        r.add_summary(decay, "voronovskaja.decay",
                      "ratio=" + format_real(r1024 / r128) + " < 0.25");
        return r;
    }

    const auto& f = find_function(c.fn);
    if (!f.has_second())
        throw usage_error("voronovskaja needs a function with f'': " + c.fn + " has none");
    r.header = {"n", "B_f", "n_times_error", "target", "residual", "n_times_residual", "rhs"};
    const double target = voronovskaja_target(f, c.x);
    std::vector<double> scaled;
    for (int n : c.ladder) {
        const OperatorSpec spec{n, c.lambda};
        const double res = voronovskaja_residual(spec, f, c.x);
        scaled.push_back(std::abs(n * res));
        RowBuilder b;
        b << n << apply(spec, f, c.x) << voronovskaja_limit(spec, f, c.x) << target << res
          << n * res << voronovskaja_rhs(spec, f, c.x, 1.0, c.resolution);
        r.rows.push_back(b.take());
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < scaled.size(); ++i) decreasing &= scaled[i] < scaled[i - 1];
    r.add_summary(decreasing, "voronovskaja.decay", "|n R_n| strictly decreasing along the ladder");
    return r;
}

// ---------------------------------------------------------------- statistical

namespace detail {

inline StatLimitOptions stat_options(const std::vector<int>& ladder) {
    StatLimitOptions o;
    o.ladder = to_ladder(ladder);
    return o;
}

inline void append_stat_rows(CsvReport& r, const std::string& label, const StatLimitReport& s) {
    for (std::size_t e = 0; e < s.epsilons.size(); ++e)
        for (std::size_t l = 0; l < s.ladder.size(); ++l) {
            RowBuilder b;
            b << label << "density" << s.epsilons[e] << s.ladder[l] << s.density[e][l] << "";
            r.rows.push_back(b.take());
        }
    for (std::size_t l = 0; l < s.ladder.size(); ++l) {
        RowBuilder b;
        b << label << "tail_sup" << "" << s.ladder[l] << s.tail_sup[l] << s.tail_argmax[l];
        r.rows.push_back(b.take());
    }
}

inline const std::vector<std::string>& stat_header() {
    static const std::vector<std::string> h = {"series", "quantity", "epsilon",
                                               "n",      "value",    "argmax"};
    return h;
}

inline SequenceFn find_sequence(std::string_view name) {
    for (const auto& s : sequence_catalog())
        if (s.name == name) return s.term;
    throw usage_error("unknown sequence '" + std::string(name) + "'");
}

} // namespace detail

inline CsvReport cmd_statistical(const ExperimentConfig& c) {
    CsvReport r;
    r.header = detail::stat_header();
    const auto a = with_weight_preset(matrix_preset(c.matrix), c.weights);
    const auto grid = unit_grid(c.grid);

    if (c.check == "error_sequence") {
        const auto opt = detail::stat_options({100, 1000, 10000});
        const auto reg = check_regularity(a);
        r.add_summary(reg.regular, "statistical.regularity",
                      "row_sum_deviation=" + format_real(reg.max_row_sum_deviation) +
                          " max_column_entry=" + format_real(reg.max_column_entry));

        const auto err = statistical_error_experiment(1.0, find_function("exp"), a, grid, opt);
        detail::append_stat_rows(r, "error_exp", err.stat);
        r.add_summary(err.stat.verdict, "statistical.error_sequence",
                      "e_10000=" + format_real(err.errors.back()));

        const auto spike = a_stat_limit(a, detail::find_sequence("spike_squares"), 0.0, opt);
        detail::append_stat_rows(r, "spike_squares", spike);
        double final_density = 0.0;
        for (const auto& traj : spike.density) final_density = std::max(final_density, traj.back());
        const bool witness = std::all_of(spike.tail_sup.begin(), spike.tail_sup.end(),
                                         [](double v) { return v == 1.0; });
        r.add_summary(spike.verdict, "statistical.spike_squares_verdict", "limit 0");
        r.add_summary(final_density <= 0.011, "statistical.spike_squares_density",
                      detail::fmt_max("density_at_10000", final_density, "<=", 0.011));
        r.add_summary(witness, "statistical.nonconvergence_witness",
                      "tail sup equals 1 at every ladder point");
        return r;
    }

    if (c.check == "perturbed_voronovskaja") {
        const auto opt = detail::stat_options({100, 1000, 10000});
        const auto& f = find_function("exp");
        const auto rep = statistical_voronovskaja_experiment(
            1.0, f, 0.5, detail::find_sequence("spike_squares"), a, opt);
        detail::append_stat_rows(r, "perturbed_voronovskaja", rep.stat);
        r.add_summary(rep.stat.verdict, "statistical.voronovskaja_verdict",
                      "limit=" + format_real(rep.target));
        r.add_summary(std::abs(rep.target - 0.20609) <= 0.05, "statistical.voronovskaja_limit",
                      "target=" + format_real(rep.target) + " within 0.05 of 0.20609");
        std::size_t witness = 0;
        for (std::size_t k = 1001; k < rep.scaled.size(); ++k)
            if (is_perfect_square(k) && std::abs(rep.scaled[k]) > 1e3) {
                witness = k;
                break;
            }
        if (witness) {
            RowBuilder b;
            b << "perturbed_voronovskaja" << "witness" << "" << witness << rep.scaled[witness]
              << witness;
            r.rows.push_back(b.take());
        }
        r.add_summary(witness != 0, "statistical.voronovskaja_witness",
                      witness ? "|y_" + std::to_string(witness) +
                                    "|=" + format_real(std::abs(rep.scaled[witness])) + " > 1000"
                              : std::string("no square index above 1000 with |y| > 1000"));
        return r;
    }

    const auto opt = detail::stat_options(c.ladder);
    if (!c.seq.empty()) {
        const auto rep = a_stat_limit(a, detail::find_sequence(c.seq), 0.0, opt);
        detail::append_stat_rows(r, c.seq, rep);
        r.add_summary(rep.verdict, "statistical.verdict", c.seq + " has A-statistical limit 0");
        return r;
    }
    const auto& f = find_function(c.fn);
    const auto rep = statistical_error_experiment(c.lambda, f, a, grid, opt);
    detail::append_stat_rows(r, "error_" + c.fn, rep.stat);
    r.add_summary(rep.stat.verdict, "statistical.verdict",
                  "sup-error sequence of " + c.fn + " has A-statistical limit 0");
    return r;
}

// ---------------------------------------------------------------- bivariate

namespace detail {

/// Wide layout: one row per degree with the four columns side by side.
/// Long layout: one row per (degree, column) in the shared bivariate header.
inline void bivariate_volkov(CsvReport& r, double lambda, const std::vector<int>& ladder,
                             int points, bool wide) {
    const auto t = volkov_check(lambda, ladder, points);
    for (std::size_t i = 0; i < t.ladder.size(); ++i) {
        if (wide) {
            RowBuilder b;
            b << t.ladder[i];
            for (int col = 0; col < 4; ++col) b << t.columns[col][i];
            r.rows.push_back(b.take());
            continue;
        }
        for (int col = 0; col < 4; ++col) {
            RowBuilder b;
            b << "volkov" << volkov_column_name(col) << t.ladder[i] << t.ladder[i] << "" << ""
              << t.columns[col][i] << "" << "" << "";
            r.rows.push_back(b.take());
        }
    }
    for (int col = 0; col < 4; ++col)
        r.add_summary(t.decreasing[col] && t.within_rate[col],
                      std::string("volkov.") + volkov_column_name(col),
                      "last=" + format_real(t.columns[col].back()) + " decreasing=" +
                          format_bool(t.decreasing[col]));
}

inline void bivariate_bound_table(CsvReport& r, int n, int m, double lambda, int points, int resolution) {
    const BivariateSpec spec{n, m, lambda};
    const auto grid = unit_grid(points);
    std::size_t fails = 0, total = 0;
    for (const auto& f : bivariate_catalog()) {
        const BivariateModulus mod(f, resolution);
        for (double x : grid)
            for (double y : grid) {
                const auto rep = bound_bivariate(spec, f, mod, x, y);
                ++total;
                if (!rep.holds) ++fails;
                RowBuilder b;
                b << "bound" << f.name << n << m << x << y << rep.error << rep.bound
                  << rep.holds << "";
                r.rows.push_back(b.take());
            }
    }
    r.add_summary(fails == 0, "bivariate.bound",
                  std::to_string(fails) + " violations in " + std::to_string(total) + " rows");
}

inline void bivariate_rho(CsvReport& r, double lambda, const std::vector<int>& ladder, int points) {
    bool all = true;
    for (const auto& f : bivariate_catalog()) {
        if (f.name == "const1") continue;
        double prev = 0.0;
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            const double v = rho_norm_error(BivariateSpec{ladder[i], ladder[i], lambda}, f, points).value;
            if (i && !(v < prev)) all = false;
            prev = v;
            RowBuilder b;
            b << "rho_norm" << f.name << ladder[i] << ladder[i] << "" << "" << v << "" << ""
              << "";
            r.rows.push_back(b.take());
        }
    }
    r.add_summary(all, "bivariate.rho_norm", "strictly decreasing for every nonconstant function");
}

} // namespace detail

inline CsvReport cmd_bivariate(const ExperimentConfig& c) {
    CsvReport r;
    if (c.check == "volkov") {
        r.header = {"n", "e00", "e10", "e01", "e20_plus_e02"};
        detail::bivariate_volkov(r, c.lambda, c.ladder, c.grid, true);
        return r;
    }
    const std::vector<std::string> header = {"table", "fn", "n", "m", "x",
                                             "y",     "error_or_norm", "bound", "holds", "extra"};
    if (c.check == "bound") {
        r.header = header;
        detail::bivariate_bound_table(r, c.n, c.m_or_n(), c.lambda, c.grid, c.resolution);
        return r;
    }
    if (c.check == "rho") {
        r.header = header;
        detail::bivariate_rho(r, c.lambda, c.ladder, c.grid);
        return r;
    }
    if (c.check == "acceptance") {
        r.header = header;
        detail::bivariate_volkov(r, 1.0, {10, 20, 40, 80}, 11, false);

        const auto e2 = find_bivariate_function("e20_plus_e02");
        const double at100 = sup_error2(BivariateSpec{100, 100, 1.0}, e2, 11);
        {
            RowBuilder b;
            b << "volkov_e20_plus_e02" << e2.name << 100 << 100 << "" << "" << at100 << 0.05
              << (at100 <= 0.05) << "";
            r.rows.push_back(b.take());
        }
        r.add_summary(at100 <= 0.05, "volkov.e20_plus_e02_at_100",
                      detail::fmt_max("error", at100, "<=", 0.05));
        detail::bivariate_bound_table(r, 20, 20, 1.0, 11, c.resolution);
        detail::bivariate_rho(r, 1.0, {10, 40, 160}, 11);
        return r;
    }

    r.header = {"x", "y", "f", "B_f", "error", "rho_error", "bound", "holds"};
    const auto& f = find_bivariate_function(c.fn);
    const BivariateSpec spec{c.n, c.m_or_n(), c.lambda};
    const BivariateModulus mod(f, c.resolution);
    bool all = true;
    for (double x : unit_grid(c.grid))
        for (double y : unit_grid(c.grid)) {
            const auto rep = bound_bivariate(spec, f, mod, x, y);
            all &= rep.holds;
            RowBuilder b;
            b << x << y << f(x, y) << apply2(spec, f, x, y) << rep.error
              << rep.error / rho_weight(x, y) << rep.bound << rep.holds;
            r.rows.push_back(b.take());
        }
    r.add_summary(all, "bivariate.bound", "bound holds at every grid point");
    return r;
}

/// Dispatches on config.command; the config echo becomes the first comment.
inline CsvReport run_experiment(const ExperimentConfig& raw) {
    const ExperimentConfig c = validate(raw);
    CsvReport r;
    if (c.command == "eval") r = cmd_eval(c);
    else if (c.command == "moments") r = cmd_moments(c);
    else if (c.command == "converge") r = cmd_converge(c);
    else if (c.command == "voronovskaja") r = cmd_voronovskaja(c);
    else if (c.command == "statistical") r = cmd_statistical(c);
    else r = cmd_bivariate(c);
    r.comments.insert(r.comments.begin(), config_echo(c));
    return r;
}

} // namespace lbern
