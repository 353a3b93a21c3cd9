// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// criterion fails. Reference values come from the long-double direct-sum
// oracles below, never from the closed forms they are compared with.
#include <lbern/bivariate.hpp>
#include <lbern/bounds.hpp>
#include <lbern/smoothness.hpp>
#include <lbern/summability.hpp>
#include <lbern/univariate.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifndef LBERN_CLI_PATH
#define LBERN_CLI_PATH "lbern"
#endif

namespace {

namespace tol {
constexpr double moment = 1e-10;
constexpr double partition = 1e-12;
constexpr double reduction = 1e-14;
constexpr double separable = 1e-12;
constexpr double quadratic_residual = 1e-12;
constexpr double fixture = 1e-15;
constexpr double limit_band = 0.05;
constexpr double decay_ratio = 0.25;
constexpr double spike_density = 0.011;
constexpr double witness = 1e3;
constexpr double volkov_sum = 0.05;
constexpr double modulus = 0.05;
constexpr double moment_seconds = 10.0;
constexpr double suite_seconds = 120.0;
} // namespace tol

constexpr double kVoronovskajaReference = 0.20609;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Direct-definition bases in long double: explicit binomials and powers,
// b_{n+1,i} evaluated from its own formula instead of by degree raising.
long double classical(int n, int i, long double x) {
    if (i < 0 || i > n) return 0.0L;
    long double c = 1.0L;
    for (int k = 1; k <= i; ++k) c = c * (n - i + k) / k;
    return c * std::pow(x, static_cast<long double>(i)) *
           std::pow(1.0L - x, static_cast<long double>(n - i));
}

std::vector<long double> oracle_basis(int n, long double l, long double x) {
    std::vector<long double> b(static_cast<std::size_t>(n) + 1);
    const long double nn = n;
    for (int i = 0; i <= n; ++i) {
        long double v = classical(n, i, x);
        if (i == 0) v -= l / (nn + 1) * classical(n + 1, 1, x);
        else if (i == n) v -= l / (nn + 1) * classical(n + 1, n, x);
        else
            v += l * ((nn - 2 * i + 1) / (nn * nn - 1) * classical(n + 1, i, x) -
                      (nn - 2 * i - 1) / (nn * nn - 1) * classical(n + 1, i + 1, x));
        b[i] = v;
    }
    return b;
}

template <typename F>
long double oracle_apply(int n, long double l, const F& f, long double x) {
    const auto b = oracle_basis(n, l, x);
    long double s = 0.0L;
    for (int i = 0; i <= n; ++i) s += b[i] * f(static_cast<long double>(i) / n);
    return s;
}

long double oracle_moment(int n, long double l, int j, long double x) {
    return oracle_apply(n, l, [j](long double t) { return std::pow(t, static_cast<long double>(j)); }, x);
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const std::vector<int> kDegrees{2, 3, 5, 10, 25, 50};
const std::vector<double> kLambdas{-1.0, -0.5, 0.0, 0.5, 1.0};

Outcome criterion_moments() {
    const auto t0 = Clock::now();
    const auto grid = lbern::unit_grid(101);
    double worst = 0.0;
    for (int n : kDegrees)
        for (double l : kLambdas)
            for (double x : grid)
                for (int j = 0; j <= 4; ++j) {
                    const double want = static_cast<double>(oracle_moment(n, l, j, x));
                    worst = std::max(worst, std::abs(lbern::raw_moment({n, l}, j, x) - want));
                }
    double worst2 = 0.0;
    using lbern::Monomial2;
    const auto g11 = lbern::unit_grid(11);
    for (int n : {2, 3, 5, 10})
        for (int m : {2, 3, 5, 10})
            for (double l : kLambdas)
                for (double x : g11)
                    for (double y : g11) {
                        const lbern::BivariateSpec spec{n, m, l};
                        const long double sx = oracle_moment(n, l, 1, x);
                        const long double sx2 = oracle_moment(n, l, 2, x);
                        const long double ty = oracle_moment(m, l, 1, y);
                        const long double ty2 = oracle_moment(m, l, 2, y);
                        const std::pair<Monomial2, long double> cases[] = {
                            {Monomial2::one, oracle_moment(n, l, 0, x) * oracle_moment(m, l, 0, y)},
                            {Monomial2::s, sx * oracle_moment(m, l, 0, y)},
                            {Monomial2::t, oracle_moment(n, l, 0, x) * ty},
                            {Monomial2::s2, sx2 * oracle_moment(m, l, 0, y)},
                            {Monomial2::t2, oracle_moment(n, l, 0, x) * ty2}};
                        for (const auto& [which, want] : cases)
                            worst2 = std::max(worst2, std::abs(lbern::raw_moment2(spec, which, x, y) -
                                                               static_cast<double>(want)));
                    }
    const double secs = seconds_since(t0);
    return {worst <= tol::moment && worst2 <= tol::moment && secs < tol::moment_seconds,
            "univariate " + num(worst) + ", bivariate " + num(worst2) + ", " + num(secs) + " s"};
}

Outcome criterion_structure() {
    const auto grid = lbern::unit_grid(101);
    double partition = 0.0;
    bool nonnegative = true;
    std::vector<int> degrees;
    for (int n = 2; n <= 200; ++n) degrees.push_back(n);
    degrees.push_back(1000);
    for (int n : degrees)
        for (int k = 0; k <= 10; ++k) {
            const double l = -1.0 + 0.2 * k;
            for (double x : grid) {
                double s = 0.0;
                for (double v : lbern::lambda_basis(n, l, x).values) {
                    s += v;
                    nonnegative &= v >= -1e-15;
                }
                partition = std::max(partition, std::abs(s - 1.0));
            }
        }

    bool endpoints = true;
    for (const auto& f : lbern::univariate_catalog())
        for (int n : kDegrees)
            for (double l : kLambdas) {
                endpoints &= lbern::apply({n, l}, f, 0.0) == f(0.0);
                endpoints &= lbern::apply({n, l}, f, 1.0) == f(1.0);
            }

    double reduction = 0.0;
    for (int n = 2; n <= 200; ++n)
        for (double x : grid) {
            const auto b = lbern::lambda_basis(n, 0.0, x).values;
            for (int i = 0; i <= n; ++i)
                reduction = std::max(reduction, std::abs(b[i] - static_cast<double>(classical(n, i, x))));
        }

    double separable = 0.0;
    const auto g = [](double s) { return std::exp(s); };
    const auto h = [](double t) { return std::sin(M_PI * t); };
    for (int n : {2, 5, 10, 25})
        for (double l : kLambdas)
            for (double x : lbern::unit_grid(11))
                for (double y : lbern::unit_grid(11)) {
                    const lbern::BivariateSpec spec{n, n + 3, l};
                    const double lhs =
                        lbern::apply2(spec, [&](double s, double t) { return g(s) * h(t); }, x, y);
                    const double rhs = lbern::apply(spec.x_operator(), g, x) *
                                       lbern::apply(spec.y_operator(), h, y);
                    separable = std::max(separable, std::abs(lhs - rhs));
                }
    return {partition <= tol::partition && nonnegative && endpoints &&
                reduction <= tol::reduction && separable <= tol::separable,
            "partition " + num(partition) + ", nonnegative " + (nonnegative ? "yes" : "no") +
                ", endpoints " + (endpoints ? "exact" : "inexact") + ", reduction " +
                num(reduction) + ", separable " + num(separable)};
}

Outcome criterion_lipschitz() {
    const lbern::LipschitzSpec lip{std::sqrt(2.0), 1.0, 0.0, 1.0};
    const auto id = [](double t) { return t; };
    std::size_t fails = 0;
    for (int n : {2, 10, 100})
        for (double l : {-1.0, 0.0, 1.0})
            for (int i = 1; i <= 99; ++i)
                if (!lbern::bound_lipschitz({n, l}, id, lip, i / 99.0).holds) ++fails;
    const auto fx = lbern::bound_lipschitz({2, 1.0}, id, lip, 0.25);
    const double oracle = static_cast<double>(
        std::abs(oracle_apply(2, 1.0L, [](long double t) { return t; }, 0.25L) - 0.25L));
    const bool fixture = std::abs(oracle - 0.046875) <= tol::fixture &&
                         std::abs(fx.error - oracle) <= tol::fixture && fx.bound > fx.error;
    return {fails == 0 && fixture, std::to_string(fails) + " violations, fixture error " +
                                       num(fx.error) + " bound " + num(fx.bound)};
}

Outcome criterion_bounds() {
    std::string failures;
    std::size_t rows = 0;
    const auto points = lbern::unit_grid(21);
    for (const auto& f : lbern::univariate_catalog())
        for (int n : {10, 50, 200})
            for (std::size_t i = 1; i + 1 < points.size(); ++i) {
                const double x = points[i];
                const lbern::OperatorSpec spec{n, 1.0};
                ++rows;
                if (!lbern::bound_global(spec, f, x, lbern::dt_phi, lbern::dt_phi).holds)
                    failures += " global:" + f.name + ":n" + std::to_string(n) + ":x" + num(x);
                if (f.has_first() && !lbern::bound_c1(spec, f, x).holds)
                    failures += " c1:" + f.name + ":n" + std::to_string(n) + ":x" + num(x);
            }
    return {failures.empty(), std::to_string(rows) + " points" +
                                  (failures.empty() ? std::string(", no violations") : failures)};
}

Outcome criterion_voronovskaja() {
    std::vector<lbern::FunctionHandle> quadratics;
    for (const char* name : {"const1", "id", "square"}) quadratics.push_back(lbern::find_function(name));
    quadratics.push_back({"q", [](double x) { return 3 * x * x - 2 * x + 1; },
                          [](double x) { return 6 * x - 2; }, [](double) { return 6.0; }});
    double worst = 0.0;
    for (const auto& f : quadratics)
        for (int n : {2, 3, 5, 10, 25, 50, 200})
            for (double l : kLambdas)
                for (double x : lbern::unit_grid(101))
                    worst = std::max(worst, std::abs(lbern::voronovskaja_residual({n, l}, f, x)));

    const auto& e = lbern::find_function("exp");
    const double lim = lbern::voronovskaja_limit({2000, 1.0}, e, 0.5);
    const double oracle = static_cast<double>(
        2000.0L * (oracle_apply(2000, 1.0L, [](long double t) { return std::exp(t); }, 0.5L) -
                   std::exp(0.5L)));
    const double r128 = 128.0 * std::abs(lbern::voronovskaja_residual({128, 1.0}, e, 0.5));
    const double r1024 = 1024.0 * std::abs(lbern::voronovskaja_residual({1024, 1.0}, e, 0.5));
    const bool ok = worst <= tol::quadratic_residual &&
                    std::abs(lim - kVoronovskajaReference) <= tol::limit_band &&
                    std::abs(lim - oracle) <= 1e-9 && r1024 < tol::decay_ratio * r128;
    return {ok, "quadratic residual " + num(worst) + ", n(Bf-f) " + num(lim) + " (oracle " +
                    num(oracle) + "), decay ratio " + num(r1024 / r128)};
}

Outcome criterion_statistical() {
    const auto a = lbern::cesaro_matrix();
    const auto err = lbern::statistical_error_experiment(1.0, lbern::find_function("exp"), a,
                                                         lbern::unit_grid(101));
    const auto spike = lbern::a_stat_limit(
        a, [](std::size_t k) { return lbern::is_perfect_square(k) ? 1.0 : 0.0; }, 0.0);
    const double n = 10000.0;
    const double oracle = (std::floor(std::sqrt(n)) + 1.0) / (n + 1.0);
    double density = 0.0;
    bool matches = true;
    for (const auto& traj : spike.density) {
        density = std::max(density, traj.back());
        matches &= std::abs(traj.back() - oracle) <= 1e-12;
    }
    bool witness = true;
    for (double s : spike.tail_sup) witness &= s == 1.0;
    return {err.stat.verdict && spike.verdict && density <= tol::spike_density && matches && witness,
            std::string("error verdict ") + (err.stat.verdict ? "true" : "false") +
                ", spike verdict " + (spike.verdict ? "true" : "false") + ", density " +
                num(density) + " (oracle " + num(oracle) + "), tail sup 1 " +
                (witness ? "everywhere" : "not everywhere")};
}

Outcome criterion_statistical_voronovskaja() {
    const auto rep = lbern::statistical_voronovskaja_experiment(
        1.0, lbern::find_function("exp"), 0.5,
        [](std::size_t k) { return lbern::is_perfect_square(k) ? 1.0 : 0.0; },
        lbern::cesaro_matrix());
    std::size_t witness = 0;
    for (std::size_t k = 1001; k < rep.scaled.size() && !witness; ++k)
        if (lbern::is_perfect_square(k) && std::abs(rep.scaled[k]) > tol::witness) witness = k;
    const bool ok = rep.stat.verdict &&
                    std::abs(rep.target - kVoronovskajaReference) <= tol::limit_band && witness;
    return {ok, std::string("verdict ") + (rep.stat.verdict ? "true" : "false") + ", limit " +
                    num(rep.target) + ", witness index " + std::to_string(witness) +
                    (witness ? " |y|=" + num(std::abs(rep.scaled[witness])) : "")};
}

Outcome criterion_bivariate() {
    const auto t = lbern::volkov_check(1.0, {10, 20, 40, 80}, 11);
    bool strict = true;
    for (const auto& col : t.columns)
        for (std::size_t i = 1; i < col.size(); ++i) strict &= col[i] < col[i - 1] || col[i] <= 1e-14;
    const double e100 = lbern::sup_error2(lbern::BivariateSpec{100, 100, 1.0},
                                          [](double s, double u) { return s * s + u * u; }, 11);

    std::size_t fails = 0, rows = 0;
    const lbern::BivariateSpec spec{20, 20, 1.0};
    for (const auto& f : lbern::bivariate_catalog()) {
        const lbern::BivariateModulus mod(f, lbern::default_resolution());
        for (double x : lbern::unit_grid(11))
            for (double y : lbern::unit_grid(11)) {
                ++rows;
                if (!lbern::bound_bivariate(spec, f, mod, x, y).holds) ++fails;
            }
    }

    bool rho = true;
    for (const auto& f : lbern::bivariate_catalog()) {
        if (f.name == "const1") continue;
        double prev = INFINITY;
        for (int n : {10, 40, 160}) {
            const double v = lbern::rho_norm_error(lbern::BivariateSpec{n, n, 1.0}, f, 11).value;
            rho &= v < prev;
            prev = v;
        }
    }
    return {strict && e100 <= tol::volkov_sum && fails == 0 && rho,
            std::string("volkov decreasing ") + (strict ? "yes" : "no") + ", e20+e02 at 100 " +
                num(e100) + ", bound violations " + std::to_string(fails) + "/" +
                std::to_string(rows) + ", rho decreasing " + (rho ? "yes" : "no")};
}

// Brute-force sup over a dense uniform grid of (x, h) pairs; the estimators
// under test use their own refinement and default resolution.
template <typename Diff>
double dense_sup(int points, double delta, const Diff& diff) {
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / (points - 1);
        for (int j = 1; j <= 200; ++j) best = std::max(best, diff(x, delta * j / 200.0));
    }
    return best;
}

Outcome criterion_moduli() {
    const auto id = [](double x) { return x; };
    const auto sq = [](double x) { return x * x; };
    const auto phi = [](double x) { return std::sqrt(x * (1.0 - x)); };
    double worst = 0.0;
    for (double d : {0.05, 0.1, 0.2, 0.5}) {
        const double first_dense = dense_sup(2001, d, [](double x, double h) {
            return x + h <= 1.0 ? h : 0.0;
        });
        const double second_dense = dense_sup(2001, d, [&](double x, double h) {
            const double s = h * phi(x);
            return x - s >= 0.0 && x + s <= 1.0 ? std::abs(sq(x + s) - 2 * sq(x) + sq(x - s)) : 0.0;
        });
        const double mid_dense = dense_sup(2001, d, [&](double x, double h) {
            const double s = h * phi(x) / 2.0;
            return x - s >= 0.0 && x + s <= 1.0 ? std::abs(id(x + s) - id(x - s)) : 0.0;
        });
        const double pairs[][2] = {
            {lbern::modulus_first(id, d).value, first_dense},
            {lbern::modulus_dt_second(sq, d).value, second_dense},
            {lbern::modulus_dt_midpoint(id, d).value, mid_dense},
        };
        for (const auto& [est, oracle] : pairs) worst = std::max(worst, std::abs(est - oracle) / oracle);
    }
    return {worst <= tol::modulus, "max relative gap " + num(worst)};
}

Outcome criterion_cli() {
    const char* invocations[] = {
        "moments --check oracle",
        "eval --check identities",
        "converge --check lipschitz",
        "converge --check bounds",
        "voronovskaja --check limit",
        "statistical --check error_sequence",
        "statistical --check perturbed_voronovskaja",
        "bivariate --check acceptance",
        "converge --check moduli",
    };
    const auto t0 = Clock::now();
    std::string failed;
    for (const char* args : invocations) {
        const std::string cmd = std::string("\"") + LBERN_CLI_PATH + "\" " + args + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) failed += std::string(" [") + args + "]";
    }
    const double secs = seconds_since(t0);
    return {failed.empty() && secs < tol::suite_seconds,
            std::to_string(std::size(invocations)) + " invocations in " + num(secs) + " s" +
                (failed.empty() ? std::string(", all exit 0") : ", nonzero:" + failed)};
}

} // namespace

int main() {
    const std::function<Outcome()> criteria[] = {
        criterion_moments,   criterion_structure,   criterion_lipschitz,
        criterion_bounds,    criterion_voronovskaja, criterion_statistical,
        criterion_statistical_voronovskaja, criterion_bivariate, criterion_moduli,
        criterion_cli,
    };
    int failures = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        Outcome o{false, ""};
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu: %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
