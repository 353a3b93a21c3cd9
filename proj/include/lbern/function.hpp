/**
 * @file function.hpp
 * @brief Type-erased real functions on [0,1] with optional analytic
 * derivatives, plus the named catalog used by the CLI.
 */
#pragma once

#include "core.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace lbern {

using RealFn = std::function<double(double)>;

/// A function on [0,1] with optional first and second derivatives.
struct FunctionHandle {
    std::string name;
    RealFn value;
    RealFn first;  ///< f', empty when f is not C^1 on [0,1]
    RealFn second; ///< f'', empty when f is not C^2 on [0,1]

    double operator()(double x) const { return value(x); }

    [[nodiscard]] bool has_first() const noexcept { return static_cast<bool>(first); }
    [[nodiscard]] bool has_second() const noexcept { return static_cast<bool>(second); }

    /// f' wrapped as a handle of its own (f'' becomes its derivative).
    [[nodiscard]] FunctionHandle derivative() const {
        if (!has_first()) throw missing_derivative_error(name + ": no first derivative");
        return {name + "'", first, second, {}};
    }
};

/// Handle without derivatives; enough for operators and moduli.
inline FunctionHandle make_function(std::string name, RealFn f) {
    return {std::move(name), std::move(f), {}, {}};
}

namespace detail {

inline std::vector<FunctionHandle> build_univariate_catalog() {
    using std::numbers::pi;
    auto zero = [](double) { return 0.0; };
    return {
        {"const1", [](double) { return 1.0; }, zero, zero},
        {"id", [](double x) { return x; }, [](double) { return 1.0; }, zero},
        {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
         [](double) { return 2.0; }},
        {"cube", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; },
         [](double x) { return 6.0 * x; }},
        {"quart", [](double x) { return x * x * x * x; },
         [](double x) { return 4.0 * x * x * x; }, [](double x) { return 12.0 * x * x; }},
        {"exp", [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
         [](double x) { return std::exp(x); }},
        {"sinpi", [](double x) { return std::sin(pi * x); },
         [](double x) { return pi * std::cos(pi * x); },
         [](double x) { return -pi * pi * std::sin(pi * x); }},
        // Not differentiable at 1/2 (abs_half) or at 0 (sqrt).
        {"abs_half", [](double x) { return std::abs(x - 0.5); }, {}, {}},
        {"sqrt", [](double x) { return std::sqrt(x); }, {}, {}},
        {"lip_id", [](double x) { return x; }, [](double) { return 1.0; }, zero},
    };
}

} // namespace detail

/// Catalog entries, in a fixed order: const1, id, square, cube, quart, exp,
/// sinpi, abs_half, sqrt, lip_id.
inline const std::vector<FunctionHandle>& univariate_catalog() {
    static const std::vector<FunctionHandle> catalog = detail::build_univariate_catalog();
    return catalog;
}

/// Comma-separated catalog names, for usage messages.
template <typename Catalog>
std::string catalog_names(const Catalog& catalog) {
    std::string out;
    for (const auto& entry : catalog) {
        if (!out.empty()) out += ", ";
        out += entry.name;
    }
    return out;
}

template <typename Catalog>
const auto& find_in_catalog(const Catalog& catalog, std::string_view name, const char* kind) {
    for (const auto& entry : catalog)
        if (entry.name == name) return entry;
    throw std::invalid_argument("unknown " + std::string(kind) + " '" + std::string(name) +
                                "'; valid options: " + catalog_names(catalog));
}

inline const FunctionHandle& find_function(std::string_view name) {
    return find_in_catalog(univariate_catalog(), name, "function");
}

} // namespace lbern
