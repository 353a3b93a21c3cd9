/**
 * @file core.hpp
 * @brief Strong types shared by every lbern module: degree, shape parameter,
 * operator specification, and the library's exception types.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace lbern {

/// Thrown when a quantity is only defined away from the point requested
/// (e.g. a bound whose weight vanishes at an endpoint).
class singularity_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Thrown when an operation needs f' or f'' and the handle carries neither.
class missing_derivative_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a closed form is requested for an order it does not cover.
class unsupported_order_error : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Shape parameter lambda of the modified Bezier basis; restricted to [-1, 1].
class ShapeParam {
  public:
    constexpr ShapeParam() = default;
    explicit ShapeParam(double lambda) : value_{lambda} {
        if (!(lambda >= -1.0 && lambda <= 1.0))
            throw std::domain_error("shape parameter lambda must lie in [-1, 1], got " +
                                    std::to_string(lambda));
    }
    [[nodiscard]] constexpr double value() const noexcept { return value_; }

  private:
    double value_ = 0.0;
};

/// Operator degree. The lambda-basis and the moment formulas divide by n - 1
/// and n^2 - 1, so n >= 2.
class Degree {
  public:
    explicit Degree(int n) : value_{n} {
        if (n < 2)
            throw std::domain_error("degree must be >= 2, got " + std::to_string(n));
    }
    [[nodiscard]] constexpr int value() const noexcept { return value_; }

  private:
    int value_ = 2;
};

/// One univariate lambda-Bernstein operator instance B_{n,lambda}.
struct OperatorSpec {
    Degree n;
    ShapeParam lambda;

    OperatorSpec(int degree, double shape) : n{degree}, lambda{shape} {}
    OperatorSpec(Degree degree, ShapeParam shape) : n{degree}, lambda{shape} {}

    [[nodiscard]] int degree() const noexcept { return n.value(); }
    [[nodiscard]] double shape() const noexcept { return lambda.value(); }
};

namespace detail {

inline void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(x));
}

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string(what) + " must be positive and finite, got " +
                                std::to_string(v));
}

} // namespace detail
} // namespace lbern
