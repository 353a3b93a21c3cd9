#include <lbern/exact.hpp>
#include <lbern/function.hpp>
#include <lbern/univariate.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace {

using lbern::OperatorSpec;

TEST(Apply, ConstantIsReproduced) {
    EXPECT_NEAR(lbern::apply(OperatorSpec{10, 0.7}, [](double) { return 1.0; }, 0.33), 1.0, 1e-15);
}

TEST(Apply, InterpolatesAtEndpoints) {
    const auto& f = lbern::find_function("exp");
    EXPECT_EQ(lbern::apply(OperatorSpec{7, -0.4}, f, 0.0), 1.0);
    EXPECT_EQ(lbern::apply(OperatorSpec{7, -0.4}, f, 1.0), std::exp(1.0));
}

TEST(Apply, IdentityFixture) {
    EXPECT_NEAR(lbern::apply(OperatorSpec{2, 1.0}, [](double t) { return t; }, 0.25), 0.296875,
                1e-15);
}

TEST(Apply, OnlyCallsNodes) {
    const int n = 9;
    lbern::apply(OperatorSpec{n, 0.5}, [&](double t) {
        const double k = t * n;
        EXPECT_NEAR(k, std::round(k), 1e-12);
        return t;
    }, 0.4);
}

TEST(SampledOperator, MatchesBasisRoute) {
    for (const auto& f : lbern::univariate_catalog())
        for (int n : {2, 3, 10, 57, 400})
            for (double l : {-1.0, -0.2, 0.0, 0.8, 1.0}) {
                const OperatorSpec spec{n, l};
                const lbern::SampledOperator op(spec, f);
                for (double x : lbern::unit_grid(23))
                    EXPECT_NEAR(op(x), lbern::apply(spec, f, x), 1e-13)
                        << f.name << " n=" << n << " l=" << l << " x=" << x;
            }
}

TEST(SampledOperator, RejectsWrongSampleCount) {
    EXPECT_THROW(lbern::SampledOperator(OperatorSpec{4, 0.0}, std::vector<double>(4)),
                 std::invalid_argument);
}

TEST(RawMoment, Fixtures) {
    EXPECT_EQ(lbern::raw_moment(OperatorSpec{5, 0.9}, 0, 0.6), 1.0);
    EXPECT_NEAR(lbern::raw_moment(OperatorSpec{2, 1.0}, 1, 0.5), 0.5, 1e-15);
    EXPECT_NEAR(lbern::raw_moment(OperatorSpec{2, 1.0}, 1, 0.25), 0.296875, 1e-12);
    EXPECT_NEAR(lbern::raw_moment_oracle(OperatorSpec{2, 1.0}, 1, 0.25), 0.296875, 1e-15);
    EXPECT_NEAR(lbern::raw_moment_oracle(OperatorSpec{3, 0.0}, 2, 0.5), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(lbern::raw_moment(OperatorSpec{4, -1.0}, 4, 0.7),
                lbern::raw_moment_oracle(OperatorSpec{4, -1.0}, 4, 0.7), 1e-12);
}

TEST(RawMoment, MatchesDirectSumOnStandardGrid) {
    double worst = 0.0;
    for (int n : {2, 3, 5, 10, 25, 50})
        for (double l : {-1.0, -0.5, 0.0, 0.5, 1.0})
            for (double x : lbern::unit_grid(101))
                for (int j = 0; j <= 4; ++j) {
                    const OperatorSpec spec{n, l};
                    worst = std::max(worst, std::abs(lbern::raw_moment(spec, j, x) -
                                                     lbern::raw_moment_oracle(spec, j, x)));
                }
    EXPECT_LE(worst, 1e-10);
}

TEST(RawMoment, MatchesExactRationalSum) {
    using lbern::exact::Rational;
    for (int n : {2, 3, 6, 11})
        for (int lnum : {-4, -1, 0, 3, 4})
            for (int j = 0; j <= 4; ++j) {
                const Rational l(lnum, 4);
                const Rational x(3, 8);
                const double want = lbern::exact::to_double(lbern::exact::raw_moment(n, l, j, x));
                EXPECT_NEAR(lbern::raw_moment(OperatorSpec{n, lnum / 4.0}, j, 0.375), want, 1e-14)
                    << "n=" << n << " lambda=" << lnum / 4.0 << " j=" << j;
            }
}

TEST(RawMoment, PrintedHigherBracketsDisagreeWithDirectSum) {
    const OperatorSpec spec{5, 1.0};
    const double x = 0.3;
    for (int j : {0, 1, 2})
        EXPECT_EQ(lbern::raw_moment(spec, j, x, lbern::MomentForm::kAsPrinted),
                  lbern::raw_moment(spec, j, x));
    for (int j : {3, 4}) {
        const double printed = lbern::raw_moment(spec, j, x, lbern::MomentForm::kAsPrinted);
        EXPECT_GT(std::abs(printed - lbern::raw_moment_oracle(spec, j, x)), 1e-4) << "j=" << j;
    }
    // At lambda = 0 the lambda-brackets drop out and both forms agree.
    const OperatorSpec classical{5, 0.0};
    EXPECT_EQ(lbern::raw_moment(classical, 4, x, lbern::MomentForm::kAsPrinted),
              lbern::raw_moment(classical, 4, x));
}

TEST(RawMoment, RejectsUnsupportedOrder) {
    EXPECT_THROW(lbern::raw_moment(OperatorSpec{5, 0.0}, 5, 0.5), lbern::unsupported_order_error);
    EXPECT_THROW(lbern::raw_moment(OperatorSpec{5, 0.0}, -1, 0.5), lbern::unsupported_order_error);
    EXPECT_THROW(lbern::raw_moment_oracle(OperatorSpec{5, 0.0}, -1, 0.5),
                 lbern::unsupported_order_error);
    EXPECT_NO_THROW(lbern::raw_moment_oracle(OperatorSpec{5, 0.0}, 7, 0.5));
}

TEST(CentralMoments, Fixtures) {
    EXPECT_NEAR(lbern::central_moments(OperatorSpec{2, 1.0}, 0.25).beta, 0.046875, 1e-12);
    for (double l : {-1.0, 0.0, 1.0}) {
        const auto c = lbern::central_moments(OperatorSpec{7, l}, 0.0);
        EXPECT_NEAR(c.beta, 0.0, 1e-15);
        EXPECT_NEAR(c.alpha, 0.0, 1e-15);
    }
    EXPECT_NEAR(lbern::central_moments(OperatorSpec{10, 0.0}, 0.5).alpha, 0.025, 1e-15);
}

TEST(MomentSet, ConsistentWithCentralMoments) {
    const OperatorSpec spec{12, -0.6};
    const auto s = lbern::moment_set(spec, 0.4);
    const auto c = lbern::central_moments(spec, 0.4);
    EXPECT_EQ(s.m[0], 1.0);
    EXPECT_EQ(s.beta, c.beta);
    EXPECT_EQ(s.alpha, c.alpha);
}

TEST(SupError, Fixtures) {
    const auto grid = lbern::unit_grid(101);
    EXPECT_EQ(lbern::sup_error(OperatorSpec{13, 0.4}, [](double) { return 1.0; }, grid), 0.0);
    EXPECT_LE(lbern::sup_error(OperatorSpec{30, 0.0}, [](double t) { return t; }, grid), 1e-14);
    const auto& s = lbern::find_function("sinpi");
    EXPECT_LT(lbern::sup_error(OperatorSpec{100, 1.0}, s, grid),
              lbern::sup_error(OperatorSpec{10, 1.0}, s, grid));
}

TEST(SupError, ValidatesGrid) {
    const std::vector<double> empty;
    EXPECT_THROW(lbern::sup_error(OperatorSpec{3, 0.0}, [](double t) { return t; }, empty),
                 std::invalid_argument);
    const std::vector<double> bad = {0.5, 1.2};
    EXPECT_THROW(lbern::sup_error(OperatorSpec{3, 0.0}, [](double t) { return t; }, bad),
                 std::domain_error);
}

TEST(SupError, QuadraticDecaysLikeOneOverN) {
    const auto grid = lbern::unit_grid(101);
    const auto sq = [](double t) { return t * t; };
    for (double l : {-1.0, 0.0, 1.0})
        for (int n : {50, 100, 200}) {
            const double ratio = lbern::sup_error(OperatorSpec{2 * n, l}, sq, grid) /
                                 lbern::sup_error(OperatorSpec{n, l}, sq, grid);
            EXPECT_GE(ratio, 0.3);
            EXPECT_LE(ratio, 0.7);
        }
}

TEST(SupError, IdentityDecaysAtLeastAsFast) {
    const auto grid = lbern::unit_grid(101);
    const auto id = [](double t) { return t; };
    for (double l : {-1.0, 1.0})
        for (int n : {50, 100, 200}) {
            const double ratio = lbern::sup_error(OperatorSpec{2 * n, l}, id, grid) /
                                 lbern::sup_error(OperatorSpec{n, l}, id, grid);
            EXPECT_LE(ratio, 0.3);
            EXPECT_GE(ratio, 0.2);
        }
}

TEST(UnitGrid, EndsExactly) {
    const auto g = lbern::unit_grid(7);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_THROW(lbern::unit_grid(1), std::invalid_argument);
}

TEST(Catalog, UnknownNameListsOptions) {
    try {
        lbern::find_function("nosuch");
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("const1, id, square"), std::string::npos);
    }
}

TEST(Catalog, DerivativesMatchFiniteDifferences) {
    for (const auto& f : lbern::univariate_catalog()) {
        if (!f.has_first()) continue;
        for (double x : {0.2, 0.45, 0.8}) {
            const double h = 1e-6;
            EXPECT_NEAR(f.first(x), (f(x + h) - f(x - h)) / (2 * h), 1e-6) << f.name;
            EXPECT_NEAR(f.second(x), (f.first(x + h) - f.first(x - h)) / (2 * h), 1e-5) << f.name;
        }
    }
    EXPECT_THROW(lbern::find_function("abs_half").derivative(), lbern::missing_derivative_error);
}

} // namespace
