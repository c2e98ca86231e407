#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/green_ball.hpp"
#include "oracles.hpp"

namespace fraclab {
namespace {

TEST(GreenBall, KappaMatchesClosedForm) {
    for (double s : {0.6, 0.75, 0.9}) {
        const double ref = oracle::disc_kappa(s);
        EXPECT_NEAR(calibrate_kappa(s), ref, 1e-9 * ref) << s;
    }
    EXPECT_THROW(calibrate_kappa(0.4), InvalidArgument);
}

TEST(GreenBall, KernelMatchesDirectFormula) {
    const double s = 0.7;
    const GreenKernel k = make_green_kernel(s);
    const Point2 pts[][2] = {{{0.0, 0.0}, {0.5, 0.0}}, {{0.3, -0.4}, {-0.2, 0.1}}, {{0.9, 0.0}, {0.0, 0.95}}};
    for (const auto& pr : pts) {
        const Point2 x = pr[0];
        const Point2 y = pr[1];
        const double d2 = (x.x - y.x) * (x.x - y.x) + (x.y - y.y) * (x.y - y.y);
        const double r0 = (1 - x.x * x.x - x.y * x.y) * (1 - y.x * y.x - y.y * y.y) / d2;
        const double ref = k.kappa * std::pow(d2, s - 1.0) * oracle::green_tail(r0, s);
        EXPECT_NEAR(green_value(k, x, y), ref, 1e-10 * ref);
    }
}

TEST(GreenBall, SymmetricAndPositive) {
    const GreenKernel k = make_green_kernel(0.8);
    for (double t = 0.05; t < 1.0; t += 0.1) {
        const Point2 x{t * 0.9, -t * 0.3};
        const Point2 y{-0.2, 0.5 * t};
        const double g = green_value(k, x, y);
        EXPECT_GT(g, 0.0);
        EXPECT_NEAR(g, green_value(k, y, x), 1e-14 * g);
    }
}

TEST(GreenBall, SingularAndOutsidePoints) {
    const GreenKernel k = make_green_kernel(0.75);
    EXPECT_THROW(green_value(k, {0.1, 0.1}, {0.1, 0.1}), SingularInput);
    EXPECT_THROW(green_value(k, {1.0, 0.0}, {0.1, 0.1}), InvalidArgument);
    EXPECT_THROW(green_value(k, {0.0, 0.0}, {0.8, 0.8}), InvalidArgument);
}

// 𝔾_s[1] = (1-r²)^s / λ₂ with λ₂ the torsion constant on the disc.
TEST(GreenBall, RadialSolveOfConstantData) {
    const double s = 0.75;
    const RadialProfile one = sample_radial([](double) { return 1.0; }, 40);
    const RadialProfile u = green_solve_radial(one, s, 20);
    ASSERT_EQ(u.r.size(), 20u);
    const double lambda = oracle::torsion_eigen(2, s);
    for (std::size_t i = 0; i < u.r.size(); ++i) {
        const double exact = std::pow(1.0 - u.r[i] * u.r[i], s) / lambda;
        EXPECT_NEAR(u.values[i], exact, 1e-6 * exact) << u.r[i];
    }
}

TEST(GreenBall, RadialProfileInterpolates) {
    const RadialProfile p = sample_radial([](double r) { return 2.0 * r; }, 4);
    ASSERT_EQ(p.r.size(), 5u);
    EXPECT_DOUBLE_EQ(p(0.3), 0.6);
    EXPECT_DOUBLE_EQ(p(2.0), 2.0);
}

TEST(GreenBall, BoundaryExponentOfExactProfile) {
    const double s = 0.65;
    const RadialProfile pure = sample_radial([s](double r) { return std::pow(1.0 - r, s); }, 400);
    EXPECT_NEAR(boundary_exponent_fit(pure), s, 1e-12);
    // (1-r²)^s = δ^s (2-δ)^s bends the slope by about -sδ/2 in the window.
    const RadialProfile u = sample_radial([s](double r) { return std::pow(1.0 - r * r, s); }, 400);
    EXPECT_NEAR(boundary_exponent_fit(u), s, 0.02);
}

TEST(GreenBall, LogLogSlope) {
    const std::vector<double> x{1, 2, 4, 8};
    const std::vector<double> y{3, 3 * std::pow(2, 1.7), 3 * std::pow(4, 1.7), 3 * std::pow(8, 1.7)};
    EXPECT_NEAR(log_log_slope(x, y), 1.7, 1e-12);
    const std::vector<double> bad{1, -1, 2, 3};
    EXPECT_THROW(log_log_slope(x, bad), DegenerateInput);
}

TEST(GreenBall, ComparabilityBandIsTwoSided) {
    const GreenKernel k = make_green_kernel(0.75);
    const ComparabilityBand a = comparability_band(k, 2000, 7);
    const ComparabilityBand b = comparability_band(k, 2000, 7);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
    EXPECT_EQ(a.pairs, 2000u);
    EXPECT_GT(a.lower, 0.0);
    EXPECT_LT(a.upper / a.lower, 10.0);
}

TEST(GreenBall, DecaysAlongRayToBoundary) {
    const GreenKernel k = make_green_kernel(0.75);
    const Point2 x{0.2, -0.1};
    double prev = INFINITY;
    for (double r = 0.3; r < 1.0; r += 0.05) {
        const double v = green_value(k, x, {-r * 0.6, r * 0.8});
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(green_value(k, x, {-0.6 * 0.999999, 0.8 * 0.999999}), 1e-3 * green_value(k, x, {0.0, 0.3}));
}

TEST(GreenBall, SymmetricOverRandomPairs) {
    const GreenKernel k = make_green_kernel(0.65);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto point = [&] {
        for (;;) {
            const Point2 p{unit(rng), unit(rng)};
            if (p.x * p.x + p.y * p.y < 1.0) return p;
        }
    };
    for (int k2 = 0; k2 < 100; ++k2) {
        const Point2 x = point();
        const Point2 y = point();
        const double g = green_value(k, x, y);
        EXPECT_NEAR(g, green_value(k, y, x), 1e-13 * g);
    }
}

// Regression band frozen from a pilot run with the same seed.
TEST(GreenBall, ComparabilityBandRegression) {
    const ComparabilityBand b = comparability_band(make_green_kernel(0.75), 10000, 1);
    EXPECT_NEAR(b.lower, 0.016715, 1e-6);
    EXPECT_NEAR(b.upper, 0.0531008, 1e-7);
}

TEST(GreenBall, RadialSolveLinearity) {
    const double s = 0.75;
    const RadialProfile zero = sample_radial([](double) { return 0.0; }, 20);
    for (double v : green_solve_radial(zero, s, 10).values) EXPECT_EQ(v, 0.0);
    const RadialProfile f = sample_radial([](double r) { return 1.0 + r * r; }, 10);
    const RadialProfile f2 = sample_radial([](double r) { return 2.0 * (1.0 + r * r); }, 10);
    const RadialProfile u = green_solve_radial(f, s, 3);
    const RadialProfile u2 = green_solve_radial(f2, s, 3);
    for (std::size_t i = 0; i < u.r.size(); ++i) EXPECT_NEAR(u2.values[i], 2.0 * u.values[i], 1e-13 * u2.values[i]);
}

TEST(GreenBall, ConstantDataProfileShape) {
    const double s = 0.75;
    const RadialProfile u = green_solve_radial(sample_radial([](double) { return 1.0; }, 40), s, 40);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < u.r.size(); ++i) {
        if (u.r[i] > 0.9) continue;
        const double q = u.values[i] / std::pow(1.0 - u.r[i] * u.r[i], s);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    EXPECT_LE((hi - lo) / hi, 0.02);
    // u(0) = 1/λ₂, with λ₂ from the closed form.
    EXPECT_NEAR(u.values[0], 1.0 / oracle::torsion_eigen(2, s), 1e-8);
}

TEST(GreenBall, ExactPowersOnTheInterval) {
    const GridPtr g = build_grid(800);
    const ScalarField ds = sample(g, [](double x) { return std::pow(1.0 - std::abs(x), 0.75); });
    EXPECT_NEAR(boundary_exponent_fit(ds), 0.75, 1e-10);
    const ScalarField d = sample(g, [](double x) { return 1.0 - std::abs(x); });
    EXPECT_NEAR(boundary_exponent_fit(d), 1.0, 1e-10);
}

TEST(GreenBall, ExponentOfLinearSolve) {
    const GridPtr g = build_grid(800);
    const FactoredOp op(assemble(g, 0.75));
    const ScalarField u = op.solve(sample(g, [](double) { return 1.0; }));
    EXPECT_NEAR(boundary_exponent_fit(u), 0.75, 0.05);
}

}  // namespace
}  // namespace fraclab
