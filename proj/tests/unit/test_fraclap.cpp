#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "fraclab/errors.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/gradient.hpp"
#include "fraclab/green_ball.hpp"
#include "oracles.hpp"

namespace fraclab {
namespace {

class OperatorOrders : public ::testing::TestWithParam<double> {};

TEST_P(OperatorOrders, SymmetricToeplitzMMatrix) {
    const FracOp op = assemble(build_grid(120), GetParam());
    const std::size_t n = op.size();
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_EQ(op.at(i, j), op.at(j, i));
            if (i > 0 && j > 0) EXPECT_EQ(op.at(i, j), op.at(i - 1, j - 1));
            if (j != i) {
                EXPECT_LT(op.at(i, j), 0.0);
                off += -op.at(i, j);
            }
        }
        EXPECT_GT(op.at(i, i), off);
    }
}

// Off-diagonal entries two or more cells apart are plain hat-function
// integrals of the kernel.
TEST_P(OperatorOrders, FarEntriesMatchHatIntegrals) {
    const double s = GetParam();
    const GridPtr g = build_grid(60);
    const FracOp op = assemble(g, s);
    for (std::size_t j : {2u, 3u, 7u, 20u, 59u}) {
        const double ref = oracle::hat_kernel_integral(g->node(0), g->node(j), g->h(), s);
        EXPECT_NEAR(-op.at(0, j), ref, 1e-9 * ref) << "offset " << j;
    }
}

// A·1 at a node whose near zone is flat equals ∫ (1 - u_h) K, u_h the
// interpolant of ones with zero boundary values.
TEST_P(OperatorOrders, RowSumMatchesExteriorMass) {
    using boost::math::quadrature::gauss_kronrod;
    const double s = GetParam();
    const GridPtr g = build_grid(50);
    const FracOp op = assemble(g, s);
    const ScalarField one = sample(g, [](double) { return 1.0; });
    const double h = g->h();
    for (std::size_t i : {2u, 10u, 25u, 47u}) {
        const double x = g->node(i);
        auto k = [x, s](double y) { return std::pow(std::abs(x - y), -1.0 - 2.0 * s); };
        double ref = (std::pow(1.0 - x, -2.0 * s) + std::pow(1.0 + x, -2.0 * s)) / (2.0 * s);
        ref += gauss_kronrod<double, 61>::integrate([&](double y) { return (1.0 - (y + 1.0) / h) * k(y); }, -1.0,
                                                    -1.0 + h, 15, 1e-14);
        ref += gauss_kronrod<double, 61>::integrate([&](double y) { return (1.0 - (1.0 - y) / h) * k(y); }, 1.0 - h,
                                                    1.0, 15, 1e-14);
        EXPECT_NEAR(op.apply_row(one, i), ref, 1e-9 * ref) << "node " << i;
    }
}

TEST_P(OperatorOrders, TorsionProfileIsFlat) {
    const double s = GetParam();
    const GridPtr g = build_grid(400);
    const FracOp op = assemble(g, s);
    const ScalarField aw = op.apply(sample(g, [s](double x) { return std::pow(1.0 - x * x, s); }));
    const double lambda = oracle::torsion_eigen(1, s);
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (std::abs(g->node(i)) <= 0.5) EXPECT_NEAR(aw[i], lambda, 0.01 * lambda) << g->node(i);
    }
}

TEST_P(OperatorOrders, ReferenceQuadratureMatchesClosedForm) {
    const double s = GetParam();
    const double lambda = oracle::torsion_eigen(1, s);
    for (double x : {0.0, 0.3, -0.7, 0.95}) {
        EXPECT_NEAR(reference_operator([s](double y) { return std::pow(1.0 - y * y, s); }, x, s), lambda,
                    1e-7 * lambda)
            << x;
    }
}

TEST_P(OperatorOrders, RegularizedApproachesMatrix) {
    const double s = GetParam();
    const GridPtr g = build_grid(200);
    const FracOp op = assemble(g, s);
    const ScalarField u = sample(g, [](double x) { return std::cos(M_PI * x / 2); });
    const std::size_t i = 60;
    const double target = op.apply_row(u, i);
    double prev = std::abs(apply_regularized(op, u, i, 0.4) - target);
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
        const double err = std::abs(apply_regularized(op, u, i, eps) - target);
        EXPECT_LT(err, prev) << eps;
        prev = err;
    }
    // Below h the missing near-field mass is exactly C·ε^{2-2s}.
    const double h = g->h();
    const double e1 = apply_regularized(op, u, i, h / 2) - target;
    const double e2 = apply_regularized(op, u, i, h / 8) - target;
    EXPECT_NEAR(e2 / e1, std::pow(0.25, 2.0 - 2.0 * s), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Fraclap, OperatorOrders, ::testing::Values(0.6, 0.75, 0.9));

TEST(FracOp, ApplyRowAgreesWithApply) {
    const GridPtr g = build_grid(77);
    const FracOp op = assemble(g, 0.7);
    const ScalarField u = sample(g, [](double x) { return std::exp(x) * (1 - x * x); });
    const ScalarField au = op.apply(u);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(op.apply_row(u, i), au[i], 1e-12 * std::abs(au[i]));
}

TEST(FracOp, NearCoefficient) {
    const GridPtr g = build_grid(99);
    const FracOp op = assemble(g, 0.75);
    EXPECT_NEAR(op.near_coefficient(), std::pow(g->h(), -1.5) / 0.5, 1e-12);
}

TEST(FracOp, RejectsBadOrder) {
    EXPECT_THROW(assemble(build_grid(10), 0.5), InvalidArgument);
    EXPECT_THROW(assemble(build_grid(10), 1.0), InvalidArgument);
}

TEST(FactoredOp, SolveInvertsApply) {
    const GridPtr g = build_grid(300);
    const FactoredOp fop(assemble(g, 0.8));
    const ScalarField f = sample(g, [](double x) { return 1.0 + x; });
    const ScalarField u = fop.solve(f);
    const ScalarField r = fop.op().apply(u) - f;
    EXPECT_LT(r.sup_norm(), 1e-10 * f.sup_norm());
    EXPECT_THROW(fop.solve(ScalarField(build_grid(5))), InvalidArgument);
}

TEST(FactoredOp, ConstantDataGivesTorsionProfile) {
    const double s = 0.75;
    const GridPtr g = build_grid(400);
    const FactoredOp fop(assemble(g, s));
    const ScalarField u = fop.solve(sample(g, [](double) { return 1.0; }));
    const double lambda = oracle::torsion_eigen(1, s);
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double x = g->node(i);
        if (std::abs(x) > 0.9) continue;
        const double exact = std::pow(1.0 - x * x, s) / lambda;
        EXPECT_NEAR(u[i], exact, 0.02 * exact) << x;
    }
}

TEST(FactoredOp, DiscreteMaximumPrinciple) {
    const GridPtr g = build_grid(150);
    const FactoredOp fop(assemble(g, 0.65));
    const ScalarField f = sample(g, [](double x) { return x > 0.2 ? 1.0 : 0.0; });
    const ScalarField u = fop.solve(f);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_GT(u[i], 0.0);
}

TEST(OperatorDump, RoundTrip) {
    const GridPtr g = build_grid(17);
    const FracOp op = assemble(g, 0.85);
    const auto path = std::filesystem::temp_directory_path() / "fraclab_dump_test.bin";
    write_operator_dump(op, path);
    EXPECT_EQ(std::filesystem::file_size(path), 24u + 17u * 17u * 8u);
    const OperatorDump d = read_operator_dump(path);
    EXPECT_EQ(d.n, 17);
    EXPECT_EQ(d.s_micro, 850000);
    EXPECT_EQ(d.version, kOperatorDumpVersion);
    for (std::size_t i = 0; i < 17; ++i) {
        for (std::size_t j = 0; j < 17; ++j) EXPECT_EQ(d.row_major[i * 17 + j], op.at(i, j));
    }
    std::filesystem::remove(path);
    EXPECT_THROW(read_operator_dump(path), InvalidArgument);
}

TEST(FracOp, ConstantFieldHasPositiveImage) {
    const GridPtr g = build_grid(200);
    const ScalarField a1 = assemble(g, 0.75).apply(sample(g, [](double) { return 1.0; }));
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_GT(a1[i], 0.0);
}

TEST(Regularized, ZeroFieldAndHat) {
    const GridPtr g = build_grid(101);
    const FracOp op = assemble(g, 0.75);
    for (double eps : {0.5, 0.05, 0.005}) EXPECT_EQ(apply_regularized(op, ScalarField(g), 50, eps), 0.0);
    ScalarField hat(g);
    hat[50] = 1.0;
    double prev = 0.0;
    for (double eps : {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001}) {
        const double v = apply_regularized(op, hat, 50, eps);
        EXPECT_GT(v, prev) << eps;
        prev = v;
    }
    EXPECT_LT(prev, op.apply_row(hat, 50));
    EXPECT_THROW(apply_regularized(op, hat, 50, 0.0), InvalidArgument);
}

// The truncation error of a smooth profile is u''(x)·ε^{2-2s}/(2-2s) to
// leading order, so the observed order is 2-2s.
TEST_P(OperatorOrders, RegularizedOrderAtCentre) {
    const double s = GetParam();
    const GridPtr g = build_grid(801);
    const FracOp op = assemble(g, s);
    const ScalarField w = sample(g, [s](double x) { return std::pow(1.0 - x * x, s); });
    const std::size_t mid = 400;
    ASSERT_EQ(g->node(mid), 0.0);
    const double full = op.apply_row(w, mid);
    const double e1 = apply_regularized(op, w, mid, 0.1) - full;
    const double e2 = apply_regularized(op, w, mid, 0.01) - full;
    const double e3 = apply_regularized(op, w, mid, 0.001) - full;
    EXPECT_LT(std::abs(e3), std::abs(e2));
    EXPECT_LT(std::abs(e2), std::abs(e1));
    EXPECT_NEAR(std::log10(e2 / e3), 2.0 - 2.0 * s, 0.05);
    // Leading coefficient: u''(0) = -2s.
    EXPECT_NEAR(e3 / (-(-2.0 * s) * std::pow(0.001, 2.0 - 2.0 * s) / (2.0 - 2.0 * s)) , -1.0, 0.05);
}

TEST(Gradient, AffineAndParity) {
    const GridPtr g = build_grid(40);
    const ScalarField du = gradient(sample(g, [](double x) { return 2.0 * x + 0.3; }));
    for (std::size_t i = 1; i + 1 < g->size(); ++i) EXPECT_NEAR(du[i], 2.0, 1e-12);
    const ScalarField even = gradient(sample(g, [](double x) { return std::cos(x) * (1 - x * x); }));
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(even[i], -even[g->size() - 1 - i]);
}

TEST(Gradient, EdgeSlopeGrowsLikeDeltaPower) {
    const double s = 0.75;
    std::vector<double> hs, slopes;
    for (std::size_t n : {200u, 400u, 800u, 1600u, 3200u}) {
        const GridPtr g = build_grid(n);
        const ScalarField du = gradient(sample(g, [s](double x) { return std::pow(1.0 - x * x, s); }));
        hs.push_back(g->delta(0));
        slopes.push_back(std::abs(du[0]));
    }
    EXPECT_NEAR(log_log_slope(hs, slopes), s - 1.0, 0.1);
}

}  // namespace
}  // namespace fraclab
