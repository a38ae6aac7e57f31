#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "t5drive/roots.hpp"

using namespace t5drive;

TEST(Quadratic, TwoRealRootsOrdered) {
    const auto r = roots::solve_quadratic(1.0, -3.0, 2.0);
    ASSERT_EQ(r.count, 2);
    EXPECT_DOUBLE_EQ(r.lo, 1.0);
    EXPECT_DOUBLE_EQ(r.hi, 2.0);
}

TEST(Quadratic, LinearAndDegenerate) {
    const auto lin = roots::solve_quadratic(0.0, 2.0, -4.0);
    ASSERT_EQ(lin.count, 1);
    EXPECT_DOUBLE_EQ(lin.lo, 2.0);
    EXPECT_EQ(roots::solve_quadratic(0.0, 0.0, 1.0).count, 0);
    EXPECT_EQ(roots::solve_quadratic(1.0, 0.0, 1.0).count, 0);
    const auto zero = roots::solve_quadratic(3.0, 0.0, 0.0);
    ASSERT_EQ(zero.count, 2);
    EXPECT_EQ(zero.lo, 0.0);
    EXPECT_EQ(zero.hi, 0.0);
}

TEST(Quadratic, SmallRootSurvivesCancellation) {
    // roots 1e8 and 1e-8; the textbook formula loses the small one
    const auto r = roots::solve_quadratic(1.0, -(1e8 + 1e-8), 1.0);
    ASSERT_EQ(r.count, 2);
    EXPECT_NEAR(r.lo / 1e-8, 1.0, 1e-12);
    EXPECT_NEAR(r.hi / 1e8, 1.0, 1e-12);
}

TEST(Quadratic, RandomRootsRecovered) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        const double x1 = u(rng);
        const double x2 = u(rng);
        const double a = 0.5 + std::abs(u(rng));
        const auto r = roots::solve_quadratic(a, -a * (x1 + x2), a * x1 * x2);
        ASSERT_EQ(r.count, 2);
        EXPECT_NEAR(r.lo, std::min(x1, x2), 1e-9 * (1.0 + std::abs(x1) + std::abs(x2)));
        EXPECT_NEAR(r.hi, std::max(x1, x2), 1e-9 * (1.0 + std::abs(x1) + std::abs(x2)));
    }
}

TEST(Bracketed, FindsCosineRoot) {
    const auto r = roots::find_root_bracketed([](double x) { return std::cos(x); }, 0.0, 3.0,
                                              {1e-14, 200});
    EXPECT_NEAR(r.root, M_PI / 2.0, 1e-13);
    EXPECT_LE(std::abs(r.residual), 1e-14);
}

TEST(Bracketed, NoSignChangeThrows) {
    try {
        roots::find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0);
        FAIL() << "expected NoBracket";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoBracket);
    }
}

TEST(Bracketed, EndpointRootReturnedDirectly) {
    const auto r = roots::find_root_bracketed([](double x) { return x - 2.0; }, 2.0, 5.0);
    EXPECT_EQ(r.root, 2.0);
    EXPECT_EQ(r.iterations, 0);
}

TEST(Bracketed, ResidualToleranceOnRandomCubics) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double c = u(rng);
        auto f = [c](double x) { return x * x * x - c; };
        const auto r = roots::find_root_bracketed(f, -5.0, 5.0, {1e-12, 200});
        EXPECT_LE(std::abs(f(r.root)), 1e-12);
        EXPECT_NEAR(r.root, std::cbrt(c), 1e-9);
    }
}
