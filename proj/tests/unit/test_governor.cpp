#include <cmath>

#include <gtest/gtest.h>

#include "t5drive/governor.hpp"

using namespace t5drive;
using namespace t5drive::governor;

namespace {

GovernorConfig base(double angle = deg_to_rad(40.0)) {
    GovernorConfig c;
    c.initial_angle = angle;
    c.integrator_init = angle;
    return c;
}

steady::SteadyStateSolution feasible_at(double angle) {
    steady::SteadyStateSolution s;
    s.feasible = true;
    s.stator_angle = angle;
    return s;
}

} // namespace

TEST(Governor, ZeroErrorHoldsAngle) {
    const auto cfg = base();
    auto st = GovernorState::initial(cfg);
    for (int k = 0; k < 1000; ++k) {
        const auto out = update(st, cfg, 0.0, 1e-3);
        ASSERT_EQ(out.command, cfg.initial_angle);
    }
}

TEST(Governor, ConstantOverSpeedRaisesAngleUntilSaturation) {
    auto cfg = base();
    cfg.gains = {0.1, 0.5, 0.0};
    auto st = GovernorState::initial(cfg);
    double prev = st.command;
    bool saturated = false;
    for (int k = 0; k < 10000; ++k) {
        const auto out = update(st, cfg, 1.0, 1e-3);
        ASSERT_GE(out.command, prev);
        ASSERT_LE(out.command, cfg.angle_max);
        prev = out.command;
        saturated = saturated || out.saturated;
    }
    EXPECT_TRUE(saturated);
    // integrator frozen one increment short of the bound
    EXPECT_NEAR(prev, cfg.angle_max, 0.5 * 1e-3);
}

TEST(Governor, UnderSpeedLowersAngle) {
    const auto cfg = base();
    auto st = GovernorState::initial(cfg);
    const auto out = update(st, cfg, -0.1, 1e-3);
    EXPECT_LT(out.command, cfg.initial_angle);
}

TEST(Governor, IntegratorFrozenWhileSaturated) {
    auto cfg = base(deg_to_rad(84.9));
    cfg.gains = {1.0, 1.0, 0.0};
    cfg.rate_limit = 1e6;
    auto st = GovernorState::initial(cfg);
    update(st, cfg, 1.0, 1e-3);
    const double held = st.integrator;
    for (int k = 0; k < 100; ++k) {
        const auto out = update(st, cfg, 1.0, 1e-3);
        EXPECT_TRUE(out.saturated);
        EXPECT_EQ(out.command, cfg.angle_max);
        EXPECT_EQ(st.integrator, held);
    }
}

TEST(Governor, OutputBoundedAndRateLimited) {
    auto cfg = base();
    cfg.gains = {5.0, 2.0, 0.1};
    auto st = GovernorState::initial(cfg);
    const double dt = 1e-3;
    double prev = st.command;
    for (int k = 0; k < 5000; ++k) {
        const double err = 3.0 * std::sin(0.01 * k) + ((k % 7) - 3);
        const auto out = update(st, cfg, err, dt);
        EXPECT_GE(out.command, cfg.angle_min);
        EXPECT_LE(out.command, cfg.angle_max);
        EXPECT_LE(std::abs(out.command - prev), cfg.rate_limit * dt * (1 + 1e-12));
        prev = out.command;
    }
}

TEST(Governor, ProportionalSlopeIsKp) {
    auto cfg = base();
    cfg.gains = {0.3, 0.0, 0.0};
    cfg.rate_limit = 1e6;
    for (double e : {-0.2, 0.05, 0.4}) {
        auto a = GovernorState::initial(cfg);
        auto b = GovernorState::initial(cfg);
        const double h = 1e-4;
        const double ya = update(a, cfg, e, 1e-3).command;
        const double yb = update(b, cfg, e + h, 1e-3).command;
        EXPECT_NEAR((yb - ya) / h, 0.3, 1e-9);
    }
}

TEST(Governor, DeterministicSequences) {
    const auto cfg = base();
    auto a = GovernorState::initial(cfg);
    auto b = GovernorState::initial(cfg);
    for (int k = 0; k < 1000; ++k) {
        const double e = std::cos(0.37 * k);
        EXPECT_EQ(update(a, cfg, e, 1e-3).command, update(b, cfg, e, 1e-3).command);
    }
}

TEST(InitFromSteady, BumplessAndCentred) {
    const double a0 = deg_to_rad(41.76);
    const auto cfg = init_from_steady(feasible_at(a0), GovernorConfig{});
    EXPECT_EQ(cfg.initial_angle, a0);
    auto st = GovernorState::initial(cfg);
    EXPECT_EQ(update(st, cfg, 0.0, 1e-4).command, a0);
}

TEST(InitFromSteady, ObservedRangeWidenedAndClipped) {
    const auto cfg = init_from_steady(feasible_at(deg_to_rad(40.0)), GovernorConfig{},
                                      std::make_pair(deg_to_rad(6.0), deg_to_rad(64.0)));
    EXPECT_NEAR(cfg.angle_min, deg_to_rad(5.0), 1e-15);
    EXPECT_NEAR(cfg.angle_max, deg_to_rad(66.0), 1e-15);
}

TEST(InitFromSteady, InfeasibleRejected) {
    steady::SteadyStateSolution s;
    try {
        init_from_steady(s, GovernorConfig{});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasibleSolution);
    }
}

TEST(GovernorConfig, BoundsMustNestInSolverBounds) {
    auto cfg = base();
    cfg.angle_max = deg_to_rad(88.0);
    EXPECT_THROW(cfg.validate(), Error);
    cfg = base();
    cfg.initial_angle = deg_to_rad(2.0);
    EXPECT_THROW(cfg.validate(), Error);
}
