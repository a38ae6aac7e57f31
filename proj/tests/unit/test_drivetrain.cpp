#include <cmath>

#include <gtest/gtest.h>

#include "t5drive/drivetrain.hpp"
#include "t5drive/integrators.hpp"

using namespace t5drive;
using namespace t5drive::drivetrain;

namespace {

GearboxConfig two_stage(bool bearing, double damping = 50.0) {
    GearboxConfig g;
    g.input_inertia = 20.0;
    g.stages.push_back({2.0, 0.2, 1e6, damping, std::nullopt});
    g.stages.push_back({0.5, 0.25, 2e5, damping, std::nullopt});
    if (bearing) {
        g.stages[0].bearing = BearingDof{10.0, 1e7, 100.0, 0.3};
    }
    return g;
}

integrate::Vector pack(const GearboxState &s) {
    std::vector<double> v;
    for (auto *part : {&s.speeds, &s.twists, &s.bearing_position, &s.bearing_velocity}) {
        v.insert(v.end(), part->begin(), part->end());
    }
    return Eigen::Map<const integrate::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GearboxState unpack(const GearboxConfig &c, const integrate::Vector &x) {
    GearboxState s = GearboxState::zeros(c);
    Eigen::Index i = 0;
    for (auto *part : {&s.speeds, &s.twists, &s.bearing_position, &s.bearing_velocity}) {
        for (auto &e : *part) e = x(i++);
    }
    return s;
}

} // namespace

TEST(Coupler, TorqueFromTwistAndSlip) {
    const CouplerParams c{1000.0, 10.0};
    EXPECT_DOUBLE_EQ(coupler_torque(c, {0.01}, 5.0, 7.0), 10.0 + 20.0);
    EXPECT_DOUBLE_EQ(coupler_twist_rate(5.0, 7.0), 2.0);
    EXPECT_THROW((CouplerParams{0.0, 0.0}.validate()), Error);
    EXPECT_THROW((CouplerParams{-1.0, 1.0}.validate()), Error);
}

TEST(Gearbox, SteadyStateHasZeroDerivatives) {
    for (bool bearing : {false, true}) {
        const auto cfg = two_stage(bearing);
        const auto st = gearbox_steady(cfg, 150.0, 400.0);
        EXPECT_NEAR(st.state.speeds[0], 150.0 * 0.05, 1e-12);
        EXPECT_NEAR(st.input_torque, 400.0 / 0.05, 1e-9);
        const auto d = gearbox_derivatives(cfg, st.state, st.input_torque, -400.0);
        for (double v : d.speeds) EXPECT_NEAR(v, 0.0, 1e-9);
        for (double v : d.twists) EXPECT_NEAR(v, 0.0, 1e-12);
        for (double v : d.bearing_velocity) EXPECT_NEAR(v, 0.0, 1e-6);
    }
}

TEST(Gearbox, UndampedFreeChainConservesEnergy) {
    const auto cfg = two_stage(false, 0.0);
    GearboxState s = GearboxState::zeros(cfg);
    s.speeds = {1.0, 4.0, 20.0};
    s.twists = {1e-4, -2e-4};
    const double e0 = gearbox_energy(cfg, s);
    auto f = [&](double, const integrate::Vector &x) {
        return pack(gearbox_derivatives(cfg, unpack(cfg, x), 0.0, 0.0));
    };
    integrate::Vector x = pack(s);
    for (int k = 0; k < 20000; ++k) {
        x = integrate::explicit_step(integrate::Method::Rk4, f, k * 1e-5, x, 1e-5);
    }
    EXPECT_NEAR(gearbox_energy(cfg, unpack(cfg, x)) / e0, 1.0, 1e-8);
}

TEST(Gearbox, MeshReactionScalesWithRatio) {
    const auto cfg = two_stage(false, 0.0);
    GearboxState s = GearboxState::zeros(cfg);
    s.twists = {1e-3, 0.0};
    const auto d = gearbox_derivatives(cfg, s, 0.0, 0.0);
    const double t = 1e6 * 1e-3;
    EXPECT_NEAR(d.speeds[1] * 2.0, t, 1e-9);
    EXPECT_NEAR(d.speeds[0] * 20.0, -t / 0.2, 1e-9);
}

TEST(Gearbox, DimensionMismatchRejected) {
    const auto cfg = two_stage(true);
    GearboxState s = GearboxState::zeros(cfg);
    s.bearing_position.clear();
    try {
        gearbox_derivatives(cfg, s, 0.0, 0.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(Generator, IdealBusPinsSpeed) {
    const GeneratorBoundary g{GeneratorMode::IdealBus, 1600.0};
    const auto r = generator_torque(g, 100.0, 0.3);
    EXPECT_FALSE(r.torque.has_value());
    ASSERT_TRUE(r.pinned_speed.has_value());
    EXPECT_NEAR(*r.pinned_speed, 1600.0 * M_PI / 30.0, 1e-12);
}

TEST(Generator, SwingTorqueZeroAtSynchronousRest) {
    const GeneratorBoundary g{GeneratorMode::Swing, 1500.0, 50.0, 2.0, 1e4};
    const auto r = generator_torque(g, g.sync_speed(), 0.0);
    EXPECT_EQ(*r.torque, 0.0);
    EXPECT_EQ(r.angle_rate, 0.0);
}

TEST(Generator, SwingSmallSignalFrequency) {
    // J·ω̇ = −τ_e, δ̇ = ω − ω_sync, undamped: period 2π·sqrt(J/K)
    const GeneratorBoundary g{GeneratorMode::Swing, 1500.0, 50.0, 0.0, 1e4};
    auto f = [&](double, const integrate::Vector &x) {
        const auto r = generator_torque(g, x(0), x(1));
        integrate::Vector d(2);
        d << -*r.torque / g.inertia, r.angle_rate;
        return d;
    };
    integrate::Vector x(2);
    x << g.sync_speed(), 0.01;
    double t = 0.0, last_cross = -1.0, period = 0.0;
    int crossings = 0;
    const double h = 1e-4;
    while (crossings < 3) {
        const integrate::Vector n = integrate::explicit_step(integrate::Method::Rk4, f, t, x, h);
        if (x(1) > 0.0 && n(1) <= 0.0) {
            const double tc = t + h * x(1) / (x(1) - n(1));
            if (last_cross >= 0.0) period = tc - last_cross;
            last_cross = tc;
            ++crossings;
        }
        x = n;
        t += h;
    }
    EXPECT_NEAR(period, 2.0 * M_PI * std::sqrt(50.0 / 1e4), 1e-6);
}

TEST(Generator, SwingValidation) {
    EXPECT_THROW((GeneratorBoundary{GeneratorMode::Swing, 1500.0, 0.0, 1.0, 1.0}.validate()), Error);
    EXPECT_THROW((GeneratorBoundary{GeneratorMode::Swing, 1500.0, 1.0, 1.0, 0.0}.validate()), Error);
    EXPECT_NO_THROW((GeneratorBoundary{GeneratorMode::IdealBus, 1500.0}.validate()));
}
