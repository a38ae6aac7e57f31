#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "t5drive/presets.hpp"
#include "t5drive/sim_engine.hpp"
#include "fixtures.hpp"
#include "t5drive/config.hpp"

using namespace t5drive;
using namespace t5drive::sim;

namespace {

struct Decay {
    Vector rhs(double, const Vector &x) const { return -x; }
};

struct Still {
    Vector rhs(double, const Vector &x) const { return Vector::Zero(x.size()); }
};

struct Blowup {
    Vector rhs(double, const Vector &x) const { return x.array().square() * 1e6; }
};

} // namespace

TEST(Step, Rk4MatchesExponentialDecay) {
    Vector x(1);
    x << 1.0;
    const double h = 0.01;
    for (int k = 0; k < 100; ++k) {
        x = step(Decay{}, k * h, x, h);
    }
    EXPECT_NEAR(x(0), std::exp(-1.0), 1e-10);
}

TEST(Step, ZeroDerivativeKeepsStateBitwise) {
    Vector x(3);
    x << 1.25, -3.5, 1e-7;
    const Vector y = step(Still{}, 0.0, x, 1e-3);
    EXPECT_EQ(x, y);
}

TEST(Step, NonFiniteStateReportsStepIndex) {
    Vector x(1);
    x << 1e200;
    try {
        step(Blowup{}, 0.0, x, 1.0, Method::Rk4, 42);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFiniteState);
        EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
    }
}

TEST(Step, RejectsNonPositiveDt) {
    Vector x(1);
    x << 1.0;
    EXPECT_THROW(step(Decay{}, 0.0, x, 0.0), Error);
}

TEST(Trace, RowWidthChecked) {
    Trace t({"t", "x"});
    t.append({0.0, 1.0});
    EXPECT_THROW(t.append({1.0}), Error);
    EXPECT_EQ(t.column("x"), std::vector<double>{1.0});
    EXPECT_THROW(t.index_of("y"), Error);
}

TEST(HalfPeakToPeak, SyntheticSinusoid) {
    std::vector<double> s;
    for (int k = 0; k < 100000; ++k) {
        s.push_back(3.0 + 2.5 * std::sin(2.0 * M_PI * 7.0 * k * 1e-5));
    }
    EXPECT_NEAR(half_peak_to_peak(s), 2.5, 1e-6);
    EXPECT_EQ(half_peak_to_peak(std::vector<double>{}), 0.0);
}

TEST(FrequencySweep, GridEndpointsAndCount) {
    const FrequencySweepSpec spec;
    const auto f = spec.frequencies();
    ASSERT_EQ(f.size(), 48u);
    EXPECT_EQ(f.front(), 0.5);
    EXPECT_EQ(f.back(), 100.0);
    for (std::size_t k = 1; k < f.size(); ++k) {
        EXPECT_GT(f[k], f[k - 1]);
    }
}

TEST(FrequencySweep, ZeroAmplitudeStaysAtEquilibrium) {
    const auto p = presets::honda_crv();
    FrequencySweepSpec spec;
    spec.amplitude = 0.0;
    spec.settle_time = 0.5;
    spec.measure_time = 0.5;
    const auto pts = run_frequency_sweep(p, spec, std::vector<double>{5.0});
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_LT(pts[0].turbine_amplitude, 1e-6);
    EXPECT_LT(pts[0].impeller_amplitude, 1e-6);
}

TEST(FrequencySweep, HigherFrequencyIsAttenuated) {
    const auto p = presets::honda_crv();
    FrequencySweepSpec spec;
    spec.settle_time = 1.0;
    spec.measure_time = 1.0;
    const auto pts = run_frequency_sweep(p, spec, std::vector<double>{1.0, 50.0});
    EXPECT_GT(pts[0].turbine_amplitude, 20.0 * pts[1].turbine_amplitude);
}

TEST(TorqueCurve, PointsSatisfyFlowBalance) {
    const auto p = presets::honda_crv();
    const std::vector<double> grid{0.2, 0.6, 1.0};
    const auto pts = run_torque_ratio_curve(p, 200.0, grid, presets::kHondaStatorAngle);
    for (const auto &pt : pts) {
        ASSERT_TRUE(pt.feasible);
        const tc::State s{200.0, pt.nu * 200.0, pt.flow_velocity};
        EXPECT_NEAR(tc::phi(p, s, presets::kHondaStatorAngle), 0.0, 1e-8);
        EXPECT_NEAR(pt.torque_ratio, -pt.turbine_torque / pt.impeller_torque, 1e-15);
    }
    EXPECT_GT(pts[0].torque_ratio, pts[2].torque_ratio);
}

TEST(TorqueCurve, GridOutsideUnitIntervalRejected) {
    const std::vector<double> grid{1.2};
    EXPECT_THROW(run_torque_ratio_curve(presets::honda_crv(), 200.0, grid,
                                        presets::kHondaStatorAngle),
                 Error);
}

TEST(SimulateTc, DeterministicAndColumns) {
    const auto p = presets::honda_crv();
    const auto model = constant_torque_model(p, {100.0, -150.0, presets::kHondaStatorAngle});
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.duration = 0.05;
    const tc::State init{100.0, 90.0, 2.0};
    const auto a = simulate_tc(model, init, cfg);
    const auto b = simulate_tc(model, init, cfg);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.columns(), (std::vector<std::string>{"t", "omega_t", "omega_i", "V", "tau_i",
                                                     "tau_t", "alpha_s"}));
    EXPECT_EQ(a.size(), cfg.steps() + 1);
}

namespace {

config::Config type5() { return config::parse_config(fixtures::config_path("type5.json")); }

} // namespace

TEST(Integrated, IdealBusHoldsOperatingPoint) {
    auto c = type5();
    c.drivetrain->generator.mode = drivetrain::GeneratorMode::IdealBus;
    c.drivetrain->governor_enabled = false;
    c.drivetrain->load_step = {};
    SimConfig sim;
    sim.dt = 1e-4;
    sim.duration = 1.0;
    sim.decimation = 100;
    const auto tr = run_integrated(c.integrated(), {}, sim);
    const auto wt = tr.column("omega_t");
    const auto wi = tr.column("omega_i");
    for (std::size_t k = 0; k < wt.size(); ++k) {
        EXPECT_EQ(wt[k], wt.front());
        EXPECT_NEAR(wi[k] / wi.front(), 1.0, 1e-3);
    }
}

TEST(Integrated, InfeasibleOperatingPointRejected) {
    auto c = type5();
    c.operating_nu = 1.5;
    try {
        IntegratedModel m(c.integrated(), {});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasibleInitialization);
    }
}

TEST(Integrated, DeterministicTrace) {
    auto c = type5();
    SimConfig sim;
    sim.dt = 1e-4;
    sim.duration = 0.2;
    const auto a = run_integrated(c.integrated(), c.drivetrain->load_step, sim);
    const auto b = run_integrated(c.integrated(), c.drivetrain->load_step, sim);
    EXPECT_EQ(a, b);
}
