#pragma once

#include <random>
#include <string>

#include "oracle.hpp"
#include "t5drive/config.hpp"
#include "t5drive/tc_core.hpp"

namespace fixtures {

inline std::string config_path(const std::string &name) {
    return std::string(T5DRIVE_CONFIG_DIR) + "/" + name;
}

inline t5drive::tc::Parameters to_library(const oracle::Tc &o) {
    t5drive::tc::Geometry g;
    g.impeller_radius = o.Ri;
    g.turbine_radius = o.Rt;
    g.stator_radius = o.Rs;
    g.flow_area = o.A;
    g.fluid_inertia_length = o.Lf;
    g.impeller_exit_angle = o.ai;
    g.turbine_exit_angle = o.at;
    g.impeller_inlet_angle = o.ai_in;
    g.turbine_inlet_angle = o.at_in;
    g.stator_inlet_angle = o.as_in;
    g.impeller_design_constant = o.Si;
    g.turbine_design_constant = o.St;
    g.stator_design_constant = 0.002;
    return {g, {o.rho, o.f, o.Cshi, o.Csht, o.Cshs}, {o.Ii, o.It, 0.012}};
}

/// Random parameter set in a physically plausible range.
inline oracle::Tc random_tc(std::mt19937_64 &rng) {
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto ang = [&] { return u(-75.0, 75.0) * oracle::kDeg; };
    return {u(700, 1000), u(0.005, 0.1), u(0.05, 0.3), u(0.05, 0.3), u(0.05, 0.3), u(0.1, 1.0),
            ang(),        ang(),        ang(),        ang(),        ang(),        u(0.01, 1.0),
            u(0.01, 1.0), u(0.5, 2.0),  u(0.5, 2.0),  u(0.5, 2.0),  u(-0.01, 0.01),
            u(-0.001, 0.001), u(0.0, 0.5)};
}

/// |a − b| within `rel` of the larger magnitude, or of `scale` when both
/// values are the small remainder of a cancelling sum.
inline bool close(double a, double b, double rel, double scale = 0.0) {
    const double m = std::max({std::abs(a), std::abs(b), scale});
    return std::abs(a - b) <= rel * m;
}

} // namespace fixtures
