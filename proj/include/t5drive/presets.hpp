#pragma once

// Reference parameter sets.

#include "t5drive/scaling.hpp"
#include "t5drive/tc_core.hpp"
#include "t5drive/units.hpp"

namespace t5drive::presets {

/// Automotive converter of a Honda CR-V, used as the scaling base.
inline tc::Parameters honda_crv() {
    tc::Geometry g;
    g.impeller_radius = 0.0991;
    g.turbine_radius = 0.0735;
    g.stator_radius = 0.0665;
    g.flow_area = 0.0107;
    g.fluid_inertia_length = 0.2594;
    g.impeller_exit_angle = deg_to_rad(16.21);
    g.turbine_exit_angle = deg_to_rad(-53.14);
    g.impeller_inlet_angle = deg_to_rad(-40.7);
    g.turbine_inlet_angle = deg_to_rad(59.19);
    g.stator_inlet_angle = deg_to_rad(60.36);
    g.impeller_design_constant = -0.001;
    g.turbine_design_constant = -0.00002;
    g.stator_design_constant = 0.002;
    tc::FluidLoss fl{840.0, 0.197, 1.011, 1.8, 0.773};
    tc::Inertias in{0.092, 0.026, 0.012};
    return {g, fl, in};
}

/// Nominal stator exit angle of the Honda converter.
inline constexpr double kHondaStatorAngle = deg_to_rad(55.62);

/// Amplification and angle adjustments that take the Honda converter to
/// wind-turbine size.
inline scaling::ScalingAdjustment wind_turbine_adjustment() {
    scaling::ScalingAdjustment a;
    a.amplification = 2.73;
    a.impeller_exit = deg_to_rad(43.0693);
    a.turbine_exit = deg_to_rad(3.3333);
    a.impeller_inlet = deg_to_rad(3.5588);
    a.turbine_inlet = deg_to_rad(0.0980);
    a.stator_inlet = deg_to_rad(2.5098);
    return a;
}

} // namespace t5drive::presets
