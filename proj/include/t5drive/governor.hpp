#pragma once

// PID stator guide-vane speed governor.
//
// Over-speed of the turbine side (positive error) raises the stator exit
// angle; under-speed lowers it. The integrator carries the steady operating
// angle, so the command equals the steady-state angle at zero error.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "t5drive/errors.hpp"
#include "t5drive/steady_state.hpp"
#include "t5drive/units.hpp"

namespace t5drive::governor {

/// Placeholder gains; not tuned against any turbine.
struct PidGains {
    double kp = 0.5;  // rad per rad/s
    double ki = 0.1;  // rad per rad
    double kd = 0.01; // rad·s per rad/s

    bool operator==(const PidGains &) const = default;
};

struct GovernorConfig {
    PidGains gains;
    double angle_min = deg_to_rad(5.0);
    double angle_max = deg_to_rad(85.0);
    double rate_limit = deg_to_rad(30.0); // rad/s
    double initial_angle = deg_to_rad(45.0);
    double integrator_init = deg_to_rad(45.0);

    void validate(const steady::SolverOptions &solvable = {}) const {
        using detail::require;
        constexpr auto kInvalid = ErrorKind::InvalidParameter;
        require(std::isfinite(gains.kp) && std::isfinite(gains.ki) &&
                    std::isfinite(gains.kd) && gains.ki >= 0.0,
                kInvalid, "governor.gains", "gains must be finite with Ki >= 0");
        require(std::isfinite(angle_min) && std::isfinite(angle_max) && angle_min < angle_max,
                kInvalid, "governor.alpha_s_min", "need alpha_s_min < alpha_s_max");
        require(angle_min >= solvable.stator_angle_min &&
                    angle_max <= solvable.stator_angle_max,
                kInvalid, "governor.alpha_s_max",
                "angle bounds must lie inside the steady-state stator bounds");
        require(std::isfinite(rate_limit) && rate_limit > 0.0, kInvalid,
                "governor.rate_limit", "must be > 0");
        require(initial_angle >= angle_min && initial_angle <= angle_max, kInvalid,
                "governor.alpha_s_init", "must lie inside the angle bounds");
        require(std::isfinite(integrator_init), kInvalid, "governor.integrator_init",
                "must be finite");
    }
    bool operator==(const GovernorConfig &) const = default;
};

struct GovernorState {
    double integrator = 0.0;   // rad
    double prev_error = 0.0;   // rad/s
    double derivative = 0.0;   // filtered d(error)/dt, rad/s²
    double command = 0.0;      // rad

    static GovernorState initial(const GovernorConfig &cfg) {
        return {cfg.integrator_init, 0.0, 0.0, cfg.initial_angle};
    }
};

/// Per-step internals for tracing.
struct GovernorOutput {
    double error = 0.0;
    double proportional = 0.0;
    double integral = 0.0;
    double derivative = 0.0;
    double raw = 0.0;
    double command = 0.0;
    bool saturated = false;
};

/// Governor config centred on a feasible steady solution. When the range of
/// steady angles over a sweep is given, the bounds become that range widened
/// by `margin` and clipped to the solvable stator bounds.
inline GovernorConfig init_from_steady(const steady::SteadyStateSolution &solution,
                                       GovernorConfig tmpl,
                                       std::optional<std::pair<double, double>> observed = {},
                                       double margin = deg_to_rad(2.0),
                                       const steady::SolverOptions &solvable = {}) {
    if (!solution.feasible) {
        throw Error(ErrorKind::InfeasibleSolution,
                    "governor initialization needs a feasible steady state");
    }
    if (observed) {
        tmpl.angle_min = std::max(observed->first - margin, solvable.stator_angle_min);
        tmpl.angle_max = std::min(observed->second + margin, solvable.stator_angle_max);
    }
    tmpl.initial_angle = solution.stator_angle;
    tmpl.integrator_init = solution.stator_angle;
    tmpl.validate(solvable);
    return tmpl;
}

/// One governor step. `speed_error` is ω_t − ω_sync.
inline GovernorOutput update(GovernorState &state, const GovernorConfig &cfg,
                             double speed_error, double dt) {
    detail::require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidParameter, "dt",
                    "must be > 0");
    GovernorOutput out;
    out.error = speed_error;
    out.proportional = cfg.gains.kp * speed_error;

    // first-order derivative filter, time constant 10·dt
    const double filter_tau = 10.0 * dt;
    const double raw_rate = (speed_error - state.prev_error) / dt;
    const double derivative = state.derivative + dt / (filter_tau + dt) * (raw_rate - state.derivative);
    out.derivative = cfg.gains.kd * derivative;

    double integrator = state.integrator + cfg.gains.ki * speed_error * dt;
    out.raw = integrator + out.proportional + out.derivative;
    if (out.raw > cfg.angle_max || out.raw < cfg.angle_min) {
        // clamping anti-windup: hold the integrator while saturated
        integrator = state.integrator;
        out.raw = integrator + out.proportional + out.derivative;
        out.saturated = true;
    }
    const double clamped = std::clamp(out.raw, cfg.angle_min, cfg.angle_max);
    const double max_step = cfg.rate_limit * dt;
    out.command = std::clamp(clamped, state.command - max_step, state.command + max_step);
    out.integral = integrator;

    state.integrator = integrator;
    state.prev_error = speed_error;
    state.derivative = derivative;
    state.command = out.command;
    return out;
}

} // namespace t5drive::governor
