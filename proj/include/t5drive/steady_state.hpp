#pragma once

// Steady operating points of the torque converter across the speed-ratio
// range of a fixed-speed (grid-synchronous) wind turbine.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "t5drive/errors.hpp"
#include "t5drive/roots.hpp"
#include "t5drive/tc_core.hpp"
#include "t5drive/units.hpp"

namespace t5drive::steady {

inline constexpr double kScheduleNuMin = 0.87;
inline constexpr double kScheduleNuMax = 1.67;

struct RatedSpec {
    double rated_power = 0.0;     // W
    double rated_speed_rpm = 0.0; // generator synchronous speed

    void validate() const {
        detail::require(std::isfinite(rated_power) && rated_power > 0.0,
                        ErrorKind::InvalidParameter, "P_rated", "must be > 0");
        detail::require(std::isfinite(rated_speed_rpm) && rated_speed_rpm > 0.0,
                        ErrorKind::InvalidParameter, "N", "must be > 0");
    }
    bool operator==(const RatedSpec &) const = default;
};

/// Stator exit angle search interval and root tolerances.
struct SolverOptions {
    double stator_angle_min = deg_to_rad(5.0);
    double stator_angle_max = deg_to_rad(85.0);
    double phi_tol = 1e-10; // m²/s², absolute
    int max_iter = 200;

    void validate() const {
        detail::require(tc::angle_in_open_range(stator_angle_min) &&
                            tc::angle_in_open_range(stator_angle_max) &&
                            stator_angle_min < stator_angle_max,
                        ErrorKind::InvalidParameter, "alpha_s_bounds",
                        "need -90 < min < max < 90 degrees");
    }
    bool operator==(const SolverOptions &) const = default;
};

struct SteadyStateSolution {
    double nu = 0.0;
    double turbine_speed = 0.0;  // rad/s
    double impeller_speed = 0.0; // rad/s
    double flow_velocity = 0.0;  // m/s
    double stator_angle = 0.0;   // rad
    double turbine_torque = 0.0; // N·m
    double impeller_torque = 0.0;
    double power_loss_pct = 0.0;
    bool feasible = false;
    std::optional<ErrorKind> failure;

    tc::State state() const { return {impeller_speed, turbine_speed, flow_velocity}; }
    tc::Input input() const { return {impeller_torque, turbine_torque, stator_angle}; }
};

inline double synchronous_speed(double rpm) {
    detail::require(std::isfinite(rpm) && rpm > 0.0, ErrorKind::InvalidParameter,
                    "N", "must be > 0");
    return rpm * 120.0 * kPi / 3600.0;
}

/// Rated shaft torque, 30·P/(π·N). Equals P / synchronous_speed(N); the
/// identity is checked so an inconsistent constant cannot slip in.
inline double rated_torque(const RatedSpec &spec) {
    spec.validate();
    const double torque = 30.0 * spec.rated_power / (kPi * spec.rated_speed_rpm);
    const double via_speed = spec.rated_power / synchronous_speed(spec.rated_speed_rpm);
    if (std::abs(torque - via_speed) > 1e-12 * std::abs(torque)) {
        throw Error(ErrorKind::InvalidResult,
                    "rated torque inconsistent with synchronous speed");
    }
    return torque;
}

/// Turbine-side torque demanded at speed ratio `nu` (negative: load).
inline double turbine_torque_schedule(double nu, double tau_rated) {
    if (!(nu >= kScheduleNuMin && nu <= kScheduleNuMax)) {
        throw Error(ErrorKind::OutOfScheduleRange,
                    "speed ratio outside [0.87, 1.67]", "nu");
    }
    if (nu <= 1.0) {
        return -tau_rated;
    }
    return -tau_rated / (nu * nu);
}

/// Positive flow velocity at which the steady turbine torque equals
/// `tau_t`. The steady turbine torque is quadratic in V; when both roots are
/// non-negative the one nearest `previous` wins (smaller root without one).
inline double solve_flow_velocity(const tc::Parameters &p, double nu, double omega_t,
                                  double tau_t,
                                  std::optional<double> previous = std::nullopt) {
    detail::require(std::isfinite(nu) && nu > 0.0, ErrorKind::InvalidParameter, "nu",
                    "must be > 0");
    detail::require(std::isfinite(tau_t), ErrorKind::InvalidParameter, "tau_t",
                    "must be finite");
    const auto &g = p.geometry();
    const double omega_i = omega_t / nu;
    const double ra = p.fluid().density * g.flow_area;
    const double a = ra * (g.turbine_radius * std::tan(g.turbine_exit_angle) -
                           g.impeller_radius * std::tan(g.impeller_exit_angle));
    const double b = ra * (omega_t * g.turbine_radius * g.turbine_radius -
                           omega_i * g.impeller_radius * g.impeller_radius);
    const double c = -tau_t;
    const auto r = roots::solve_quadratic(a, b, c);

    std::optional<double> chosen;
    if (r.count > 0) {
        const bool lo_ok = r.lo >= 0.0;
        const bool hi_ok = r.hi >= 0.0;
        if (lo_ok && hi_ok && r.lo != r.hi) {
            if (previous) {
                chosen = std::abs(r.lo - *previous) <= std::abs(r.hi - *previous) ? r.lo
                                                                                  : r.hi;
            } else {
                chosen = r.lo;
            }
        } else if (hi_ok) {
            chosen = r.hi;
        }
    }
    if (!chosen) {
        throw Error(ErrorKind::NoPhysicalRoot, "no non-negative flow velocity root");
    }
    // one Newton polish on the torque residual
    double v = *chosen;
    const double slope = 2.0 * a * v + b;
    if (slope != 0.0) {
        const double refined = v - (a * v * v + b * v + c) / slope;
        if (refined >= 0.0 &&
            std::abs(a * refined * refined + b * refined + c) <
                std::abs(a * v * v + b * v + c)) {
            v = refined;
        }
    }
    return v;
}

/// Stator exit angle inside the configured bounds at which the flow
/// balance vanishes.
inline double solve_stator_angle(const tc::Parameters &p, const tc::State &s,
                                 const SolverOptions &opt = {}) {
    opt.validate();
    auto f = [&](double angle) { return tc::phi(p, s, angle); };
    const auto res = roots::find_root_bracketed(
        f, opt.stator_angle_min, opt.stator_angle_max, {opt.phi_tol, opt.max_iter});
    return res.root;
}

inline double impeller_torque_at_steady(const tc::Parameters &p, const tc::State &s,
                                        double stator_angle) {
    return tc::steady_impeller_torque(p, s, stator_angle);
}

inline double power_loss_pct(double omega_i, double tau_i, double omega_t,
                             double tau_t) {
    const double out = omega_t * std::abs(tau_t);
    if (out == 0.0) {
        throw Error(ErrorKind::ZeroOutputPower, "turbine output power is zero");
    }
    return 100.0 * (omega_i * tau_i - out) / out;
}

/// Full steady solve at one speed ratio. Failures are recorded on the
/// returned solution rather than thrown.
inline SteadyStateSolution solve_operating_point(const tc::Parameters &p,
                                                 const RatedSpec &spec, double nu,
                                                 const SolverOptions &opt = {},
                                                 std::optional<double> previous_flow = {}) {
    SteadyStateSolution sol;
    sol.nu = nu;
    sol.turbine_speed = synchronous_speed(spec.rated_speed_rpm);
    sol.impeller_speed = sol.turbine_speed / nu;
    try {
        sol.turbine_torque = turbine_torque_schedule(nu, rated_torque(spec));
        sol.flow_velocity =
            solve_flow_velocity(p, nu, sol.turbine_speed, sol.turbine_torque, previous_flow);
        sol.stator_angle = solve_stator_angle(p, sol.state(), opt);
        sol.impeller_torque = impeller_torque_at_steady(p, sol.state(), sol.stator_angle);
        sol.power_loss_pct = power_loss_pct(sol.impeller_speed, sol.impeller_torque,
                                            sol.turbine_speed, sol.turbine_torque);
        sol.feasible = true;
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::InvalidParameter) {
            throw;
        }
        sol.feasible = false;
        sol.failure = e.kind();
    }
    return sol;
}

/// Flow velocity that zeroes the flow balance at given speeds and stator
/// angle (the larger real root; the smaller one is a reverse-circulation
/// branch). The balance is exactly quadratic in V, so its coefficients are
/// recovered from three evaluations and the root is Newton-polished.
inline double balance_flow_velocity(const tc::Parameters &p, double omega_i,
                                    double omega_t, double stator_angle) {
    auto f = [&](double v) { return tc::phi(p, {omega_i, omega_t, v}, stator_angle); };
    const double h = std::max(1.0, p.geometry().impeller_radius *
                                       std::max(std::abs(omega_i), std::abs(omega_t)));
    const double f0 = f(0.0);
    const double fp = f(h);
    const double fm = f(-h);
    const double c2 = (fp + fm - 2.0 * f0) / (2.0 * h * h);
    const double c1 = (fp - fm) / (2.0 * h);
    const auto r = roots::solve_quadratic(c2, c1, f0);
    if (r.count == 0 || r.hi <= 0.0) {
        throw Error(ErrorKind::NoPhysicalRoot, "flow balance has no positive root");
    }
    double v = r.hi;
    for (int i = 0; i < 3; ++i) {
        const double slope = 2.0 * c2 * v + c1;
        if (slope == 0.0) {
            break;
        }
        const double next = v - f(v) / slope;
        if (!(std::abs(f(next)) < std::abs(f(v)))) {
            break;
        }
        v = next;
    }
    return v;
}

/// Turbine-to-impeller torque ratio |τ_t0| / τ_i0 at speed ratio `nu` with
/// the flow solved from the balance. Independent of the speed scale.
inline double torque_ratio_at(const tc::Parameters &p, double nu, double stator_angle,
                              double omega_i = 1.0) {
    const double omega_t = nu * omega_i;
    const double v = balance_flow_velocity(p, omega_i, omega_t, stator_angle);
    const tc::State s{omega_i, omega_t, v};
    return -tc::steady_turbine_torque(p, s) / tc::steady_impeller_torque(p, s, stator_angle);
}

/// Steady state of the converter driven by constant shaft torques at a fixed
/// stator angle: τ_i0 = tau_i, τ_t0 = tau_t, flow balance zero. All three
/// closures are homogeneous quadratics in (ω_i, ω_t, V), so the speed ratio
/// follows from the torque ratio alone and the scale from tau_i.
inline tc::State solve_torque_equilibrium(const tc::Parameters &p, double stator_angle,
                                          double tau_i, double tau_t) {
    detail::require(std::isfinite(tau_i) && tau_i > 0.0, ErrorKind::InvalidParameter,
                    "tau_ie", "must be > 0");
    detail::require(std::isfinite(tau_t) && tau_t < 0.0, ErrorKind::InvalidParameter,
                    "tau_te", "must be < 0");
    const double target = -tau_t / tau_i;
    auto g = [&](double nu) { return torque_ratio_at(p, nu, stator_angle) - target; };
    double nu = 0.0;
    try {
        nu = roots::find_root_bracketed(g, 1e-6, 1.0, {1e-13, 200}).root;
    } catch (const Error &) {
        throw Error(ErrorKind::NoPhysicalRoot,
                    "requested torque ratio is outside the converter characteristic");
    }
    const double v_unit = balance_flow_velocity(p, 1.0, nu, stator_angle);
    const double tau_unit = tc::steady_impeller_torque(p, {1.0, nu, v_unit}, stator_angle);
    if (!(tau_unit > 0.0)) {
        throw Error(ErrorKind::NoPhysicalRoot, "non-positive impeller torque on branch");
    }
    const double scale = std::sqrt(tau_i / tau_unit);
    return {scale, nu * scale, v_unit * scale};
}

struct SweepResult {
    std::vector<SteadyStateSolution> points;
    /// Maximal contiguous run of feasible grid points, as (nu_first, nu_last).
    std::optional<std::pair<double, double>> feasible_interval;
    /// True when every feasible point lies inside `feasible_interval`.
    bool contiguous = true;
};

inline std::vector<double> nu_grid(double lo, double hi, double step) {
    detail::require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi,
                    ErrorKind::InvalidParameter, "nu_lo", "need nu_lo <= nu_hi");
    detail::require(std::isfinite(step) && step > 0.0, ErrorKind::InvalidParameter,
                    "nu_step", "must be > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) {
        grid[k] = lo + static_cast<double>(k) * step;
    }
    return grid;
}

inline SweepResult sweep(const tc::Parameters &p, const RatedSpec &spec, double nu_lo,
                         double nu_hi, double step, const SolverOptions &opt = {}) {
    spec.validate();
    opt.validate();
    SweepResult out;
    std::optional<double> previous;
    for (double nu : nu_grid(nu_lo, nu_hi, step)) {
        auto sol = solve_operating_point(p, spec, nu, opt, previous);
        previous = sol.feasible ? std::optional<double>(sol.flow_velocity) : std::nullopt;
        out.points.push_back(sol);
    }

    std::size_t best_begin = 0;
    std::size_t best_len = 0;
    std::size_t feasible_count = 0;
    for (std::size_t i = 0; i < out.points.size();) {
        if (!out.points[i].feasible) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < out.points.size() && out.points[j].feasible) {
            ++j;
        }
        feasible_count += j - i;
        if (j - i > best_len) {
            best_begin = i;
            best_len = j - i;
        }
        i = j;
    }
    if (best_len > 0) {
        out.feasible_interval = std::make_pair(out.points[best_begin].nu,
                                               out.points[best_begin + best_len - 1].nu);
    }
    out.contiguous = feasible_count == best_len;
    return out;
}

} // namespace t5drive::steady
