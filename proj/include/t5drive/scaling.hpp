#pragma once

// Geometric up-scaling of a torque converter and the coordinate search that
// picks the amplification factor and blade-angle adjustments.

#include <array>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include "t5drive/errors.hpp"
#include "t5drive/steady_state.hpp"
#include "t5drive/tc_core.hpp"

namespace t5drive::scaling {

/// Objective value used when the unity operating point cannot be solved.
inline constexpr double kInfeasiblePenalty = 1e12; // m²/s²

inline constexpr std::size_t kAxisCount = 6;

/// Amplification factor and angle adjustments (radians). Exit adjustments
/// are applied as α_i + b_i and α_t − b_t; inlet adjustments as
/// α_i' − b_i', α_t' + b_t', α_s' + b_s'.
struct ScalingAdjustment {
    double amplification = 1.0;
    double impeller_exit = 0.0;
    double turbine_exit = 0.0;
    double impeller_inlet = 0.0;
    double turbine_inlet = 0.0;
    double stator_inlet = 0.0;

    double get(std::size_t axis) const {
        return std::array{amplification, impeller_exit, turbine_exit,
                          impeller_inlet, turbine_inlet, stator_inlet}[axis];
    }
    void set(std::size_t axis, double value) {
        std::array<double *, kAxisCount> f{&amplification, &impeller_exit, &turbine_exit,
                                           &impeller_inlet, &turbine_inlet, &stator_inlet};
        *f[axis] = value;
    }
    bool operator==(const ScalingAdjustment &) const = default;
};

/// Config key of each search axis, in search order.
inline constexpr std::array<std::string_view, kAxisCount> kAxisNames{
    "K", "b_i", "b_t", "b_i_in", "b_t_in", "b_s_in"};

inline tc::Parameters apply_scaling(const tc::Parameters &base,
                                    const ScalingAdjustment &adj) {
    detail::require(std::isfinite(adj.amplification) && adj.amplification > 0.0,
                    ErrorKind::InvalidParameter, "K", "must be > 0");
    const double k = adj.amplification;
    tc::Geometry g = base.geometry();
    g.impeller_radius *= k;
    g.turbine_radius *= k;
    g.stator_radius *= k;
    g.fluid_inertia_length *= k;
    g.flow_area *= k * k;
    g.impeller_exit_angle += adj.impeller_exit;
    g.turbine_exit_angle -= adj.turbine_exit;
    g.impeller_inlet_angle -= adj.impeller_inlet;
    g.turbine_inlet_angle += adj.turbine_inlet;
    g.stator_inlet_angle += adj.stator_inlet;
    try {
        return tc::Parameters(g, base.fluid(), base.inertias());
    } catch (const Error &e) {
        throw Error(ErrorKind::InvalidResult,
                    std::string("scaled parameters invalid: ") + e.what(), e.field());
    }
}

/// Stator angle at which the steady impeller torque equals `tau_demand`.
/// The steady impeller torque is affine in tan(α_s), so this is closed form.
inline double stator_angle_for_impeller_torque(const tc::Parameters &p,
                                               const tc::State &s, double tau_demand) {
    const auto &g = p.geometry();
    const double v = s.flow_velocity;
    if (!(v > 0.0)) {
        throw Error(ErrorKind::NoPhysicalRoot, "zero flow at unity point");
    }
    const double q_rho = p.fluid().density * g.flow_area * v;
    const double tan_s = (s.impeller_speed * g.impeller_radius * g.impeller_radius +
                          v * g.impeller_radius * std::tan(g.impeller_exit_angle) -
                          tau_demand / q_rho) /
                         (v * g.stator_radius);
    return std::atan(tan_s);
}

/// |Φ| at unity speed ratio and unity torque ratio under the rated point:
/// V from the turbine torque balance, α_s from τ_i0 = |τ_t|.
inline double unity_point_objective(const tc::Parameters &p, const steady::RatedSpec &spec) {
    try {
        const double omega = steady::synchronous_speed(spec.rated_speed_rpm);
        const double tau_t = -steady::rated_torque(spec);
        const double v = steady::solve_flow_velocity(p, 1.0, omega, tau_t);
        const tc::State s{omega, omega, v};
        const double alpha_s = stator_angle_for_impeller_torque(p, s, -tau_t);
        const double r = std::abs(tc::phi(p, s, alpha_s));
        return std::isfinite(r) ? r : kInfeasiblePenalty;
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::InvalidParameter && e.field() != "nu") {
            throw;
        }
        return kInfeasiblePenalty;
    }
}

struct GridAxis {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 2;

    /// A one-point axis (count 1, lower == upper) pins the coordinate.
    void validate(std::string_view name) const {
        const bool pinned = count == 1 && lower == upper;
        detail::require(std::isfinite(lower) && std::isfinite(upper) &&
                            (pinned || (lower < upper && count >= 2)),
                        ErrorKind::InvalidParameter, name,
                        "axis needs finite lower < upper and count >= 2 (or count 1 with lower == upper)");
    }
    double at(std::size_t k) const {
        if (count == 1) {
            return lower;
        }
        if (k + 1 == count) {
            return upper;
        }
        return lower + (upper - lower) * static_cast<double>(k) /
                           static_cast<double>(count - 1);
    }
    bool operator==(const GridAxis &) const = default;
};

struct SearchSpace {
    std::array<GridAxis, kAxisCount> axes{};

    void validate() const {
        for (std::size_t a = 0; a < kAxisCount; ++a) {
            axes[a].validate(kAxisNames[a]);
        }
    }

    /// Starting point: the grid point of each axis nearest the identity
    /// adjustment (K = 1, no angle change), lowest value on ties.
    ScalingAdjustment start() const {
        ScalingAdjustment s;
        const ScalingAdjustment identity;
        for (std::size_t a = 0; a < kAxisCount; ++a) {
            const auto &ax = axes[a];
            double best = ax.at(0);
            for (std::size_t k = 1; k < ax.count; ++k) {
                if (std::abs(ax.at(k) - identity.get(a)) < std::abs(best - identity.get(a))) {
                    best = ax.at(k);
                }
            }
            s.set(a, best);
        }
        return s;
    }
    bool operator==(const SearchSpace &) const = default;
};

/// Defaults: K in [1, 5] with 401 points, each angle adjustment in
/// [0°, 60°] with 613 points.
inline SearchSpace default_search_space() {
    SearchSpace s;
    s.axes[0] = {1.0, 5.0, 401};
    for (std::size_t a = 1; a < kAxisCount; ++a) {
        s.axes[a] = {0.0, deg_to_rad(60.0), 613};
    }
    return s;
}

struct SearchStep {
    int cycle = 0;
    std::size_t axis = 0;
    double value = 0.0;
    double objective = 0.0;
};

struct SearchResult {
    ScalingAdjustment best;
    double objective = 0.0;
    double initial_objective = 0.0;
    int cycles = 0;
    std::vector<SearchStep> history; // one row per axis scan
};

inline double adjustment_objective(const tc::Parameters &base,
                                   const steady::RatedSpec &spec,
                                   const ScalingAdjustment &adj) {
    try {
        return unity_point_objective(apply_scaling(base, adj), spec);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::InvalidResult) {
            return kInfeasiblePenalty;
        }
        throw;
    }
}

/// Cyclic coordinate descent over the per-axis grids. Each axis scan keeps
/// the grid argmin (smallest value on ties) only if it strictly improves the
/// objective; cycles repeat until one full cycle brings no improvement.
inline SearchResult greedy_search(const tc::Parameters &base, const steady::RatedSpec &spec,
                                  const SearchSpace &space, int max_cycles = 100) {
    spec.validate();
    space.validate();
    SearchResult out;
    out.best = space.start();
    out.objective = adjustment_objective(base, spec, out.best);
    out.initial_objective = out.objective;

    for (int cycle = 1; cycle <= max_cycles; ++cycle) {
        bool improved = false;
        for (std::size_t a = 0; a < kAxisCount; ++a) {
            const auto &ax = space.axes[a];
            ScalingAdjustment trial = out.best;
            double arg = out.best.get(a);
            double val = out.objective;
            for (std::size_t k = 0; k < ax.count; ++k) {
                trial.set(a, ax.at(k));
                const double obj = adjustment_objective(base, spec, trial);
                if (obj < val) {
                    val = obj;
                    arg = ax.at(k);
                }
            }
            if (val < out.objective) {
                out.best.set(a, arg);
                out.objective = val;
                improved = true;
            }
            out.history.push_back({cycle, a, out.best.get(a), out.objective});
        }
        out.cycles = cycle;
        if (!improved) {
            break;
        }
    }
    return out;
}

} // namespace t5drive::scaling
