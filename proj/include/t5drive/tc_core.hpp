#pragma once

// Algebraic closures and three-state dynamics of a hydrodynamic torque
// converter (impeller, turbine, fixed stator).
//
// State ordering for the dynamics is (turbine speed, impeller speed, torus
// flow velocity), matching the turbine, impeller, and flow momentum
// balances in that order. All angles are radians.

#include <cmath>

#include <Eigen/Dense>

#include "t5drive/errors.hpp"
#include "t5drive/units.hpp"

namespace t5drive::tc {

inline constexpr double kMassMatrixDetFloor = 1e-12;

struct Geometry {
    double impeller_radius = 0.0;      // m
    double turbine_radius = 0.0;       // m
    double stator_radius = 0.0;        // m
    double flow_area = 0.0;            // m²
    double fluid_inertia_length = 0.0; // m
    double impeller_exit_angle = 0.0;
    double turbine_exit_angle = 0.0;
    double impeller_inlet_angle = 0.0;
    double turbine_inlet_angle = 0.0;
    double stator_inlet_angle = 0.0;
    double impeller_design_constant = 0.0; // m²
    double turbine_design_constant = 0.0;  // m²
    // stored for table fidelity; the stator does not rotate
    double stator_design_constant = 0.0; // m²

    bool operator==(const Geometry &) const = default;
};

struct FluidLoss {
    double density = 0.0;
    double friction = 0.0;
    double shock_impeller = 0.0;
    double shock_turbine = 0.0;
    double shock_stator = 0.0;

    bool operator==(const FluidLoss &) const = default;
};

struct Inertias {
    double impeller = 0.0; // kg·m²
    double turbine = 0.0;  // kg·m²
    double stator = 0.0;   // kg·m², unused (fixed stator)

    bool operator==(const Inertias &) const = default;
};

/// True when `angle` lies strictly inside (−π/2, π/2).
inline bool angle_in_open_range(double angle) {
    return std::isfinite(angle) && std::abs(angle) < 0.5 * kPi;
}

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

inline Matrix3 build_mass_matrix(const Geometry &g, const FluidLoss &fl,
                                 const Inertias &in) {
    const double coupling = fl.density * g.flow_area;
    Matrix3 m;
    m << in.turbine, 0.0, coupling * g.turbine_design_constant,
        0.0, in.impeller, coupling * g.impeller_design_constant,
        g.turbine_design_constant, g.impeller_design_constant,
        g.fluid_inertia_length;
    return m;
}

/// Immutable, validated torque converter description.
class Parameters {
  public:
    Parameters(Geometry geometry, FluidLoss fluid, Inertias inertias)
        : geometry_(geometry), fluid_(fluid), inertias_(inertias) {
        validate();
    }

    const Geometry &geometry() const noexcept { return geometry_; }
    const FluidLoss &fluid() const noexcept { return fluid_; }
    const Inertias &inertias() const noexcept { return inertias_; }

    bool operator==(const Parameters &) const = default;

  private:
    void validate() const {
        using detail::require;
        constexpr auto kInvalid = ErrorKind::InvalidParameter;
        const auto &g = geometry_;
        auto positive = [&](double v, const char *name) {
            require(std::isfinite(v) && v > 0.0, kInvalid, name, "must be > 0");
        };
        auto angle = [&](double v, const char *name) {
            require(angle_in_open_range(v), kInvalid, name,
                    "angle must lie strictly inside (-90, 90) degrees");
        };
        auto finite = [&](double v, const char *name) {
            require(std::isfinite(v), kInvalid, name, "must be finite");
        };
        positive(g.impeller_radius, "R_i");
        positive(g.turbine_radius, "R_t");
        positive(g.stator_radius, "R_s");
        positive(g.flow_area, "A");
        positive(g.fluid_inertia_length, "L_f");
        angle(g.impeller_exit_angle, "alpha_i");
        angle(g.turbine_exit_angle, "alpha_t");
        angle(g.impeller_inlet_angle, "alpha_i_in");
        angle(g.turbine_inlet_angle, "alpha_t_in");
        angle(g.stator_inlet_angle, "alpha_s_in");
        finite(g.impeller_design_constant, "S_i");
        finite(g.turbine_design_constant, "S_t");
        finite(g.stator_design_constant, "S_s");

        positive(fluid_.density, "rho");
        auto nonneg = [&](double v, const char *name) {
            require(std::isfinite(v) && v >= 0.0, kInvalid, name, "must be >= 0");
        };
        nonneg(fluid_.friction, "f");
        nonneg(fluid_.shock_impeller, "C_sh_i");
        nonneg(fluid_.shock_turbine, "C_sh_t");
        nonneg(fluid_.shock_stator, "C_sh_s");

        positive(inertias_.impeller, "I_i");
        positive(inertias_.turbine, "I_t");
        nonneg(inertias_.stator, "I_s");

        const double det = build_mass_matrix(geometry_, fluid_, inertias_).determinant();
        if (!(std::abs(det) > kMassMatrixDetFloor)) {
            throw Error(ErrorKind::SingularMassMatrix,
                        "mass matrix determinant below floor");
        }
    }

    Geometry geometry_;
    FluidLoss fluid_;
    Inertias inertias_;
};

struct State {
    double impeller_speed = 0.0; // rad/s
    double turbine_speed = 0.0;  // rad/s
    double flow_velocity = 0.0;  // m/s
};

struct Input {
    double impeller_torque = 0.0; // N·m
    double turbine_torque = 0.0;  // N·m
    double stator_angle = 0.0;    // rad, stator exit angle
};

struct ShockVelocities {
    double impeller = 0.0;
    double turbine = 0.0;
    double stator = 0.0;
};

/// Squared flow velocities relative to the impeller, turbine, and stator
/// blades.
struct RelativeVelocitiesSq {
    double impeller = 0.0;
    double turbine = 0.0;
    double stator = 0.0;
};

/// Time derivatives in dynamics order (turbine, impeller, flow).
struct Derivatives {
    double turbine_accel = 0.0;
    double impeller_accel = 0.0;
    double flow_accel = 0.0;
};

inline double volume_flow(double flow_velocity, double area) {
    return flow_velocity * area;
}

inline double steady_impeller_torque(const Parameters &p, const State &s,
                                     double stator_angle) {
    const auto &g = p.geometry();
    const double q = volume_flow(s.flow_velocity, g.flow_area);
    return p.fluid().density * q *
           (s.impeller_speed * g.impeller_radius * g.impeller_radius +
            s.flow_velocity * (g.impeller_radius * std::tan(g.impeller_exit_angle) -
                               g.stator_radius * std::tan(stator_angle)));
}

inline double steady_turbine_torque(const Parameters &p, const State &s) {
    const auto &g = p.geometry();
    const double q = volume_flow(s.flow_velocity, g.flow_area);
    return p.fluid().density * q *
           (s.turbine_speed * g.turbine_radius * g.turbine_radius -
            s.impeller_speed * g.impeller_radius * g.impeller_radius +
            s.flow_velocity * (g.turbine_radius * std::tan(g.turbine_exit_angle) -
                               g.impeller_radius * std::tan(g.impeller_exit_angle)));
}

inline ShockVelocities shock_velocities(const Parameters &p, const State &s,
                                        double stator_angle) {
    const auto &g = p.geometry();
    const double v = s.flow_velocity;
    return {
        -g.stator_radius * s.impeller_speed +
            v * (std::tan(stator_angle) - std::tan(g.impeller_inlet_angle)),
        g.impeller_radius * (s.impeller_speed - s.turbine_speed) +
            v * (std::tan(g.impeller_exit_angle) - std::tan(g.turbine_inlet_angle)),
        g.turbine_radius * s.turbine_speed +
            v * (std::tan(g.turbine_exit_angle) - std::tan(g.stator_inlet_angle)),
    };
}

inline RelativeVelocitiesSq relative_velocities(const Parameters &p,
                                                double stator_angle,
                                                double flow_velocity) {
    const auto &g = p.geometry();
    const double v2 = flow_velocity * flow_velocity;
    auto sec2 = [](double a) {
        const double c = std::cos(a);
        return 1.0 / (c * c);
    };
    return {v2 * sec2(g.impeller_exit_angle), v2 * sec2(g.turbine_exit_angle),
            v2 * sec2(stator_angle)};
}

/// Hydraulic shock plus friction loss; never negative.
inline double loss_term(const Parameters &p, const State &s, double stator_angle) {
    const auto &fl = p.fluid();
    const auto sh = shock_velocities(p, s, stator_angle);
    const auto rel = relative_velocities(p, stator_angle, s.flow_velocity);
    return 0.5 * (fl.shock_impeller * sh.impeller * sh.impeller +
                  fl.shock_turbine * sh.turbine * sh.turbine +
                  fl.shock_stator * sh.stator * sh.stator +
                  fl.friction * (rel.impeller + rel.turbine + rel.stator));
}

/// Right-hand side of the torus flow momentum balance; zero at a steady state.
inline double phi(const Parameters &p, const State &s, double stator_angle) {
    const auto &g = p.geometry();
    const double wi = s.impeller_speed;
    const double wt = s.turbine_speed;
    const double v = s.flow_velocity;
    const double ri2 = g.impeller_radius * g.impeller_radius;
    const double rt2 = g.turbine_radius * g.turbine_radius;
    const double tan_i = std::tan(g.impeller_exit_angle);
    return ri2 * wi * wi + rt2 * wt * wt - ri2 * wt * wi +
           wi * v * (g.impeller_radius * tan_i - g.stator_radius * std::tan(stator_angle)) +
           wt * v * (g.turbine_radius * std::tan(g.turbine_exit_angle) -
                     g.impeller_radius * tan_i) -
           loss_term(p, s, stator_angle);
}

inline Matrix3 mass_matrix(const Parameters &p) {
    return build_mass_matrix(p.geometry(), p.fluid(), p.inertias());
}

/// Right-hand side vector b of M·ẋ = b, in dynamics order.
inline Vector3 forcing(const Parameters &p, const State &s, const Input &u) {
    return {u.turbine_torque - steady_turbine_torque(p, s),
            u.impeller_torque - steady_impeller_torque(p, s, u.stator_angle),
            phi(p, s, u.stator_angle)};
}

inline void check_stator_angle(double stator_angle) {
    if (!angle_in_open_range(stator_angle)) {
        throw Error(ErrorKind::InvalidParameter,
                    "stator angle outside (-90, 90) degrees", "alpha_s");
    }
}

inline Derivatives derivatives(const Parameters &p, const State &s, const Input &u) {
    check_stator_angle(u.stator_angle);
    const Matrix3 m = mass_matrix(p);
    // Parameters already guarantees |det M| above the floor.
    const Vector3 x = m.partialPivLu().solve(forcing(p, s, u));
    return {x(0), x(1), x(2)};
}

/// Dynamics with the turbine speed held by an external constraint (stiff
/// bus). Returns the free accelerations and the turbine shaft torque the
/// constraint must supply.
struct PinnedTurbineDerivatives {
    double impeller_accel = 0.0;
    double flow_accel = 0.0;
    double turbine_torque = 0.0;
};

inline PinnedTurbineDerivatives derivatives_pinned_turbine(const Parameters &p,
                                                           const State &s,
                                                           double impeller_torque,
                                                           double stator_angle) {
    check_stator_angle(stator_angle);
    const auto &g = p.geometry();
    const double coupling = p.fluid().density * g.flow_area;
    const double a11 = p.inertias().impeller;
    const double a12 = coupling * g.impeller_design_constant;
    const double a21 = g.impeller_design_constant;
    const double a22 = g.fluid_inertia_length;
    const double b1 = impeller_torque - steady_impeller_torque(p, s, stator_angle);
    const double b2 = phi(p, s, stator_angle);
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) > kMassMatrixDetFloor)) {
        throw Error(ErrorKind::SingularMassMatrix, "pinned-turbine submatrix singular");
    }
    PinnedTurbineDerivatives out;
    out.impeller_accel = (b1 * a22 - a12 * b2) / det;
    out.flow_accel = (a11 * b2 - a21 * b1) / det;
    out.turbine_torque = steady_turbine_torque(p, s) +
                         coupling * g.turbine_design_constant * out.flow_accel;
    return out;
}

} // namespace t5drive::tc
