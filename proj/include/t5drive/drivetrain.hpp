#pragma once

// Torsional couplers, a lumped-parameter gearbox chain, and the generator
// boundary that close the drivetrain around the torque converter.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "t5drive/errors.hpp"
#include "t5drive/steady_state.hpp"

namespace t5drive::drivetrain {

/// Spring-damper shaft between two bodies.
struct CouplerParams {
    double stiffness = 0.0; // N·m/rad
    double damping = 0.0;   // N·m·s/rad

    void validate(std::string_view name = "coupler") const {
        detail::require(std::isfinite(stiffness) && std::isfinite(damping) &&
                            stiffness >= 0.0 && damping >= 0.0 &&
                            (stiffness > 0.0 || damping > 0.0),
                        ErrorKind::InvalidParameter, name,
                        "K_s, C_s must be >= 0 and not both zero");
    }
    bool operator==(const CouplerParams &) const = default;
};

struct CouplerState {
    double twist = 0.0; // rad, time integral of (ω_2 − ω_1)
};

/// Torque transmitted by the coupler. Body 1 receives +T_r, body 2 receives
/// −T_r; the twist evolves as dθ/dt = ω_2 − ω_1.
inline double coupler_torque(const CouplerParams &p, const CouplerState &st,
                             double omega_1, double omega_2) {
    return p.stiffness * st.twist + p.damping * (omega_2 - omega_1);
}

inline double coupler_twist_rate(double omega_1, double omega_2) {
    return omega_2 - omega_1;
}

/// Optional radial bearing degree of freedom carried by a stage. The mesh
/// force is the mesh torque over the base radius.
struct BearingDof {
    double mass = 0.0;        // kg
    double stiffness = 0.0;   // N/m
    double damping = 0.0;     // N·s/m
    double base_radius = 0.0; // m

    bool operator==(const BearingDof &) const = default;
};

/// One gear mesh and the body on its output side. `ratio` follows
/// ω_out = ω_in / ratio, so a speed-increasing stage has ratio < 1.
struct GearStage {
    double inertia = 0.0;        // kg·m², output-side body
    double ratio = 1.0;
    double mesh_stiffness = 0.0; // N·m/rad, referred to the output side
    double mesh_damping = 0.0;   // N·m·s/rad
    std::optional<BearingDof> bearing;

    bool operator==(const GearStage &) const = default;
};

/// Bodies are numbered 0..n: body 0 is the input shaft, body k+1 the output
/// side of stage k. External torques act on body 0 (input) and body n
/// (output).
struct GearboxConfig {
    double input_inertia = 0.0; // kg·m²
    std::vector<GearStage> stages;

    std::size_t body_count() const { return stages.size() + 1; }
    std::size_t bearing_count() const {
        std::size_t n = 0;
        for (const auto &s : stages) {
            n += s.bearing ? 1 : 0;
        }
        return n;
    }
    /// Input speed over output speed across the whole chain.
    double overall_ratio() const {
        double r = 1.0;
        for (const auto &s : stages) {
            r *= s.ratio;
        }
        return r;
    }

    void validate() const {
        using detail::require;
        constexpr auto kInvalid = ErrorKind::InvalidParameter;
        require(std::isfinite(input_inertia) && input_inertia > 0.0, kInvalid,
                "gearbox.input_inertia", "must be > 0");
        require(!stages.empty(), kInvalid, "gearbox.stages", "need at least one stage");
        for (std::size_t k = 0; k < stages.size(); ++k) {
            const auto &s = stages[k];
            const std::string at = "gearbox.stages[" + std::to_string(k) + "]";
            require(std::isfinite(s.inertia) && s.inertia > 0.0, kInvalid, at + ".inertia",
                    "must be > 0");
            require(std::isfinite(s.ratio) && s.ratio > 0.0, kInvalid, at + ".ratio",
                    "must be > 0");
            require(std::isfinite(s.mesh_stiffness) && s.mesh_stiffness > 0.0, kInvalid,
                    at + ".mesh_stiffness", "must be > 0");
            require(std::isfinite(s.mesh_damping) && s.mesh_damping >= 0.0, kInvalid,
                    at + ".mesh_damping", "must be >= 0");
            if (s.bearing) {
                const auto &b = *s.bearing;
                require(std::isfinite(b.mass) && b.mass > 0.0, kInvalid,
                        at + ".bearing.mass", "must be > 0");
                require(std::isfinite(b.stiffness) && b.stiffness > 0.0, kInvalid,
                        at + ".bearing.stiffness", "must be > 0");
                require(std::isfinite(b.damping) && b.damping >= 0.0, kInvalid,
                        at + ".bearing.damping", "must be >= 0");
                require(std::isfinite(b.base_radius) && b.base_radius > 0.0, kInvalid,
                        at + ".bearing.base_radius", "must be > 0");
            }
        }
    }
    bool operator==(const GearboxConfig &) const = default;
};

inline double body_inertia(const GearboxConfig &cfg, std::size_t body) {
    return body == 0 ? cfg.input_inertia : cfg.stages[body - 1].inertia;
}

/// Body speeds, mesh twists (output side), and bearing displacement/velocity
/// for each stage that carries a bearing DOF, in stage order.
struct GearboxState {
    std::vector<double> speeds;
    std::vector<double> twists;
    std::vector<double> bearing_position;
    std::vector<double> bearing_velocity;

    static GearboxState zeros(const GearboxConfig &cfg) {
        GearboxState s;
        s.speeds.assign(cfg.body_count(), 0.0);
        s.twists.assign(cfg.stages.size(), 0.0);
        s.bearing_position.assign(cfg.bearing_count(), 0.0);
        s.bearing_velocity.assign(cfg.bearing_count(), 0.0);
        return s;
    }
};

inline void check_dimensions(const GearboxConfig &cfg, const GearboxState &s) {
    if (s.speeds.size() != cfg.body_count() || s.twists.size() != cfg.stages.size() ||
        s.bearing_position.size() != cfg.bearing_count() ||
        s.bearing_velocity.size() != cfg.bearing_count()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "gearbox state does not match its configuration");
    }
}

/// Mesh torque of stage k acting on its output body.
inline double mesh_torque(const GearboxConfig &cfg, const GearboxState &s, std::size_t k) {
    const auto &st = cfg.stages[k];
    const double slip = s.speeds[k] / st.ratio - s.speeds[k + 1];
    return st.mesh_stiffness * s.twists[k] + st.mesh_damping * slip;
}

/// State derivatives of the chain under external torques on the input and
/// output bodies. Stage k's mesh pushes its output body with +T_k and
/// reacts on its input body with −T_k / ratio_k, so mesh power flows
/// through unchanged apart from spring storage and damper loss.
inline GearboxState gearbox_derivatives(const GearboxConfig &cfg, const GearboxState &s,
                                        double input_torque, double output_torque) {
    check_dimensions(cfg, s);
    const std::size_t n = cfg.stages.size();
    GearboxState d = GearboxState::zeros(cfg);
    std::vector<double> torque(n + 1, 0.0);
    torque[0] += input_torque;
    torque[n] += output_torque;
    std::size_t b = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto &st = cfg.stages[k];
        const double t_mesh = mesh_torque(cfg, s, k);
        torque[k + 1] += t_mesh;
        torque[k] -= t_mesh / st.ratio;
        d.twists[k] = s.speeds[k] / st.ratio - s.speeds[k + 1];
        if (st.bearing) {
            const auto &br = *st.bearing;
            const double force = t_mesh / br.base_radius;
            d.bearing_position[b] = s.bearing_velocity[b];
            d.bearing_velocity[b] = (force - br.stiffness * s.bearing_position[b] -
                                     br.damping * s.bearing_velocity[b]) /
                                    br.mass;
            ++b;
        }
    }
    for (std::size_t i = 0; i <= n; ++i) {
        d.speeds[i] = torque[i] / body_inertia(cfg, i);
    }
    return d;
}

/// Kinetic plus mesh spring energy of the torsional chain.
inline double gearbox_energy(const GearboxConfig &cfg, const GearboxState &s) {
    check_dimensions(cfg, s);
    double e = 0.0;
    for (std::size_t i = 0; i < cfg.body_count(); ++i) {
        e += 0.5 * body_inertia(cfg, i) * s.speeds[i] * s.speeds[i];
    }
    for (std::size_t k = 0; k < cfg.stages.size(); ++k) {
        e += 0.5 * cfg.stages[k].mesh_stiffness * s.twists[k] * s.twists[k];
    }
    return e;
}

/// Steady spin of the chain transmitting `output_load` (the torque the
/// output body delivers to its load) with the output body at
/// `output_speed`. Returns the state and the input torque that holds it.
struct GearboxSteady {
    GearboxState state;
    double input_torque = 0.0;
};

inline GearboxSteady gearbox_steady(const GearboxConfig &cfg, double output_speed,
                                    double output_load) {
    cfg.validate();
    const std::size_t n = cfg.stages.size();
    GearboxSteady out{GearboxState::zeros(cfg), 0.0};
    auto &s = out.state;
    s.speeds[n] = output_speed;
    double t_mesh = output_load; // mesh n-1 balances the load on body n
    std::vector<double> mesh(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        s.speeds[k] = s.speeds[k + 1] * cfg.stages[k].ratio;
        mesh[k] = t_mesh;
        s.twists[k] = t_mesh / cfg.stages[k].mesh_stiffness;
        t_mesh /= cfg.stages[k].ratio; // torque on input body k, carried by mesh k-1
    }
    out.input_torque = t_mesh;
    std::size_t b = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (cfg.stages[k].bearing) {
            const auto &br = *cfg.stages[k].bearing;
            s.bearing_position[b] = mesh[k] / br.base_radius / br.stiffness;
            ++b;
        }
    }
    return out;
}

enum class GeneratorMode { IdealBus, Swing };

inline std::string_view to_string(GeneratorMode m) {
    return m == GeneratorMode::IdealBus ? "ideal-bus" : "swing";
}

struct GeneratorBoundary {
    GeneratorMode mode = GeneratorMode::IdealBus;
    double rated_speed_rpm = 0.0;
    double inertia = 0.0;      // kg·m², swing mode
    double damping = 0.0;      // N·m·s/rad, swing mode
    double sync_coeff = 0.0;   // N·m/rad, swing mode

    double sync_speed() const { return steady::synchronous_speed(rated_speed_rpm); }

    void validate() const {
        using detail::require;
        constexpr auto kInvalid = ErrorKind::InvalidParameter;
        require(std::isfinite(rated_speed_rpm) && rated_speed_rpm > 0.0, kInvalid,
                "generator.N", "must be > 0");
        if (mode == GeneratorMode::Swing) {
            require(std::isfinite(inertia) && inertia > 0.0, kInvalid, "generator.J",
                    "must be > 0 in swing mode");
            require(std::isfinite(damping) && damping >= 0.0, kInvalid, "generator.D",
                    "must be >= 0 in swing mode");
            require(std::isfinite(sync_coeff) && sync_coeff > 0.0, kInvalid,
                    "generator.K_sync", "must be > 0 in swing mode");
        }
    }
    bool operator==(const GeneratorBoundary &) const = default;
};

/// Electrical torque and rotor-angle rate of the generator. In ideal-bus
/// mode the machine speed is pinned to synchronous speed; the torque that
/// enforces it comes from the connected model, so `torque` is left unset.
struct GeneratorResponse {
    std::optional<double> torque;       // N·m, opposing rotation when positive
    double angle_rate = 0.0;            // dδ/dt, rad/s
    std::optional<double> pinned_speed; // rad/s
};

inline GeneratorResponse generator_torque(const GeneratorBoundary &g, double omega,
                                          double delta) {
    const double sync = g.sync_speed();
    if (g.mode == GeneratorMode::IdealBus) {
        return {std::nullopt, 0.0, sync};
    }
    return {g.sync_coeff * delta + g.damping * (omega - sync), omega - sync, std::nullopt};
}

} // namespace t5drive::drivetrain
