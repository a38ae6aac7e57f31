#pragma once

// Fixed-step simulation of the torque converter alone and of the closed
// drivetrain (rotor, couplers, gearbox, converter, generator, governor),
// plus the canned converter experiments.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "t5drive/drivetrain.hpp"
#include "t5drive/errors.hpp"
#include "t5drive/governor.hpp"
#include "t5drive/integrators.hpp"
#include "t5drive/steady_state.hpp"
#include "t5drive/tc_core.hpp"

namespace t5drive::sim {

using integrate::Method;
using integrate::Vector;

struct SimConfig {
    double dt = 1e-4;
    double duration = 10.0;
    Method method = Method::Rk4;
    std::size_t decimation = 1;

    void validate() const {
        using detail::require;
        require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidParameter, "dt",
                "must be > 0");
        require(std::isfinite(duration) && duration >= dt, ErrorKind::InvalidParameter,
                "duration", "must be >= dt");
        require(decimation >= 1, ErrorKind::InvalidParameter, "record_decimation",
                "must be >= 1");
    }
    std::size_t steps() const {
        return static_cast<std::size_t>(std::llround(duration / dt));
    }
    bool operator==(const SimConfig &) const = default;
};

/// Column-named, uniformly sampled simulation record.
class Trace {
  public:
    Trace() = default;
    explicit Trace(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string> &columns() const noexcept { return columns_; }
    const std::vector<std::vector<double>> &rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    void append(std::vector<double> row) {
        if (row.size() != columns_.size()) {
            throw Error(ErrorKind::DimensionMismatch, "trace row width mismatch");
        }
        rows_.push_back(std::move(row));
    }

    std::size_t index_of(std::string_view name) const {
        const auto it = std::find(columns_.begin(), columns_.end(), name);
        if (it == columns_.end()) {
            throw Error(ErrorKind::InvalidParameter, "no trace column " + std::string(name),
                        std::string(name));
        }
        return static_cast<std::size_t>(it - columns_.begin());
    }

    std::vector<double> column(std::string_view name) const {
        const std::size_t j = index_of(name);
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto &r : rows_) {
            out.push_back(r[j]);
        }
        return out;
    }

    bool operator==(const Trace &) const = default;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// One checked explicit step of any model exposing rhs(t, x).
template <typename Model>
Vector step(const Model &model, double t, const Vector &x, double dt,
            Method method = Method::Rk4, std::size_t step_index = 0) {
    detail::require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidParameter, "dt",
                    "must be > 0");
    return integrate::checked_step(
        method, [&](double tt, const Vector &xx) { return model.rhs(tt, xx); }, t, x, dt,
        step_index);
}

// ---------------------------------------------------------------------------
// Converter alone, driven by prescribed shaft torques.

/// State vector order (turbine speed, impeller speed, flow velocity).
inline Vector to_vector(const tc::State &s) {
    Vector x(3);
    x << s.turbine_speed, s.impeller_speed, s.flow_velocity;
    return x;
}

inline tc::State to_state(const Vector &x) { return {x(1), x(0), x(2)}; }

struct TcModel {
    const tc::Parameters *params = nullptr;
    std::function<double(double)> impeller_torque;
    std::function<double(double)> turbine_torque;
    double stator_angle = 0.0;

    tc::Input input(double t) const {
        return {impeller_torque(t), turbine_torque(t), stator_angle};
    }

    Vector rhs(double t, const Vector &x) const {
        const auto d = tc::derivatives(*params, to_state(x), input(t));
        Vector out(3);
        out << d.turbine_accel, d.impeller_accel, d.flow_accel;
        return out;
    }
};

inline TcModel constant_torque_model(const tc::Parameters &p, const tc::Input &u) {
    return {&p, [v = u.impeller_torque](double) { return v; },
            [v = u.turbine_torque](double) { return v; }, u.stator_angle};
}

inline Trace simulate_tc(const TcModel &model, const tc::State &initial,
                         const SimConfig &cfg) {
    cfg.validate();
    Trace trace({"t", "omega_t", "omega_i", "V", "tau_i", "tau_t", "alpha_s"});
    Vector x = to_vector(initial);
    auto record = [&](double t) {
        const auto u = model.input(t);
        trace.append({t, x(0), x(1), x(2), u.impeller_torque, u.turbine_torque,
                      u.stator_angle});
    };
    record(0.0);
    const std::size_t n = cfg.steps();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        x = step(model, t, x, cfg.dt, cfg.method, k);
        if ((k + 1) % cfg.decimation == 0) {
            record(static_cast<double>(k + 1) * cfg.dt);
        }
    }
    return trace;
}

/// Final state of a converter-only run without recording a trace.
inline tc::State integrate_tc(const TcModel &model, const tc::State &initial,
                              const SimConfig &cfg) {
    cfg.validate();
    Vector x = to_vector(initial);
    const std::size_t n = cfg.steps();
    for (std::size_t k = 0; k < n; ++k) {
        x = step(model, static_cast<double>(k) * cfg.dt, x, cfg.dt, cfg.method, k);
    }
    return to_state(x);
}

// ---------------------------------------------------------------------------
// Frequency response of the converter to impeller torque disturbances.

struct FrequencySweepSpec {
    double tau_ie = 100.0;    // N·m
    double amplitude = 10.0;  // N·m
    double f_lo = 0.5;        // Hz
    double f_hi = 100.0;      // Hz
    int points_per_decade = 20;
    double tau_te = -150.0;   // N·m
    double settle_time = 2.0; // s, extended to at least 10 forcing periods
    double measure_time = 2.0; // s, extended to at least a quarter of the run
    double dt = 1e-4;
    double stator_angle = deg_to_rad(55.62);

    void validate() const {
        using detail::require;
        constexpr auto kInvalid = ErrorKind::InvalidParameter;
        require(std::isfinite(f_lo) && f_lo > 0.0, kInvalid, "f_lo", "must be > 0");
        require(std::isfinite(f_hi) && f_hi > f_lo, kInvalid, "f_hi", "must be > f_lo");
        require(points_per_decade >= 1, kInvalid, "points_per_decade", "must be >= 1");
        require(std::isfinite(settle_time) && settle_time > 0.0, kInvalid, "settle_time",
                "must be > 0");
        require(std::isfinite(measure_time) && measure_time > 0.0, kInvalid,
                "measure_time", "must be > 0");
        require(std::isfinite(amplitude) && amplitude >= 0.0, kInvalid, "amplitude",
                "must be >= 0");
        require(std::isfinite(dt) && dt > 0.0, kInvalid, "dt", "must be > 0");
        require(tc::angle_in_open_range(stator_angle), kInvalid, "alpha_s",
                "must lie inside (-90, 90) degrees");
    }

    /// Logarithmic grid from f_lo to f_hi inclusive.
    std::vector<double> frequencies() const {
        validate();
        const double decades = std::log10(f_hi / f_lo);
        const auto n = static_cast<std::size_t>(
            std::floor(decades * points_per_decade + 1e-9));
        std::vector<double> out;
        for (std::size_t k = 0; k <= n; ++k) {
            out.push_back(f_lo * std::pow(10.0, static_cast<double>(k) / points_per_decade));
        }
        if (f_hi - out.back() > 1e-9 * f_hi) {
            out.push_back(f_hi);
        } else {
            out.back() = f_hi;
        }
        return out;
    }
    bool operator==(const FrequencySweepSpec &) const = default;
};

struct FrequencyPoint {
    double frequency = 0.0;
    double impeller_amplitude = 0.0; // rad/s
    double turbine_amplitude = 0.0;  // rad/s
    double ratio = 0.0;              // turbine / impeller amplitude
};

inline double half_peak_to_peak(std::span<const double> signal) {
    if (signal.empty()) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(signal.begin(), signal.end());
    return 0.5 * (*hi - *lo);
}

/// Converter response at one forcing frequency, started from the steady
/// state of the nominal torques.
inline FrequencyPoint run_frequency_point(const tc::Parameters &p,
                                          const FrequencySweepSpec &spec, double f,
                                          const tc::State &equilibrium) {
    const double settle = std::max(spec.settle_time, 10.0 / f);
    const double measure = std::max(spec.measure_time, settle / 3.0);
    const double w = 2.0 * kPi * f;
    TcModel model{&p,
                  [&](double t) { return spec.tau_ie + spec.amplitude * std::sin(w * t); },
                  [&](double) { return spec.tau_te; }, spec.stator_angle};
    const auto n_settle = static_cast<std::size_t>(std::llround(settle / spec.dt));
    const auto n_total = n_settle + static_cast<std::size_t>(std::llround(measure / spec.dt));

    Vector x = to_vector(equilibrium);
    double wi_min = std::numeric_limits<double>::infinity();
    double wi_max = -wi_min;
    double wt_min = wi_min;
    double wt_max = -wi_min;
    for (std::size_t k = 0; k < n_total; ++k) {
        try {
            x = step(model, static_cast<double>(k) * spec.dt, x, spec.dt, Method::Rk4, k);
        } catch (const Error &e) {
            throw Error(e.kind(), std::string(e.what()) + " at f=" + std::to_string(f) + " Hz");
        }
        if (k + 1 >= n_settle) {
            wt_min = std::min(wt_min, x(0));
            wt_max = std::max(wt_max, x(0));
            wi_min = std::min(wi_min, x(1));
            wi_max = std::max(wi_max, x(1));
        }
    }
    FrequencyPoint pt;
    pt.frequency = f;
    pt.impeller_amplitude = 0.5 * (wi_max - wi_min);
    pt.turbine_amplitude = 0.5 * (wt_max - wt_min);
    pt.ratio = pt.impeller_amplitude > 0.0 ? pt.turbine_amplitude / pt.impeller_amplitude : 0.0;
    return pt;
}

inline std::vector<FrequencyPoint> run_frequency_sweep(const tc::Parameters &p,
                                                       const FrequencySweepSpec &spec,
                                                       std::optional<std::vector<double>> freqs = {}) {
    spec.validate();
    const tc::State eq =
        steady::solve_torque_equilibrium(p, spec.stator_angle, spec.tau_ie, spec.tau_te);
    const auto grid = freqs ? *freqs : spec.frequencies();
    // points are independent; run them concurrently and merge in grid order
    std::vector<std::future<FrequencyPoint>> jobs;
    jobs.reserve(grid.size());
    for (double f : grid) {
        jobs.push_back(std::async(std::launch::async,
                                  [&p, &spec, &eq, f] { return run_frequency_point(p, spec, f, eq); }));
    }
    std::vector<FrequencyPoint> out;
    out.reserve(grid.size());
    for (auto &j : jobs) {
        out.push_back(j.get());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Torque ratio characteristic.

struct TorqueRatioPoint {
    double nu = 0.0;
    double torque_ratio = 0.0; // |τ_t0| / τ_i0
    double impeller_torque = 0.0;
    double turbine_torque = 0.0;
    double flow_velocity = 0.0;
    bool feasible = false;
    std::optional<ErrorKind> failure;
};

inline std::vector<TorqueRatioPoint> run_torque_ratio_curve(const tc::Parameters &p,
                                                            double omega_i,
                                                            std::span<const double> nu_grid,
                                                            double stator_angle) {
    detail::require(std::isfinite(omega_i) && omega_i > 0.0, ErrorKind::InvalidParameter,
                    "omega_i", "must be > 0");
    std::vector<TorqueRatioPoint> out;
    for (double nu : nu_grid) {
        detail::require(nu > 0.0 && nu <= 1.0, ErrorKind::InvalidParameter, "nu",
                        "torque-ratio grid must lie in (0, 1]");
        TorqueRatioPoint pt;
        pt.nu = nu;
        try {
            const double omega_t = nu * omega_i;
            pt.flow_velocity = steady::balance_flow_velocity(p, omega_i, omega_t, stator_angle);
            const tc::State s{omega_i, omega_t, pt.flow_velocity};
            pt.impeller_torque = tc::steady_impeller_torque(p, s, stator_angle);
            pt.turbine_torque = tc::steady_turbine_torque(p, s);
            if (!(pt.impeller_torque > 0.0)) {
                throw Error(ErrorKind::NoPhysicalRoot, "non-positive impeller torque");
            }
            pt.torque_ratio = -pt.turbine_torque / pt.impeller_torque;
            pt.feasible = true;
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::InvalidParameter) {
                throw;
            }
            pt.failure = e.kind();
        }
        out.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integrated drivetrain.

/// Rotor torque as a multiple of the steady operating torque, with an
/// optional step.
struct RotorTorqueProfile {
    double step_time = std::numeric_limits<double>::infinity();
    double step_fraction = 0.0; // +0.1 = +10 %

    double torque(double t, double steady_torque) const {
        return t >= step_time ? steady_torque * (1.0 + step_fraction) : steady_torque;
    }
    bool operator==(const RotorTorqueProfile &) const = default;
};

struct IntegratedConfig {
    tc::Parameters tc;
    steady::RatedSpec rated;
    steady::SolverOptions solver;
    double operating_nu = 1.0;
    double rotor_inertia = 0.0; // kg·m²
    drivetrain::CouplerParams low_speed_coupler;  // rotor to gearbox input
    drivetrain::GearboxConfig gearbox;
    drivetrain::CouplerParams high_speed_coupler; // gearbox output to impeller
    drivetrain::CouplerParams generator_coupler;  // converter turbine to generator
    drivetrain::GeneratorBoundary generator;
    governor::GovernorConfig governor;
    bool governor_enabled = true;

    void validate() const {
        rated.validate();
        solver.validate();
        detail::require(std::isfinite(rotor_inertia) && rotor_inertia > 0.0,
                        ErrorKind::InvalidParameter, "drivetrain.rotor_inertia", "must be > 0");
        low_speed_coupler.validate("drivetrain.low_speed_coupler");
        high_speed_coupler.validate("drivetrain.high_speed_coupler");
        gearbox.validate();
        generator.validate();
        if (generator.mode == drivetrain::GeneratorMode::Swing) {
            generator_coupler.validate("drivetrain.generator_coupler");
        }
        detail::require(generator.rated_speed_rpm == rated.rated_speed_rpm,
                        ErrorKind::InvalidParameter, "generator.N",
                        "generator synchronous speed must match rated.N");
    }
};

/// Flat state layout of the integrated model.
struct Layout {
    std::size_t rotor_speed = 0;
    std::size_t lss_twist = 1;
    std::size_t gb_speed = 2; // body_count entries
    std::size_t gb_twist = 0; // stage count entries
    std::size_t bearing_pos = 0;
    std::size_t bearing_vel = 0;
    std::size_t hss_twist = 0;
    std::size_t turbine = 0; // converter turbine speed
    std::size_t impeller = 0;
    std::size_t flow = 0;
    std::size_t gen_twist = 0; // swing mode only
    std::size_t gen_speed = 0;
    std::size_t gen_angle = 0;
    std::size_t size = 0;
    std::size_t bodies = 0;
    std::size_t stages = 0;
    std::size_t bearings = 0;
    bool swing = false;

    explicit Layout(const IntegratedConfig &cfg) {
        bodies = cfg.gearbox.body_count();
        stages = cfg.gearbox.stages.size();
        bearings = cfg.gearbox.bearing_count();
        swing = cfg.generator.mode == drivetrain::GeneratorMode::Swing;
        gb_twist = gb_speed + bodies;
        bearing_pos = gb_twist + stages;
        bearing_vel = bearing_pos + bearings;
        hss_twist = bearing_vel + bearings;
        turbine = hss_twist + 1;
        impeller = turbine + 1;
        flow = impeller + 1;
        size = flow + 1;
        if (swing) {
            gen_twist = size;
            gen_speed = size + 1;
            gen_angle = size + 2;
            size += 3;
        }
    }
};

/// Signals derived from the state at one instant.
struct IntegratedSignals {
    double rotor_torque = 0.0;
    double lss_torque = 0.0;
    double hss_torque = 0.0; // impeller shaft torque τ_i
    double turbine_torque = 0.0; // τ_t on the converter turbine
    double generator_torque = 0.0; // electrical torque (swing) or bus reaction
};

class IntegratedModel {
  public:
    IntegratedModel(IntegratedConfig cfg, RotorTorqueProfile profile)
        : cfg_(std::move(cfg)), profile_(profile), layout_(cfg_) {
        cfg_.validate();
        operating_point_ = steady::solve_operating_point(cfg_.tc, cfg_.rated, cfg_.operating_nu,
                                                         cfg_.solver);
        if (!operating_point_.feasible) {
            throw Error(ErrorKind::InfeasibleInitialization,
                        "no steady state at the configured operating speed ratio");
        }
        build_initial_state();
        stator_angle_ = operating_point_.stator_angle;
    }

    const IntegratedConfig &config() const noexcept { return cfg_; }
    const Layout &layout() const noexcept { return layout_; }
    const steady::SteadyStateSolution &operating_point() const noexcept {
        return operating_point_;
    }
    const Vector &initial_state() const noexcept { return initial_; }
    double steady_rotor_torque() const noexcept { return steady_rotor_torque_; }

    double stator_angle() const noexcept { return stator_angle_; }
    void set_stator_angle(double a) { stator_angle_ = a; }

    drivetrain::GearboxState gearbox_state(const Vector &x) const {
        const auto &l = layout_;
        drivetrain::GearboxState g;
        g.speeds.assign(x.data() + l.gb_speed, x.data() + l.gb_speed + l.bodies);
        g.twists.assign(x.data() + l.gb_twist, x.data() + l.gb_twist + l.stages);
        g.bearing_position.assign(x.data() + l.bearing_pos, x.data() + l.bearing_pos + l.bearings);
        g.bearing_velocity.assign(x.data() + l.bearing_vel, x.data() + l.bearing_vel + l.bearings);
        return g;
    }

    IntegratedSignals signals(double t, const Vector &x) const {
        return evaluate(t, x, nullptr);
    }

    Vector rhs(double t, const Vector &x) const {
        Vector dx = Vector::Zero(static_cast<Eigen::Index>(layout_.size));
        evaluate(t, x, &dx);
        return dx;
    }

  private:
    IntegratedSignals evaluate(double t, const Vector &x, Vector *dx) const {
        using namespace drivetrain;
        const auto &l = layout_;
        const auto &gb = cfg_.gearbox;
        IntegratedSignals sig;
        const std::size_t out_body = l.bodies - 1;
        const double w_rotor = x(l.rotor_speed);
        const double w_in = x(l.gb_speed);
        const double w_out = x(l.gb_speed + out_body);
        const double w_t = x(l.turbine);
        const double w_i = x(l.impeller);
        const tc::State tcs{w_i, w_t, x(l.flow)};

        sig.rotor_torque = profile_.torque(t, steady_rotor_torque_);
        // low-speed coupler: body 1 = gearbox input, body 2 = rotor
        sig.lss_torque = coupler_torque(cfg_.low_speed_coupler, {x(l.lss_twist)}, w_in, w_rotor);
        // high-speed coupler: body 1 = impeller, body 2 = gearbox output
        sig.hss_torque = coupler_torque(cfg_.high_speed_coupler, {x(l.hss_twist)}, w_i, w_out);

        double gen_coupler = 0.0;
        if (l.swing) {
            // generator coupler: body 1 = generator, body 2 = converter turbine
            gen_coupler = coupler_torque(cfg_.generator_coupler, {x(l.gen_twist)},
                                         x(l.gen_speed), w_t);
            sig.turbine_torque = -gen_coupler;
            const auto resp = generator_torque(cfg_.generator, x(l.gen_speed), x(l.gen_angle));
            sig.generator_torque = *resp.torque;
        }

        if (!dx) {
            if (!l.swing) {
                const auto pinned = tc::derivatives_pinned_turbine(cfg_.tc, tcs, sig.hss_torque,
                                                                   stator_angle_);
                sig.turbine_torque = pinned.turbine_torque;
                sig.generator_torque = -pinned.turbine_torque;
            }
            return sig;
        }

        auto &d = *dx;
        d(l.rotor_speed) = (sig.rotor_torque - sig.lss_torque) / cfg_.rotor_inertia;
        d(l.lss_twist) = coupler_twist_rate(w_in, w_rotor);

        const auto gdot = gearbox_derivatives(gb, gearbox_state(x), sig.lss_torque, -sig.hss_torque);
        for (std::size_t i = 0; i < l.bodies; ++i) {
            d(l.gb_speed + i) = gdot.speeds[i];
        }
        for (std::size_t k = 0; k < l.stages; ++k) {
            d(l.gb_twist + k) = gdot.twists[k];
        }
        for (std::size_t b = 0; b < l.bearings; ++b) {
            d(l.bearing_pos + b) = gdot.bearing_position[b];
            d(l.bearing_vel + b) = gdot.bearing_velocity[b];
        }
        d(l.hss_twist) = coupler_twist_rate(w_i, w_out);

        if (l.swing) {
            const auto tcd = tc::derivatives(cfg_.tc, tcs,
                                             {sig.hss_torque, sig.turbine_torque, stator_angle_});
            d(l.turbine) = tcd.turbine_accel;
            d(l.impeller) = tcd.impeller_accel;
            d(l.flow) = tcd.flow_accel;
            d(l.gen_twist) = coupler_twist_rate(x(l.gen_speed), w_t);
            d(l.gen_speed) = (gen_coupler - sig.generator_torque) / cfg_.generator.inertia;
            d(l.gen_angle) = x(l.gen_speed) - cfg_.generator.sync_speed();
        } else {
            const auto pinned =
                tc::derivatives_pinned_turbine(cfg_.tc, tcs, sig.hss_torque, stator_angle_);
            d(l.turbine) = 0.0;
            d(l.impeller) = pinned.impeller_accel;
            d(l.flow) = pinned.flow_accel;
        }
        return sig;
    }

    void build_initial_state() {
        using namespace drivetrain;
        const auto &l = layout_;
        const auto &op = operating_point_;
        initial_ = Vector::Zero(static_cast<Eigen::Index>(l.size));
        initial_(l.turbine) = op.turbine_speed;
        initial_(l.impeller) = op.impeller_speed;
        initial_(l.flow) = op.flow_velocity;

        // impeller receives +T_hss = τ_i at zero slip
        initial_(l.hss_twist) = op.impeller_torque / cfg_.high_speed_coupler.stiffness;
        const auto gsteady = gearbox_steady(cfg_.gearbox, op.impeller_speed, op.impeller_torque);
        for (std::size_t i = 0; i < l.bodies; ++i) {
            initial_(l.gb_speed + i) = gsteady.state.speeds[i];
        }
        for (std::size_t k = 0; k < l.stages; ++k) {
            initial_(l.gb_twist + k) = gsteady.state.twists[k];
        }
        for (std::size_t b = 0; b < l.bearings; ++b) {
            initial_(l.bearing_pos + b) = gsteady.state.bearing_position[b];
        }
        steady_rotor_torque_ = gsteady.input_torque;
        initial_(l.lss_twist) = gsteady.input_torque / cfg_.low_speed_coupler.stiffness;
        initial_(l.rotor_speed) = gsteady.state.speeds[0];

        if (l.swing) {
            // generator receives +T_g = −τ_t and balances it electrically
            const double t_gen = -op.turbine_torque;
            initial_(l.gen_twist) = t_gen / cfg_.generator_coupler.stiffness;
            initial_(l.gen_speed) = cfg_.generator.sync_speed();
            initial_(l.gen_angle) = t_gen / cfg_.generator.sync_coeff;
        }
    }

    IntegratedConfig cfg_;
    RotorTorqueProfile profile_;
    Layout layout_;
    steady::SteadyStateSolution operating_point_;
    Vector initial_;
    double steady_rotor_torque_ = 0.0;
    double stator_angle_ = 0.0;
};

inline std::vector<std::string> integrated_columns(const Layout &l) {
    std::vector<std::string> c{"t", "omega_rotor", "omega_i", "omega_t", "V", "tau_rotor",
                               "tau_i", "tau_t", "alpha_s", "lss_twist", "hss_twist"};
    for (std::size_t i = 0; i < l.bodies; ++i) {
        c.push_back("gb_speed_" + std::to_string(i));
    }
    for (std::size_t k = 0; k < l.stages; ++k) {
        c.push_back("gb_twist_" + std::to_string(k));
    }
    for (std::size_t b = 0; b < l.bearings; ++b) {
        c.push_back("bearing_x_" + std::to_string(b));
    }
    if (l.swing) {
        for (const char *n : {"gen_twist", "omega_gen", "delta", "tau_e"}) {
            c.emplace_back(n);
        }
    }
    for (const char *n : {"gov_error", "gov_p", "gov_i", "gov_d", "gov_raw", "gov_cmd"}) {
        c.emplace_back(n);
    }
    return c;
}

/// Closed-loop run from the steady operating point. The governor updates
/// once per step from the turbine speed error and its command is held over
/// the step.
inline Trace run_integrated(const IntegratedConfig &cfg, const RotorTorqueProfile &profile,
                            const SimConfig &sim) {
    sim.validate();
    IntegratedModel model(cfg, profile);
    const auto &l = model.layout();
    governor::GovernorConfig gov_cfg = cfg.governor;
    if (cfg.governor_enabled) {
        gov_cfg = governor::init_from_steady(model.operating_point(), cfg.governor, std::nullopt,
                                             0.0, cfg.solver);
    }
    governor::GovernorState gov = governor::GovernorState::initial(gov_cfg);
    const double sync = cfg.generator.sync_speed();

    Trace trace(integrated_columns(l));
    Vector x = model.initial_state();
    governor::GovernorOutput gout;
    gout.command = model.stator_angle();
    gout.raw = gout.command;
    gout.integral = gov.integrator;

    auto record = [&](double t) {
        const auto sig = model.signals(t, x);
        std::vector<double> row{t, x(l.rotor_speed), x(l.impeller), x(l.turbine), x(l.flow),
                                sig.rotor_torque, sig.hss_torque, sig.turbine_torque,
                                model.stator_angle(), x(l.lss_twist), x(l.hss_twist)};
        for (std::size_t i = 0; i < l.bodies; ++i) {
            row.push_back(x(l.gb_speed + i));
        }
        for (std::size_t k = 0; k < l.stages; ++k) {
            row.push_back(x(l.gb_twist + k));
        }
        for (std::size_t b = 0; b < l.bearings; ++b) {
            row.push_back(x(l.bearing_pos + b));
        }
        if (l.swing) {
            row.insert(row.end(), {x(l.gen_twist), x(l.gen_speed), x(l.gen_angle),
                                   sig.generator_torque});
        }
        row.insert(row.end(), {gout.error, gout.proportional, gout.integral, gout.derivative,
                               gout.raw, gout.command});
        trace.append(std::move(row));
    };

    record(0.0);
    const std::size_t n = sim.steps();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sim.dt;
        if (cfg.governor_enabled) {
            gout = governor::update(gov, gov_cfg, x(l.turbine) - sync, sim.dt);
            model.set_stator_angle(gout.command);
        }
        x = step(model, t, x, sim.dt, sim.method, k);
        if ((k + 1) % sim.decimation == 0) {
            record(static_cast<double>(k + 1) * sim.dt);
        }
    }
    return trace;
}

} // namespace t5drive::sim
