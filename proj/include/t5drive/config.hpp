#pragma once

// Hierarchical JSON run configuration. Angles are stored in degrees in the
// file (keys ending in `_deg`) and in radians in memory. Every section except
// `tc` is optional; omitted keys take the defaults below.
//
//   name             free-form label
//   tc               converter parameters (rho, A, R_*, L_f, alpha_*_deg,
//                    I_*, C_sh_*, S_*, f, alpha_s_deg = nominal stator angle)
//   rated            P_rated (W), N (rpm)
//   steady           alpha_s_min_deg, alpha_s_max_deg, phi_tol, max_iter,
//                    nu_lo, nu_hi, nu_step, operating_nu
//   scaling          max_cycles, axes.{K, b_i_deg, b_t_deg, b_i_in_deg,
//                    b_t_in_deg, b_s_in_deg}.{lower, upper, count}
//   simulation       dt, duration, integrator, record_decimation
//   frequency_sweep  tau_ie, amplitude, f_lo, f_hi, points_per_decade,
//                    tau_te, settle_time, measure_time, dt
//   torque_curve     omega_i, nu_lo, nu_hi, nu_step
//   drivetrain       rotor_inertia, low_speed_coupler, high_speed_coupler,
//                    generator_coupler ({K_s, C_s}), gearbox.{input_inertia,
//                    stages[{inertia, ratio, mesh_stiffness, mesh_damping,
//                    bearing?{mass, stiffness, damping, base_radius}}]}
//   generator        mode (ideal-bus | swing), J, D, K_sync; speed from rated.N
//   governor         enabled, Kp, Ki, Kd, alpha_s_min_deg, alpha_s_max_deg,
//                    rate_limit_deg_per_s
//   load_step        time, fraction

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "t5drive/drivetrain.hpp"
#include "t5drive/errors.hpp"
#include "t5drive/governor.hpp"
#include "t5drive/presets.hpp"
#include "t5drive/scaling.hpp"
#include "t5drive/sim_engine.hpp"
#include "t5drive/steady_state.hpp"
#include "t5drive/tc_core.hpp"
#include "t5drive/units.hpp"

namespace t5drive::config {

using json = nlohmann::json;

struct SweepSettings {
    double nu_lo = steady::kScheduleNuMin;
    double nu_hi = steady::kScheduleNuMax;
    double nu_step = 0.001;
    bool operator==(const SweepSettings &) const = default;
};

struct TorqueCurveSettings {
    double omega_i = 200.0; // rad/s
    double nu_lo = 0.05;
    double nu_hi = 1.0;
    double nu_step = 0.05;
    bool operator==(const TorqueCurveSettings &) const = default;
};

struct ScalingSettings {
    scaling::SearchSpace space = scaling::default_search_space();
    int max_cycles = 100;
    bool operator==(const ScalingSettings &) const = default;
};

struct DrivetrainSettings {
    double rotor_inertia = 0.0;
    drivetrain::CouplerParams low_speed_coupler;
    drivetrain::CouplerParams high_speed_coupler;
    drivetrain::CouplerParams generator_coupler;
    drivetrain::GearboxConfig gearbox;
    drivetrain::GeneratorBoundary generator;
    governor::GovernorConfig governor;
    bool governor_enabled = true;
    sim::RotorTorqueProfile load_step;
    bool operator==(const DrivetrainSettings &) const = default;
};

struct Config {
    std::string name;
    tc::Parameters tc = presets::honda_crv();
    double stator_angle = presets::kHondaStatorAngle;
    std::optional<steady::RatedSpec> rated;
    steady::SolverOptions solver;
    SweepSettings sweep;
    double operating_nu = 1.0;
    std::optional<ScalingSettings> scaling;
    sim::SimConfig simulation;
    sim::FrequencySweepSpec frequency_sweep;
    TorqueCurveSettings torque_curve;
    std::optional<DrivetrainSettings> drivetrain;

    bool operator==(const Config &) const = default;

    const steady::RatedSpec &require_rated() const {
        if (!rated) {
            throw Error(ErrorKind::ValidationError, "section required by this command",
                        "rated");
        }
        return *rated;
    }

    sim::IntegratedConfig integrated() const {
        if (!drivetrain) {
            throw Error(ErrorKind::ValidationError, "section required by this command",
                        "drivetrain");
        }
        const auto &d = *drivetrain;
        return {tc,
                require_rated(),
                solver,
                operating_nu,
                d.rotor_inertia,
                d.low_speed_coupler,
                d.gearbox,
                d.high_speed_coupler,
                d.generator_coupler,
                d.generator,
                d.governor,
                d.governor_enabled};
    }
};

namespace detail {

[[noreturn]] inline void fail(const std::string &field, const std::string &what) {
    throw Error(ErrorKind::ValidationError, field + ": " + what, field);
}

/// Converts a module invariant failure into a ValidationError naming the
/// config key under `section`.
template <typename F>
auto validated(const std::string &section, F &&build) {
    try {
        return build();
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::ParseError) {
            throw;
        }
        std::string key = e.field();
        if (key.rfind("alpha", 0) == 0 && key.find("_deg") == std::string::npos &&
            key != "alpha_s_bounds") {
            key += "_deg";
        }
        if (key.find('.') == std::string::npos) {
            key = section.empty() ? key : section + "." + key;
        }
        throw Error(ErrorKind::ValidationError, e.what(), key);
    }
}

/// Object reader that tracks consumed keys and rejects unknown ones.
class Reader {
  public:
    Reader(const json &j, std::string path) : j_(&j), path_(std::move(path)) {
        if (!j.is_object()) {
            fail(path_.empty() ? "<root>" : path_, "must be an object");
        }
    }

    std::string key(std::string_view k) const {
        return path_.empty() ? std::string(k) : path_ + "." + std::string(k);
    }
    bool has(std::string_view k) const { return j_->contains(k); }

    double number(std::string_view k) {
        const json &v = get(k);
        if (!v.is_number()) {
            fail(key(k), "must be a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(key(k), "must be finite");
        }
        return x;
    }
    double number_or(std::string_view k, double fallback) {
        return has(k) ? number(k) : fallback;
    }
    double angle(std::string_view k) { return deg_to_rad(number(k)); }
    double angle_or(std::string_view k, double fallback) {
        return has(k) ? angle(k) : fallback;
    }
    std::size_t count(std::string_view k) {
        const json &v = get(k);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            fail(key(k), "must be a non-negative integer");
        }
        return v.get<std::size_t>();
    }
    int integer_or(std::string_view k, int fallback) {
        if (!has(k)) {
            return fallback;
        }
        const json &v = get(k);
        if (!v.is_number_integer()) {
            fail(key(k), "must be an integer");
        }
        return v.get<int>();
    }
    bool boolean_or(std::string_view k, bool fallback) {
        if (!has(k)) {
            return fallback;
        }
        const json &v = get(k);
        if (!v.is_boolean()) {
            fail(key(k), "must be true or false");
        }
        return v.get<bool>();
    }
    std::string string_or(std::string_view k, std::string fallback) {
        if (!has(k)) {
            return fallback;
        }
        const json &v = get(k);
        if (!v.is_string()) {
            fail(key(k), "must be a string");
        }
        return v.get<std::string>();
    }
    Reader child(std::string_view k) { return Reader(get(k), key(k)); }
    std::optional<Reader> optional_child(std::string_view k) {
        if (!has(k)) {
            return std::nullopt;
        }
        return child(k);
    }
    const json &array(std::string_view k) {
        const json &v = get(k);
        if (!v.is_array()) {
            fail(key(k), "must be an array");
        }
        return v;
    }

    void finish() const {
        for (const auto &item : j_->items()) {
            if (!used_.contains(item.key())) {
                fail(key(item.key()), "unknown key");
            }
        }
    }

  private:
    const json &get(std::string_view k) {
        if (!has(k)) {
            fail(key(k), "missing");
        }
        used_.emplace(k);
        return (*j_)[std::string(k)];
    }

    const json *j_;
    std::string path_;
    std::set<std::string, std::less<>> used_;
};

inline tc::Parameters read_tc(Reader &r, double &stator_angle) {
    tc::Geometry g;
    g.impeller_radius = r.number("R_i");
    g.turbine_radius = r.number("R_t");
    g.stator_radius = r.number("R_s");
    g.flow_area = r.number("A");
    g.fluid_inertia_length = r.number("L_f");
    g.impeller_exit_angle = r.angle("alpha_i_deg");
    g.turbine_exit_angle = r.angle("alpha_t_deg");
    g.impeller_inlet_angle = r.angle("alpha_i_in_deg");
    g.turbine_inlet_angle = r.angle("alpha_t_in_deg");
    g.stator_inlet_angle = r.angle("alpha_s_in_deg");
    g.impeller_design_constant = r.number("S_i");
    g.turbine_design_constant = r.number("S_t");
    g.stator_design_constant = r.number("S_s");
    tc::FluidLoss fl{r.number("rho"), r.number("f"), r.number("C_sh_i"), r.number("C_sh_t"),
                     r.number("C_sh_s")};
    tc::Inertias in{r.number("I_i"), r.number("I_t"), r.number("I_s")};
    stator_angle = r.angle("alpha_s_deg");
    if (!tc::angle_in_open_range(stator_angle)) {
        fail(r.key("alpha_s_deg"), "angle must lie strictly inside (-90, 90) degrees");
    }
    r.finish();
    return validated("tc", [&] { return tc::Parameters(g, fl, in); });
}

inline json write_tc(const tc::Parameters &p, double stator_angle) {
    const auto &g = p.geometry();
    const auto &fl = p.fluid();
    const auto &in = p.inertias();
    return {
        {"rho", fl.density},
        {"A", g.flow_area},
        {"R_i", g.impeller_radius},
        {"R_t", g.turbine_radius},
        {"R_s", g.stator_radius},
        {"L_f", g.fluid_inertia_length},
        {"alpha_i_deg", rad_to_deg_exact(g.impeller_exit_angle)},
        {"alpha_t_deg", rad_to_deg_exact(g.turbine_exit_angle)},
        {"alpha_s_deg", rad_to_deg_exact(stator_angle)},
        {"alpha_i_in_deg", rad_to_deg_exact(g.impeller_inlet_angle)},
        {"alpha_t_in_deg", rad_to_deg_exact(g.turbine_inlet_angle)},
        {"alpha_s_in_deg", rad_to_deg_exact(g.stator_inlet_angle)},
        {"I_i", in.impeller},
        {"I_t", in.turbine},
        {"I_s", in.stator},
        {"C_sh_i", fl.shock_impeller},
        {"C_sh_t", fl.shock_turbine},
        {"C_sh_s", fl.shock_stator},
        {"S_i", g.impeller_design_constant},
        {"S_t", g.turbine_design_constant},
        {"S_s", g.stator_design_constant},
        {"f", fl.friction},
    };
}

inline drivetrain::CouplerParams read_coupler(Reader r) {
    drivetrain::CouplerParams c{r.number("K_s"), r.number("C_s")};
    r.finish();
    return c;
}

inline json write_coupler(const drivetrain::CouplerParams &c) {
    return {{"K_s", c.stiffness}, {"C_s", c.damping}};
}

inline drivetrain::GearboxConfig read_gearbox(Reader r) {
    drivetrain::GearboxConfig gb;
    gb.input_inertia = r.number("input_inertia");
    const json &stages = r.array("stages");
    for (std::size_t k = 0; k < stages.size(); ++k) {
        Reader s(stages[k], r.key("stages[" + std::to_string(k) + "]"));
        drivetrain::GearStage st;
        st.inertia = s.number("inertia");
        st.ratio = s.number("ratio");
        st.mesh_stiffness = s.number("mesh_stiffness");
        st.mesh_damping = s.number("mesh_damping");
        if (auto b = s.optional_child("bearing")) {
            st.bearing = drivetrain::BearingDof{b->number("mass"), b->number("stiffness"),
                                                b->number("damping"),
                                                b->number("base_radius")};
            b->finish();
        }
        s.finish();
        gb.stages.push_back(st);
    }
    r.finish();
    return gb;
}

inline json write_gearbox(const drivetrain::GearboxConfig &gb) {
    json stages = json::array();
    for (const auto &st : gb.stages) {
        json s{{"inertia", st.inertia},
               {"ratio", st.ratio},
               {"mesh_stiffness", st.mesh_stiffness},
               {"mesh_damping", st.mesh_damping}};
        if (st.bearing) {
            s["bearing"] = {{"mass", st.bearing->mass},
                            {"stiffness", st.bearing->stiffness},
                            {"damping", st.bearing->damping},
                            {"base_radius", st.bearing->base_radius}};
        }
        stages.push_back(s);
    }
    return {{"input_inertia", gb.input_inertia}, {"stages", stages}};
}

inline std::string axis_key(std::size_t a) {
    return a == 0 ? std::string(scaling::kAxisNames[0])
                  : std::string(scaling::kAxisNames[a]) + "_deg";
}

} // namespace detail

/// Builds a configuration from a parsed JSON document.
inline Config from_json(const json &doc) {
    using detail::Reader;
    using detail::validated;
    Config cfg;
    Reader root(doc, "");
    cfg.name = root.string_or("name", "");
    {
        Reader r = root.child("tc");
        cfg.tc = detail::read_tc(r, cfg.stator_angle);
    }
    if (auto r = root.optional_child("rated")) {
        steady::RatedSpec spec{r->number("P_rated"), r->number("N")};
        r->finish();
        validated("rated", [&] { spec.validate(); return 0; });
        cfg.rated = spec;
    }
    if (auto r = root.optional_child("steady")) {
        cfg.solver.stator_angle_min = r->angle_or("alpha_s_min_deg", cfg.solver.stator_angle_min);
        cfg.solver.stator_angle_max = r->angle_or("alpha_s_max_deg", cfg.solver.stator_angle_max);
        cfg.solver.phi_tol = r->number_or("phi_tol", cfg.solver.phi_tol);
        cfg.solver.max_iter = r->integer_or("max_iter", cfg.solver.max_iter);
        cfg.sweep.nu_lo = r->number_or("nu_lo", cfg.sweep.nu_lo);
        cfg.sweep.nu_hi = r->number_or("nu_hi", cfg.sweep.nu_hi);
        cfg.sweep.nu_step = r->number_or("nu_step", cfg.sweep.nu_step);
        cfg.operating_nu = r->number_or("operating_nu", cfg.operating_nu);
        r->finish();
    }
    validated("steady", [&] {
        cfg.solver.validate();
        if (!(cfg.solver.phi_tol > 0.0)) {
            detail::fail("steady.phi_tol", "must be > 0");
        }
        if (cfg.solver.max_iter < 1) {
            detail::fail("steady.max_iter", "must be >= 1");
        }
        if (cfg.sweep.nu_lo < steady::kScheduleNuMin || cfg.sweep.nu_hi > steady::kScheduleNuMax) {
            detail::fail("steady.nu_lo", "sweep must lie inside [0.87, 1.67]");
        }
        steady::nu_grid(cfg.sweep.nu_lo, cfg.sweep.nu_hi, cfg.sweep.nu_step);
        if (!(cfg.operating_nu >= steady::kScheduleNuMin &&
              cfg.operating_nu <= steady::kScheduleNuMax)) {
            detail::fail("steady.operating_nu", "must lie inside [0.87, 1.67]");
        }
        return 0;
    });

    if (auto r = root.optional_child("scaling")) {
        ScalingSettings s;
        s.max_cycles = r->integer_or("max_cycles", s.max_cycles);
        if (s.max_cycles < 1) {
            detail::fail("scaling.max_cycles", "must be >= 1");
        }
        if (auto axes = r->optional_child("axes")) {
            for (std::size_t a = 0; a < scaling::kAxisCount; ++a) {
                const std::string k = detail::axis_key(a);
                if (auto ax = axes->optional_child(k)) {
                    const bool deg = a != 0;
                    auto &g = s.space.axes[a];
                    g.lower = deg ? ax->angle("lower") : ax->number("lower");
                    g.upper = deg ? ax->angle("upper") : ax->number("upper");
                    g.count = ax->count("count");
                    ax->finish();
                    validated("scaling.axes", [&] { g.validate(k); return 0; });
                }
            }
            axes->finish();
        }
        r->finish();
        cfg.scaling = s;
    }

    if (auto r = root.optional_child("simulation")) {
        auto &s = cfg.simulation;
        s.dt = r->number_or("dt", s.dt);
        s.duration = r->number_or("duration", s.duration);
        if (r->has("integrator")) {
            s.method = integrate::method_from_string(r->string_or("integrator", "rk4"));
        }
        if (r->has("record_decimation")) {
            s.decimation = r->count("record_decimation");
        }
        r->finish();
    }
    validated("simulation", [&] { cfg.simulation.validate(); return 0; });

    {
        auto &f = cfg.frequency_sweep;
        if (auto r = root.optional_child("frequency_sweep")) {
            f.tau_ie = r->number_or("tau_ie", f.tau_ie);
            f.amplitude = r->number_or("amplitude", f.amplitude);
            f.f_lo = r->number_or("f_lo", f.f_lo);
            f.f_hi = r->number_or("f_hi", f.f_hi);
            f.points_per_decade = r->integer_or("points_per_decade", f.points_per_decade);
            f.tau_te = r->number_or("tau_te", f.tau_te);
            f.settle_time = r->number_or("settle_time", f.settle_time);
            f.measure_time = r->number_or("measure_time", f.measure_time);
            f.dt = r->number_or("dt", f.dt);
            r->finish();
        }
        f.stator_angle = cfg.stator_angle;
        validated("frequency_sweep", [&] { f.validate(); return 0; });
    }

    if (auto r = root.optional_child("torque_curve")) {
        auto &t = cfg.torque_curve;
        t.omega_i = r->number_or("omega_i", t.omega_i);
        t.nu_lo = r->number_or("nu_lo", t.nu_lo);
        t.nu_hi = r->number_or("nu_hi", t.nu_hi);
        t.nu_step = r->number_or("nu_step", t.nu_step);
        r->finish();
        if (!(t.omega_i > 0.0)) {
            detail::fail("torque_curve.omega_i", "must be > 0");
        }
        if (!(t.nu_lo > 0.0 && t.nu_hi <= 1.0)) {
            detail::fail("torque_curve.nu_lo", "grid must lie in (0, 1]");
        }
        validated("torque_curve", [&] { return steady::nu_grid(t.nu_lo, t.nu_hi, t.nu_step); });
    }

    const bool has_dt = root.has("drivetrain");
    if (has_dt) {
        DrivetrainSettings d;
        {
            Reader r = root.child("drivetrain");
            d.rotor_inertia = r.number("rotor_inertia");
            d.low_speed_coupler = detail::read_coupler(r.child("low_speed_coupler"));
            d.high_speed_coupler = detail::read_coupler(r.child("high_speed_coupler"));
            if (r.has("generator_coupler")) {
                d.generator_coupler = detail::read_coupler(r.child("generator_coupler"));
            }
            d.gearbox = detail::read_gearbox(r.child("gearbox"));
            r.finish();
        }
        if (!cfg.rated) {
            detail::fail("rated", "required when a drivetrain is configured");
        }
        d.generator.rated_speed_rpm = cfg.rated->rated_speed_rpm;
        if (auto r = root.optional_child("generator")) {
            const std::string mode = r->string_or("mode", "ideal-bus");
            if (mode == "swing") {
                d.generator.mode = drivetrain::GeneratorMode::Swing;
            } else if (mode != "ideal-bus") {
                detail::fail("generator.mode", "must be 'ideal-bus' or 'swing'");
            }
            d.generator.inertia = r->number_or("J", 0.0);
            d.generator.damping = r->number_or("D", 0.0);
            d.generator.sync_coeff = r->number_or("K_sync", 0.0);
            r->finish();
        }
        auto &gv = d.governor;
        gv.angle_min = cfg.solver.stator_angle_min;
        gv.angle_max = cfg.solver.stator_angle_max;
        if (auto r = root.optional_child("governor")) {
            d.governor_enabled = r->boolean_or("enabled", true);
            gv.gains.kp = r->number_or("Kp", gv.gains.kp);
            gv.gains.ki = r->number_or("Ki", gv.gains.ki);
            gv.gains.kd = r->number_or("Kd", gv.gains.kd);
            gv.angle_min = r->angle_or("alpha_s_min_deg", gv.angle_min);
            gv.angle_max = r->angle_or("alpha_s_max_deg", gv.angle_max);
            gv.rate_limit = r->angle_or("rate_limit_deg_per_s", gv.rate_limit);
            r->finish();
        }
        // the run re-centres these on the steady operating angle
        gv.initial_angle = 0.5 * (gv.angle_min + gv.angle_max);
        gv.integrator_init = gv.initial_angle;
        validated("governor", [&] { gv.validate(cfg.solver); return 0; });
        if (auto r = root.optional_child("load_step")) {
            d.load_step.step_time = r->number("time");
            d.load_step.step_fraction = r->number("fraction");
            r->finish();
            if (!(d.load_step.step_time >= 0.0)) {
                detail::fail("load_step.time", "must be >= 0");
            }
            if (!(d.load_step.step_fraction > -1.0)) {
                detail::fail("load_step.fraction", "must be > -1");
            }
        }
        cfg.drivetrain = d;
        validated("drivetrain", [&] { cfg.integrated().validate(); return 0; });
    } else {
        for (const char *k : {"generator", "governor", "load_step"}) {
            if (root.has(k)) {
                detail::fail(k, "requires a drivetrain section");
            }
        }
    }
    root.finish();
    return cfg;
}

/// Canonical JSON form; from_json(to_json(c)) == c.
inline json to_json(const Config &cfg) {
    json doc;
    if (!cfg.name.empty()) {
        doc["name"] = cfg.name;
    }
    doc["tc"] = detail::write_tc(cfg.tc, cfg.stator_angle);
    if (cfg.rated) {
        doc["rated"] = {{"P_rated", cfg.rated->rated_power}, {"N", cfg.rated->rated_speed_rpm}};
    }
    doc["steady"] = {
        {"alpha_s_min_deg", rad_to_deg_exact(cfg.solver.stator_angle_min)},
        {"alpha_s_max_deg", rad_to_deg_exact(cfg.solver.stator_angle_max)},
        {"phi_tol", cfg.solver.phi_tol},
        {"max_iter", cfg.solver.max_iter},
        {"nu_lo", cfg.sweep.nu_lo},
        {"nu_hi", cfg.sweep.nu_hi},
        {"nu_step", cfg.sweep.nu_step},
        {"operating_nu", cfg.operating_nu},
    };
    if (cfg.scaling) {
        json axes;
        for (std::size_t a = 0; a < scaling::kAxisCount; ++a) {
            const auto &g = cfg.scaling->space.axes[a];
            const bool deg = a != 0;
            axes[detail::axis_key(a)] = {
                {"lower", deg ? rad_to_deg_exact(g.lower) : g.lower},
                {"upper", deg ? rad_to_deg_exact(g.upper) : g.upper},
                {"count", g.count},
            };
        }
        doc["scaling"] = {{"max_cycles", cfg.scaling->max_cycles}, {"axes", axes}};
    }
    const auto &s = cfg.simulation;
    doc["simulation"] = {{"dt", s.dt},
                         {"duration", s.duration},
                         {"integrator", integrate::to_string(s.method)},
                         {"record_decimation", s.decimation}};
    const auto &f = cfg.frequency_sweep;
    doc["frequency_sweep"] = {{"tau_ie", f.tau_ie},           {"amplitude", f.amplitude},
                              {"f_lo", f.f_lo},               {"f_hi", f.f_hi},
                              {"points_per_decade", f.points_per_decade},
                              {"tau_te", f.tau_te},           {"settle_time", f.settle_time},
                              {"measure_time", f.measure_time}, {"dt", f.dt}};
    const auto &t = cfg.torque_curve;
    doc["torque_curve"] = {
        {"omega_i", t.omega_i}, {"nu_lo", t.nu_lo}, {"nu_hi", t.nu_hi}, {"nu_step", t.nu_step}};
    if (cfg.drivetrain) {
        const auto &d = *cfg.drivetrain;
        doc["drivetrain"] = {
            {"rotor_inertia", d.rotor_inertia},
            {"low_speed_coupler", detail::write_coupler(d.low_speed_coupler)},
            {"high_speed_coupler", detail::write_coupler(d.high_speed_coupler)},
            {"generator_coupler", detail::write_coupler(d.generator_coupler)},
            {"gearbox", detail::write_gearbox(d.gearbox)},
        };
        doc["generator"] = {{"mode", drivetrain::to_string(d.generator.mode)},
                            {"J", d.generator.inertia},
                            {"D", d.generator.damping},
                            {"K_sync", d.generator.sync_coeff}};
        doc["governor"] = {{"enabled", d.governor_enabled},
                           {"Kp", d.governor.gains.kp},
                           {"Ki", d.governor.gains.ki},
                           {"Kd", d.governor.gains.kd},
                           {"alpha_s_min_deg", rad_to_deg_exact(d.governor.angle_min)},
                           {"alpha_s_max_deg", rad_to_deg_exact(d.governor.angle_max)},
                           {"rate_limit_deg_per_s", rad_to_deg_exact(d.governor.rate_limit)}};
        if (std::isfinite(d.load_step.step_time)) {
            doc["load_step"] = {{"time", d.load_step.step_time},
                                {"fraction", d.load_step.step_fraction}};
        }
    }
    return doc;
}

inline Config parse_string(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    return from_json(doc);
}

inline Config parse_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open config file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

inline std::string dump(const Config &cfg) { return to_json(cfg).dump(2) + "\n"; }

} // namespace t5drive::config
