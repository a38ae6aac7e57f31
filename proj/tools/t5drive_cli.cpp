// Batch frontend: t5drive <command> --config <file> [--out <dir>] ...

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "t5drive/config.hpp"
#include "t5drive/io.hpp"
#include "t5drive/scaling.hpp"
#include "t5drive/sim_engine.hpp"
#include "t5drive/steady_state.hpp"

namespace fs = std::filesystem;
using namespace t5drive;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    bool emit_plots = false;
    std::optional<double> nu_lo, nu_hi, nu_step, dt, duration;
};

class Run {
  public:
    Run(std::string command, const Options &opt, config::Config cfg)
        : opt_(opt), cfg_(std::move(cfg)) {
        manifest_.command = std::move(command);
        manifest_.config_digest = io::config_digest(cfg_);
        manifest_.parameters = {{"config", opt.config_path}, {"out", opt.out_dir},
                                {"emit_plots", opt.emit_plots}};
        auto put = [&](const char *k, const std::optional<double> &v) {
            if (v) {
                manifest_.parameters[k] = *v;
            }
        };
        put("nu_lo", opt.nu_lo);
        put("nu_hi", opt.nu_hi);
        put("nu_step", opt.nu_step);
        put("dt", opt.dt);
        put("duration", opt.duration);
        fs::create_directories(opt.out_dir);
    }

    const config::Config &cfg() const { return cfg_; }
    json &summary() { return summary_; }

    void write(const std::string &name, std::string_view text) {
        io::write_text(fs::path(opt_.out_dir) / name, text);
        manifest_.outputs.push_back(name);
    }
    void write_csv(const std::string &name, const std::vector<std::string> &header,
                   const std::vector<std::vector<double>> &rows) {
        write(name, io::csv_text(header, rows));
    }
    void plot(const std::string &csv, const std::string &x,
              const std::vector<std::string> &columns, const std::vector<std::string> &ys,
              bool log_x = false) {
        if (!opt_.emit_plots) {
            return;
        }
        const std::string stem = csv.substr(0, csv.rfind('.'));
        write(stem + ".gp", io::plot_script(csv, x, columns, ys, log_x));
    }

    void finish(double wall) {
        manifest_.wall_time_s = wall;
        json m = manifest_.to_json();
        if (!summary_.is_null()) {
            m["summary"] = summary_;
        }
        io::write_text(fs::path(opt_.out_dir) / "manifest.json", m.dump(2) + "\n");
    }

  private:
    Options opt_;
    config::Config cfg_;
    io::RunManifest manifest_;
    json summary_;
};

/// Applies command-line overrides and re-validates through the canonical
/// form, so an override is checked exactly like a file value.
config::Config effective_config(const std::string &command, const Options &opt) {
    config::Config cfg = config::parse_config(opt.config_path);
    if (command == "torque-curve") {
        if (opt.nu_lo) cfg.torque_curve.nu_lo = *opt.nu_lo;
        if (opt.nu_hi) cfg.torque_curve.nu_hi = *opt.nu_hi;
        if (opt.nu_step) cfg.torque_curve.nu_step = *opt.nu_step;
    } else {
        if (opt.nu_lo) cfg.sweep.nu_lo = *opt.nu_lo;
        if (opt.nu_hi) cfg.sweep.nu_hi = *opt.nu_hi;
        if (opt.nu_step) cfg.sweep.nu_step = *opt.nu_step;
    }
    if (opt.dt) {
        cfg.simulation.dt = *opt.dt;
        cfg.frequency_sweep.dt = *opt.dt;
    }
    if (opt.duration) cfg.simulation.duration = *opt.duration;
    return config::from_json(config::to_json(cfg));
}

void torque_curve(Run &run) {
    const auto &c = run.cfg();
    const auto grid = steady::nu_grid(c.torque_curve.nu_lo, c.torque_curve.nu_hi,
                                      c.torque_curve.nu_step);
    const auto pts = sim::run_torque_ratio_curve(c.tc, c.torque_curve.omega_i, grid, c.stator_angle);
    const std::vector<std::string> header{"nu", "torque_ratio", "tau_i", "tau_t", "V", "feasible"};
    std::vector<std::vector<double>> rows;
    const double nan = std::nan("");
    for (const auto &p : pts) {
        rows.push_back({p.nu, p.feasible ? p.torque_ratio : nan, p.feasible ? p.impeller_torque : nan,
                        p.feasible ? p.turbine_torque : nan, p.feasible ? p.flow_velocity : nan,
                        p.feasible ? 1.0 : 0.0});
    }
    run.write_csv("torque_ratio.csv", header, rows);
    run.plot("torque_ratio.csv", "nu", header, {"torque_ratio"});
}

void freq_sweep(Run &run) {
    const auto &c = run.cfg();
    const auto pts = sim::run_frequency_sweep(c.tc, c.frequency_sweep);
    const std::vector<std::string> header{"f_hz", "amp_omega_i", "amp_omega_t", "ratio"};
    std::vector<std::vector<double>> rows;
    for (const auto &p : pts) {
        rows.push_back({p.frequency, p.impeller_amplitude, p.turbine_amplitude, p.ratio});
    }
    run.write_csv("frequency_response.csv", header, rows);
    run.plot("frequency_response.csv", "f_hz", header, {"amp_omega_i", "amp_omega_t"}, true);
}

void init_sweep(Run &run) {
    const auto &c = run.cfg();
    const auto res = steady::sweep(c.tc, c.require_rated(), c.sweep.nu_lo, c.sweep.nu_hi,
                                   c.sweep.nu_step, c.solver);
    const std::vector<std::string> header{"nu",          "omega_t", "omega_i",
                                          "V",           "alpha_s_deg", "tau_t",
                                          "tau_i",       "power_loss_pct", "feasible"};
    std::vector<std::vector<double>> rows;
    const double nan = std::nan("");
    for (const auto &p : res.points) {
        if (p.feasible) {
            rows.push_back({p.nu, p.turbine_speed, p.impeller_speed, p.flow_velocity,
                            rad_to_deg(p.stator_angle), p.turbine_torque, p.impeller_torque,
                            p.power_loss_pct, 1.0});
        } else {
            rows.push_back({p.nu, p.turbine_speed, p.impeller_speed, nan, nan, nan, nan, nan, 0.0});
        }
    }
    run.write_csv("steady_sweep.csv", header, rows);
    run.plot("steady_sweep.csv", "nu", header, {"alpha_s_deg"});
    if (res.feasible_interval) {
        run.summary() = {{"feasible_nu_lo", res.feasible_interval->first},
                         {"feasible_nu_hi", res.feasible_interval->second},
                         {"contiguous", res.contiguous}};
    } else {
        run.summary() = {{"feasible_nu_lo", nullptr}, {"feasible_nu_hi", nullptr},
                         {"contiguous", res.contiguous}};
    }
}

void scale(Run &run) {
    const auto &c = run.cfg();
    const config::ScalingSettings settings = c.scaling.value_or(config::ScalingSettings{});
    const auto res = scaling::greedy_search(c.tc, c.require_rated(), settings.space,
                                            settings.max_cycles);
    json adj{{"K", res.best.amplification},
             {"b_i_deg", rad_to_deg_exact(res.best.impeller_exit)},
             {"b_t_deg", rad_to_deg_exact(res.best.turbine_exit)},
             {"b_i_in_deg", rad_to_deg_exact(res.best.impeller_inlet)},
             {"b_t_in_deg", rad_to_deg_exact(res.best.turbine_inlet)},
             {"b_s_in_deg", rad_to_deg_exact(res.best.stator_inlet)},
             {"objective", res.objective},
             {"initial_objective", res.initial_objective},
             {"cycles", res.cycles}};
    run.write("adjustment.json", adj.dump(2) + "\n");

    config::Config scaled = c;
    scaled.tc = scaling::apply_scaling(c.tc, res.best);
    scaled.scaling.reset();
    scaled.name = c.name.empty() ? "scaled" : c.name + "-scaled";
    run.write("type5_params.json", config::dump(scaled));

    std::string audit = "cycle,parameter,value,objective\n";
    for (const auto &s : res.history) {
        const double v = s.axis == 0 ? s.value : rad_to_deg_exact(s.value);
        audit += std::to_string(s.cycle) + "," + config::detail::axis_key(s.axis) + "," +
                 io::format_double(v) + "," + io::format_double(s.objective) + "\n";
    }
    run.write("scale_audit.csv", audit);
    run.summary() = {{"objective", res.objective}, {"cycles", res.cycles}};
}

void simulate(Run &run) {
    const auto &c = run.cfg();
    const auto icfg = c.integrated();
    const auto trace = sim::run_integrated(icfg, c.drivetrain->load_step, c.simulation);
    run.write_csv("trace.csv", trace.columns(), trace.rows());
    run.plot("trace.csv", "t", trace.columns(), {"omega_t", "omega_i"});
}

void validate_honda(Run &run) {
    torque_curve(run);
    freq_sweep(run);
}

int exit_code_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::InvalidParameter:
    case ErrorKind::SingularMassMatrix:
    case ErrorKind::OutOfScheduleRange:
    case ErrorKind::DimensionMismatch:
        return kExitValidation;
    default:
        return kExitNumeric;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Type-5 wind turbine drivetrain and torque converter toolkit", "t5drive"};
    app.set_version_flag("--version", std::string(io::kToolVersion));
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "Configuration file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
        sub->add_flag("--emit-plots", opt.emit_plots, "Write gnuplot scripts next to CSVs");
        sub->add_option("--nu-lo", opt.nu_lo, "Override lower speed ratio of the grid");
        sub->add_option("--nu-hi", opt.nu_hi, "Override upper speed ratio of the grid");
        sub->add_option("--nu-step", opt.nu_step, "Override speed-ratio step");
        sub->add_option("--dt", opt.dt, "Override integration step (s)");
        sub->add_option("--duration", opt.duration, "Override simulated time (s)");
    };
    const std::vector<std::pair<std::string, std::string>> commands{
        {"validate-honda", "Torque-ratio curve and frequency response of the configured converter"},
        {"scale", "Greedy search for the scaling adjustment; writes the scaled parameter file"},
        {"init-sweep", "Steady-state initialization sweep over the speed ratio"},
        {"simulate", "Closed-loop drivetrain simulation"},
        {"freq-sweep", "Frequency response to impeller torque disturbances"},
        {"torque-curve", "Torque ratio versus speed ratio"},
    };
    for (const auto &[name, help] : commands) {
        add_common(app.add_subcommand(name, help));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Run run(command, opt, effective_config(command, opt));
        if (command == "validate-honda") {
            validate_honda(run);
        } else if (command == "scale") {
            scale(run);
        } else if (command == "init-sweep") {
            init_sweep(run);
        } else if (command == "simulate") {
            simulate(run);
        } else if (command == "freq-sweep") {
            freq_sweep(run);
        } else {
            torque_curve(run);
        }
        run.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    } catch (const Error &e) {
        std::cerr << "t5drive " << command << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "t5drive " << command << ": " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
