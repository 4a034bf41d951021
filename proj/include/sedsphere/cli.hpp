#pragma once

// Command-line front end. parse() turns argv into a RunConfig, run() executes
// it. Exit codes: 0 ok, 1 usage or invalid parameters, 2 verification
// failure, 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sedsphere/analysis.hpp"
#include "sedsphere/analytic.hpp"
#include "sedsphere/errors.hpp"
#include "sedsphere/ide.hpp"
#include "sedsphere/ode.hpp"
#include "sedsphere/output.hpp"
#include "sedsphere/physical.hpp"
#include "sedsphere/suite.hpp"
#include "sedsphere/trajectory.hpp"

namespace sedsphere::cli {

enum class Command { trajectory, sweep, compare, verify, drag };
enum class Solver { closed_form, ide, ode };
enum class Format { csv, json };

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_verification = 2;
inline constexpr int exit_numerical = 3;

struct RunConfig {
    Command command = Command::verify;
    double kappa = 2.5;
    std::vector<double> kappas{0.5, 1.0, 2.0, 2.5, 2.9, 3.5, 3.9};
    physical::PhysicalParams physical{};
    Solver solver = Solver::closed_form;
    double h = 1e-2;
    double T = 10.0;
    double eps = 0.0;  // initial velocity u(0) of the sphere
    // oscillator mode, used when b is set
    std::optional<double> b;
    double A = 1.0;
    double t0 = 1.0;
    std::optional<double> v0;
    std::optional<double> dv0;
    // verify: step and horizon of the solver comparison, suite defaults if unset
    std::optional<double> check_h;
    std::optional<double> check_T;
    Format output = Format::csv;
    std::string out;  // empty means stdout; a directory for sweep
};

/// Thrown for parameter combinations no owning module would reject.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline const char* to_string(Solver s) {
    switch (s) {
    case Solver::closed_form: return "closed-form";
    case Solver::ide: return "ide";
    case Solver::ode: return "ode";
    }
    return "?";
}

namespace detail {

inline std::size_t step_count(double h, double T) {
    if (!(h > 0.0) || !std::isfinite(h) || !(T >= h) || !std::isfinite(T)) {
        throw usage_error("need 0 < h <= T");
    }
    return static_cast<std::size_t>(std::floor(T / h + 1e-9));
}

inline Trajectory sphere_trajectory(Solver solver, double kappa, double eps, double h, double T) {
    switch (solver) {
    case Solver::closed_form: {
        const std::size_t n = step_count(h, T);
        Trajectory traj;
        traj.meta.solver = "closed-form";
        traj.meta.step = h;
        traj.meta.params = {{"kappa", kappa}, {"eps", eps}, {"h", h}, {"T", T}};
        traj.reserve(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * h;
            traj.push_back(t, analytic::u_general(t, kappa, eps), analytic::u_general_derivative(t, kappa, eps));
        }
        return traj;
    }
    case Solver::ide:
        return ide::solve_ide(kappa, eps, h, T);
    case Solver::ode: {
        Trajectory traj = ode::solve_oscillator(ode::sphere_problem(kappa, eps), h, T);
        for (double& v : traj.values) {
            v += 1.0;
        }
        traj.meta.params["kappa"] = kappa;
        traj.meta.params["eps"] = eps;
        return traj;
    }
    }
    throw usage_error("unknown solver");
}

inline Trajectory oscillator_trajectory(const RunConfig& cfg) {
    const double b = *cfg.b;
    double v0 = 0.0;
    double dv0 = 0.0;
    if (cfg.v0 || cfg.dv0) {
        if (!(cfg.v0 && cfg.dv0)) {
            throw usage_error("--v0 and --dv0 go together");
        }
        v0 = *cfg.v0;
        dv0 = *cfg.dv0;
    } else {
        const auto ic = analytic::monotone_initial_conditions(b, cfg.A, cfg.t0);
        v0 = ic.v0;
        dv0 = ic.v0_prime;
    }
    switch (cfg.solver) {
    case Solver::closed_form: {
        const std::size_t n = step_count(cfg.h, cfg.T);
        Trajectory traj;
        traj.meta.solver = "closed-form";
        traj.meta.step = cfg.h;
        traj.meta.params = {{"b", b}, {"A", cfg.A}, {"t0", cfg.t0}, {"v0", v0},
                            {"v0_prime", dv0}, {"h", cfg.h}, {"T", cfg.T}};
        traj.reserve(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * cfg.h;
            const auto s = analytic::general_solution_state(t, b, cfg.A, cfg.t0, v0, dv0);
            traj.push_back(t, s.v, s.dv);
        }
        return traj;
    }
    case Solver::ode:
        return ode::solve_oscillator({b, cfg.A, cfg.t0, v0, dv0}, cfg.h, cfg.T);
    case Solver::ide:
        throw usage_error("the ide solver only handles the sphere problem; drop --b");
    }
    throw usage_error("unknown solver");
}

inline nlohmann::json meta_json(const TrajectoryMeta& meta) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : meta.params) {
        params[k] = v;
    }
    return {{"solver", meta.solver},
            {"step", meta.step},
            {"params", params},
            {"overflow_truncated", meta.overflow_truncated}};
}

inline std::string render(const Trajectory& traj, Format fmt) {
    if (fmt == Format::json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < traj.size(); ++i) {
            rows.push_back({traj.times[i], traj.values[i], traj.derivatives[i]});
        }
        nlohmann::json doc = {{"schema", 1},
                              {"meta", meta_json(traj.meta)},
                              {"columns", {"t", "u", "du"}},
                              {"rows", rows}};
        return doc.dump() + "\n";
    }
    output::CsvTable table({"t", "u", "du"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
        table.add_row({traj.times[i], traj.values[i], traj.derivatives[i]});
    }
    return table.str();
}

inline std::string render(const output::CsvTable& table, Format fmt) {
    if (fmt == Format::csv) {
        return table.str();
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows()) {
        rows.push_back(row);
    }
    nlohmann::json doc = {{"schema", 1}, {"columns", table.columns()}, {"rows", rows}};
    return doc.dump() + "\n";
}

inline void emit(const RunConfig& cfg, const std::string& contents, std::ostream& out) {
    if (cfg.out.empty()) {
        out << contents;
    } else {
        output::write_atomically(cfg.out, contents);
    }
}

inline const char* extension(Format fmt) { return fmt == Format::json ? ".json" : ".csv"; }

inline int run_trajectory(const RunConfig& cfg, std::ostream& out) {
    const Trajectory traj = cfg.b ? oscillator_trajectory(cfg)
                                  : sphere_trajectory(cfg.solver, cfg.kappa, cfg.eps, cfg.h, cfg.T);
    emit(cfg, render(traj, cfg.output), out);
    return traj.meta.overflow_truncated ? exit_numerical : exit_ok;
}

struct SweepResult {
    Trajectory traj;
    std::vector<double> summary;
};

inline int run_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.b) {
        throw usage_error("sweep runs the sphere problem; drop --b");
    }
    if (cfg.kappas.empty()) {
        throw usage_error("sweep needs at least one kappa");
    }
    const std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path("sweep") : std::filesystem::path(cfg.out);
    const double tol = cfg.solver == Solver::closed_form ? 1e-12 : 10.0 * cfg.h;

    std::vector<std::future<SweepResult>> jobs;
    for (double kappa : cfg.kappas) {
        jobs.push_back(std::async(std::launch::async, [&cfg, kappa, tol] {
            SweepResult r;
            r.traj = sphere_trajectory(cfg.solver, kappa, cfg.eps, cfg.h, cfg.T);
            const double tT = r.traj.times.back();
            const double gap = 1.0 - r.traj.values.back();
            const double lead = (1.0 - cfg.eps) * std::sqrt(kappa / (std::numbers::pi * tT));
            const bool mono = analysis::check_monotone(r.traj, tol).passed;
            r.summary = {kappa, tT, r.traj.values.back(), gap, std::abs(gap - lead), mono ? 1.0 : 0.0};
            return r;
        }));
    }

    output::CsvTable summary({"kappa", "t_end", "u_end", "gap", "asymptotic_error", "monotone"});
    bool truncated = false;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        SweepResult r = jobs[i].get();
        truncated = truncated || r.traj.meta.overflow_truncated;
        const std::string name = "kappa_" + output::format_double(cfg.kappas[i]) + extension(cfg.output);
        output::write_atomically(dir / name, render(r.traj, cfg.output));
        summary.add_row(r.summary);
    }
    output::write_atomically(dir / (std::string("summary") + extension(cfg.output)), render(summary, cfg.output));
    out << "wrote " << jobs.size() << " trajectories to " << dir.string() << "\n";
    return truncated ? exit_numerical : exit_ok;
}

inline int run_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.b) {
        throw usage_error("compare runs the sphere problem; drop --b");
    }
    const Trajectory closed = sphere_trajectory(Solver::closed_form, cfg.kappa, cfg.eps, cfg.h, cfg.T);
    const Trajectory direct = sphere_trajectory(Solver::ide, cfg.kappa, cfg.eps, cfg.h, cfg.T);
    const Trajectory oscillator = sphere_trajectory(Solver::ode, cfg.kappa, cfg.eps, cfg.h, cfg.T);

    output::CsvTable table({"t", "closed_form", "ide", "ode", "dev_ide", "dev_ode", "sup_ide", "sup_ode"});
    const std::size_t n = std::min({closed.size(), direct.size(), oscillator.size()});
    double sup_ide = 0.0;
    double sup_ode = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev_ide = direct.values[i] - closed.values[i];
        const double dev_ode = oscillator.values[i] - closed.values[i];
        sup_ide = std::max(sup_ide, std::abs(dev_ide));
        sup_ode = std::max(sup_ode, std::abs(dev_ode));
        table.add_row({closed.times[i], closed.values[i], direct.values[i], oscillator.values[i], dev_ide,
                       dev_ode, sup_ide, sup_ode});
    }
    emit(cfg, render(table, cfg.output), out);

    const nlohmann::json line = {{"schema", 1}, {"kappa", cfg.kappa}, {"h", cfg.h}, {"T", cfg.T},
                                 {"sup_ide", sup_ide}, {"sup_ode", sup_ode}};
    (cfg.out.empty() ? err : out) << line.dump() << "\n";
    return oscillator.meta.overflow_truncated ? exit_numerical : exit_ok;
}

inline nlohmann::json report_json(const analysis::VerificationReport& r) {
    return {{"check_id", r.check_id},         {"passed", r.passed},
            {"worst_violation", r.worst_violation}, {"location", r.location},
            {"tolerance", r.tolerance},       {"detail", r.detail}};
}

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    suite::SuiteOptions opts;
    opts.kappas = cfg.kappas;
    if (cfg.check_h) {
        opts.ide_step = *cfg.check_h;
    }
    if (cfg.check_T) {
        opts.ide_horizon = *cfg.check_T;
    }
    const auto reports = suite::run_all(opts);
    bool ok = true;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : reports) {
        ok = ok && r.passed;
        list.push_back(report_json(r));
        if (!r.passed) {
            err << "FAIL " << r.check_id << ": " << output::format_double(r.worst_violation) << " > "
                << output::format_double(r.tolerance) << "\n";
        }
    }
    const nlohmann::json doc = {{"schema", 1}, {"passed", ok}, {"reports", list}};
    emit(cfg, doc.dump(2) + "\n", out);
    return ok ? exit_ok : exit_verification;
}

inline int run_drag(const RunConfig& cfg, std::ostream& out) {
    const auto group = physical::nondimensionalize(cfg.physical);
    const Trajectory scaled = sphere_trajectory(cfg.solver, group.kappa, 0.0, cfg.h, cfg.T);
    Trajectory traj = physical::dimensional_trajectory(group, scaled);
    traj.meta.params["kappa"] = group.kappa;

    output::CsvTable table({"t", "U", "dU", "stokes", "added_mass", "basset", "total"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto d = physical::drag_components_at(cfg.physical, traj, i);
        table.add_row({traj.times[i], traj.values[i], traj.derivatives[i], d.stokes, d.added_mass, d.basset,
                       d.total()});
    }
    emit(cfg, render(table, cfg.output), out);
    return traj.meta.overflow_truncated ? exit_numerical : exit_ok;
}

} // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
        case Command::trajectory: return detail::run_trajectory(cfg, out);
        case Command::sweep: return detail::run_sweep(cfg, out);
        case Command::compare: return detail::run_compare(cfg, out, err);
        case Command::verify: return detail::run_verify(cfg, out, err);
        case Command::drag: return detail::run_drag(cfg, out);
        }
    } catch (const std::overflow_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const accuracy_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const consistency_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::logic_error& e) {
        // domain_error, out_of_range, usage_error, configuration and root errors
        err << "invalid parameters: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_usage;
}

struct ParseOutcome {
    std::optional<RunConfig> config;
    int exit_code = exit_ok;
};

inline ParseOutcome parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transient settling of a sphere in a viscous fluid"};
    app.set_help_flag("--help", "print help and exit");  // -h would clash with --h
    app.require_subcommand(1);
    RunConfig cfg;

    const std::map<std::string, Solver> solvers{
        {"closed-form", Solver::closed_form}, {"ide", Solver::ide}, {"ode", Solver::ode}};
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};

    auto common = [&](CLI::App* sub, bool with_solver) {
        if (with_solver) {
            sub->add_option("--solver", cfg.solver, "closed-form, ide or ode")
                ->transform(CLI::CheckedTransformer(solvers, CLI::ignore_case));
        }
        sub->add_option("--h", cfg.h, "time step");
        sub->add_option("--T", cfg.T, "horizon");
        sub->add_option("--output", cfg.output, "csv or json")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        sub->add_option("--out", cfg.out, "output path (default stdout)");
    };

    auto* traj = app.add_subcommand("trajectory", "one trajectory; the oscillator problem when --b is given");
    traj->add_option("--kappa", cfg.kappa, "9 rho / (2 rho_s + rho)");
    traj->add_option("--eps", cfg.eps, "initial velocity u(0)");
    traj->add_option("--b", cfg.b, "damping of v'' + b v' + v = -A/sqrt(pi (t + t0))");
    traj->add_option("--A", cfg.A, "forcing amplitude");
    traj->add_option("--t0", cfg.t0, "forcing time shift");
    traj->add_option("--v0", cfg.v0, "v(0); default is the monotone initial state");
    traj->add_option("--dv0", cfg.dv0, "v'(0)");
    common(traj, true);

    auto* sweep = app.add_subcommand("sweep", "one trajectory per kappa plus summary");
    sweep->add_option("--kappas", cfg.kappas, "kappa values")->delimiter(',');
    sweep->add_option("--eps", cfg.eps, "initial velocity u(0)");
    common(sweep, true);

    auto* compare = app.add_subcommand("compare", "closed form, ide and ode on one grid");
    compare->add_option("--kappa", cfg.kappa, "9 rho / (2 rho_s + rho)");
    compare->add_option("--eps", cfg.eps, "initial velocity u(0)");
    common(compare, false);

    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--kappas", cfg.kappas, "kappa values for the monotonicity checks")->delimiter(',');
    verify->add_option("--h", cfg.check_h, "step of the direct solver check (default 1e-3)");
    verify->add_option("--T", cfg.check_T, "horizon of the direct solver check (default 10)");
    verify->add_option("--out", cfg.out, "report path (default stdout)");

    auto* drag = app.add_subcommand("drag", "dimensional drag decomposition, released from rest");
    drag->add_option("--rho-s", cfg.physical.rho_s, "sphere density, kg/m^3")->required();
    drag->add_option("--rho", cfg.physical.rho, "fluid density, kg/m^3")->required();
    drag->add_option("--mu", cfg.physical.mu, "dynamic viscosity, Pa s")->required();
    drag->add_option("--R", cfg.physical.R, "radius, m")->required();
    drag->add_option("--g", cfg.physical.g, "gravity, m/s^2");
    common(drag, true);
    drag->get_option("--h")->description("dimensionless time step");
    drag->get_option("--T")->description("dimensionless horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return {std::nullopt, exit_ok};
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        if (!app.get_subcommands().empty()) {
            err << app.get_subcommands().front()->help();
        } else {
            err << app.help();
        }
        return {std::nullopt, exit_usage};
    }

    const auto* chosen = app.get_subcommands().front();
    if (chosen == traj) {
        cfg.command = Command::trajectory;
    } else if (chosen == sweep) {
        cfg.command = Command::sweep;
    } else if (chosen == compare) {
        cfg.command = Command::compare;
    } else if (chosen == verify) {
        cfg.command = Command::verify;
    } else {
        cfg.command = Command::drag;
    }
    return {cfg, exit_ok};
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const ParseOutcome parsed = parse(argc, argv, out, err);
    if (!parsed.config) {
        return parsed.exit_code;
    }
    return run(*parsed.config, out, err);
}

} // namespace sedsphere::cli
