#pragma once

/// @file simulate.hpp
/// Drives one resolved run end to end: emits resolved.json before
/// stepping, streams series.csv (and snapshots + manifest.csv when
/// enabled), and closes with summary.json. Exit-code policy:
/// 0 completed clean, 3 suspected blow-up, 4 bound violations.

#include <cinttypes>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "arcs/diagnostics.hpp"
#include "arcs/io.hpp"
#include "arcs/setup.hpp"
#include "arcs/solver.hpp"

#include "json.hpp"

namespace arcs {

inline nlohmann::json resolved_json(const ResolvedRun& run) {
    using nlohmann::json;
    json j;
    j["domain"] = {
        {"dim", run.grid.dim()},
        {"cells", run.cfg.dim == 2 ? json::array({run.cfg.cells[0], run.cfg.cells[1]})
                                   : json::array({run.cfg.cells[0]})},
        {"lengths", run.cfg.dim == 2
                        ? json::array({run.cfg.lengths[0], run.cfg.lengths[1]})
                        : json::array({run.cfg.lengths[0]})},
    };
    const auto family = [](const FamilyConfig& f) {
        json g{{"family", f.family}, {"chat", f.chat}};
        if (f.family == "pow") g["k"] = f.k;
        return g;
    };
    j["model"] = {
        {"theorem_n", run.cfg.theorem_n}, {"chi", family(run.cfg.chi)},
        {"xi", family(run.cfg.xi)},       {"alpha", run.alpha},
        {"beta", run.beta},               {"m0", run.m0},
    };
    j["certificate"] = {
        {"certified", run.certified},
        {"delta_star", run.certificate.delta_star},
        {"threshold_star", run.certificate.threshold_star},
    };
    j["constants"] = {
        {"c0", run.aux.c0},   {"eta1", run.aux.eta1}, {"eta2", run.aux.eta2},
        {"c4", run.aux.c4},   {"theta", run.aux.theta},
    };
    j["weights"] = {
        {"p", run.p},
        {"r", run.r},
        {"sigma", run.sigma},
        {"eps0", run.eps0},
        {"witness_ok", run.witness_ok},
        {"A1", run.witness.A1},
        {"A2", run.witness.A2},
        {"eigenvalues", run.witness.eigenvalues},
        {"form_coeffs", run.form_coeffs},
    };
    const double dt_initial =
        run.cfg.scheme.auto_dt()
            ? dt_stable(run.initial, run.grid, run.chi, run.xi, run.cfg.scheme)
            : run.cfg.scheme.dt;
    j["time"] = {
        {"dt_fixed", !run.cfg.scheme.auto_dt()},
        {"dt_initial", dt_initial},
        {"dt_max", run.cfg.scheme.dt_max},
        {"cfl", run.cfg.scheme.cfl},
        {"diffusion", run.cfg.scheme.implicit_diffusion ? "implicit" : "explicit"},
        {"linear_tol", run.cfg.scheme.linear_tol},
        {"t_end", run.cfg.scheme.t_end},
        {"u_floor", run.cfg.scheme.u_floor},
        {"blowup_cap_abs", run.blowup_cap_abs},
    };
    j["output"] = {
        {"directory", run.cfg.directory},
        {"interval", run.output_interval},
        {"snapshots", run.cfg.snapshots},
    };
    j["forced"] = run.forced;
    j["force_notes"] = run.force_notes;
    return j;
}

struct SimulationOutcome {
    RunResult result;
    std::vector<DiagnosticsRecord> records;
    std::vector<Violation> violations;
    // Every run observes at least the initial state, so the lowered start
    // value is always overwritten before it reaches the summary.
    double q_max_overall = -std::numeric_limits<double>::infinity();
    double q_scale_max = 0.0;
    MonitorReport monitor;
    bool monitor_ok = false;
    std::uint64_t diag_clamp_warnings = 0;
    int exit_code = 0;
};

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << text;
    if (!out) throw ParseError("short write: " + path);
}

} // namespace detail

inline SimulationOutcome simulate(const ResolvedRun& run) {
    const std::string dir = run.cfg.directory;
    ensure_directory(dir);
    detail::write_text(dir + "/resolved.json", resolved_json(run).dump(2) + "\n");

    SimulationOutcome out;
    SeriesWriter series(dir + "/series.csv");
    std::ofstream manifest;
    if (run.cfg.snapshots) {
        manifest.open(dir + "/manifest.csv");
        if (!manifest) throw ParseError("cannot open manifest.csv in " + dir);
        manifest << "time,field,path\n";
    }

    SystemState state = run.initial;
    int frame = 0;
    std::vector<std::pair<double, double>> energy_series;

    const auto observe = [&](const SystemState& s, bool is_final) {
        if (is_final && !out.records.empty() && out.records.back().t == s.t)
            return;
        double q_scale = 0.0;
        const DiagnosticsRecord rec = make_record(
            s, run.grid, run.chi, run.xi, run.p, run.r, run.sigma,
            run.form_coeffs, run.cfg.scheme.u_floor, run.blowup_cap_abs,
            &out.diag_clamp_warnings, &q_scale);
        out.q_scale_max = std::max(out.q_scale_max, q_scale);
        out.q_max_overall = std::max(out.q_max_overall, rec.Q_max);
        series.append(rec);
        energy_series.emplace_back(rec.t, rec.energy_p);
        for (const Violation& v : bounds_check(rec, run.aux))
            out.violations.push_back(v);
        if (run.cfg.snapshots) {
            char name[64];
            for (const char* fld : {"u", "v", "w"}) {
                std::snprintf(name, sizeof(name), "%s_%04d.bin", fld, frame);
                const Field& data = fld[0] == 'u' ? s.u : fld[0] == 'v' ? s.v : s.w;
                write_snapshot(dir + "/" + name, run.grid, data);
                char row[128];
                std::snprintf(row, sizeof(row), "%.17g,%s,%s\n", s.t, fld, name);
                manifest << row;
            }
            ++frame;
        }
        out.records.push_back(rec);
    };
    const auto blown = [&](const SystemState& s) {
        return blowup_check(s, run.blowup_cap_abs);
    };

    out.result = arcs::run(state, run.grid, run.chi, run.xi, run.cfg.scheme,
                           run.output_interval, observe, blown);

    try {
        out.monitor = energy_monitor(energy_series, run.aux.theta);
        out.monitor_ok = true;
    } catch (const InsufficientSamples&) {
        out.monitor_ok = false;
    }

    if (out.result.status == RunStatus::suspected_blowup) out.exit_code = 3;
    else if (!out.violations.empty()) out.exit_code = 4;
    else out.exit_code = 0;

    nlohmann::json summary;
    summary["status"] = out.result.status == RunStatus::suspected_blowup
                            ? "suspected_blowup"
                            : "completed";
    summary["t_final"] = out.result.t_final;
    summary["steps"] = out.result.steps;
    summary["mass_initial"] = out.result.mass_initial;
    summary["mass_final"] = out.result.mass_final;
    summary["mass_drift_total"] =
        (out.result.mass_final - out.result.mass_initial) /
        std::max(std::abs(out.result.mass_initial), 1e-300);
    summary["max_step_mass_drift"] = out.result.max_step_mass_drift;
    summary["worst_relative_negativity"] = out.result.worst_relative_negativity;
    summary["total_linear_iters"] = out.result.total_linear_iters;
    summary["clamp_warnings_solver"] = out.result.clamp_warnings;
    summary["clamp_warnings_diagnostics"] = out.diag_clamp_warnings;
    double sup_u = 0.0, sup_v = 0.0, sup_w = 0.0;
    for (const auto& r : out.records) {
        sup_u = std::max(sup_u, r.linf_u);
        sup_v = std::max(sup_v, r.linf_v);
        sup_w = std::max(sup_w, r.linf_w);
    }
    summary["sup_linf_u"] = sup_u;
    summary["sup_linf_v"] = sup_v;
    summary["sup_linf_w"] = sup_w;
    summary["q_max_overall"] = out.q_max_overall;
    summary["q_scale_max"] = out.q_scale_max;
    if (out.monitor_ok) {
        summary["energy"] = {{"max", out.monitor.max_energy},
                             {"final_over_max", out.monitor.final_over_max},
                             {"plateau", out.monitor.plateau},
                             {"theta", out.monitor.theta}};
    }
    nlohmann::json viols = nlohmann::json::array();
    for (const Violation& v : out.violations)
        viols.push_back({{"t", v.t}, {"what", v.what}});
    summary["violations"] = viols;
    summary["forced"] = run.forced;
    summary["force_notes"] = run.force_notes;
    summary["caveats"] = nlohmann::json::array(
        {"box domain: corner effects near thresholds are not quantified",
         "c0 comes from a discrete kernel estimate, not a closed form"});
    summary["exit_code"] = out.exit_code;
    detail::write_text(dir + "/summary.json", summary.dump(2) + "\n");
    return out;
}

} // namespace arcs
