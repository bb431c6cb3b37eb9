// arcs: numerical laboratory for an attraction-repulsion chemotaxis
// system with signal-dependent sensitivities. Subcommands: certify a
// parameter pair, simulate a configured run, sweep over parameter
// lists, and check the solver's spatial convergence order.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "arcs/arcs.hpp"

namespace {

int cmd_certify(int n, double alpha, double beta) {
    nlohmann::json report;
    report["input"] = {{"n", n}, {"alpha", alpha}, {"beta", beta}};
    int code = 0;
    try {
        const arcs::Certificate cert = arcs::certify(n, alpha, beta);
        report["certificate"] = {{"n", cert.n},
                                 {"alpha", cert.alpha},
                                 {"beta", cert.beta},
                                 {"delta_star", cert.delta_star},
                                 {"threshold_star", cert.threshold_star},
                                 {"feasible", cert.feasible}};
        if (cert.feasible) {
            try {
                const arcs::Witness w = arcs::find_witness(n, alpha, beta);
                report["witness"] = {{"p", w.p},
                                     {"r", w.r},
                                     {"sigma", w.sigma},
                                     {"eps0", w.eps0},
                                     {"A1", w.A1},
                                     {"A2", w.A2},
                                     {"eigenvalues", w.eigenvalues}};
                report["aux"] = {{"theta", arcs::theta_exponent(w.p, n)}};
                report["certified"] = true;
            } catch (const arcs::NotFound& e) {
                report["certified"] = false;
                report["reason"] = std::string("witness search failed: ") + e.what();
                code = 1;
            }
        } else {
            report["certified"] = false;
            report["reason"] = "alpha does not exceed the minimized threshold";
            code = 1;
        }
    } catch (const arcs::BetaInfeasible& e) {
        report["certified"] = false;
        report["reason"] = std::string("beta infeasible: ") + e.what();
        code = 1;
    }
    std::cout << report.dump(2) << "\n";
    return code;
}

int cmd_certify_config(const std::string& path) {
    const arcs::RunConfig cfg = arcs::parse_config(path);
    nlohmann::json report;
    int code = 0;
    try {
        const arcs::ResolvedRun run = arcs::resolve_run(cfg, false);
        report = arcs::resolved_json(run);
        report["certified"] = run.certified && run.witness_ok;
        if (!report["certified"].get<bool>()) code = 1;
    } catch (const arcs::ValidationError& e) {
        report["certified"] = false;
        report["reason"] = e.what();
        code = 1;
    } catch (const arcs::BetaInfeasible& e) {
        report["certified"] = false;
        report["reason"] = std::string("beta infeasible: ") + e.what();
        code = 1;
    }
    std::cout << report.dump(2) << "\n";
    return code;
}

int cmd_simulate(const std::string& path, bool force, const std::string& out_dir) {
    arcs::RunConfig cfg = arcs::parse_config(path);
    if (!out_dir.empty()) cfg.directory = out_dir;
    const arcs::ResolvedRun run = arcs::resolve_run(cfg, force);
    if (force) {
        std::cerr << "WARNING: forced parameters; the boundedness certificate "
                     "does not cover this run\n";
        for (const std::string& note : run.force_notes)
            std::cerr << "WARNING: " << note << "\n";
    }
    const arcs::SimulationOutcome outcome = arcs::simulate(run);
    std::cout << "status: "
              << (outcome.result.status == arcs::RunStatus::suspected_blowup
                      ? "suspected_blowup"
                      : "completed")
              << ", steps: " << outcome.result.steps
              << ", t_final: " << outcome.result.t_final
              << ", violations: " << outcome.violations.size() << "\n";
    std::cout << "outputs in " << run.cfg.directory << "\n";
    return outcome.exit_code;
}

int cmd_sweep(const std::string& path, const std::string& out_root) {
    std::ifstream in(path);
    if (!in) throw arcs::ParseError("cannot open sweep file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const arcs::SweepPlan plan = arcs::build_sweep_plan(buf.str());
    try {
        arcs::parse_config_text(arcs::sweep_config_text(plan, 0), path);
    } catch (const arcs::ValidationError&) {
        // value ranges differ per combination; handled as per-run status
    }
    const std::vector<arcs::SweepRow> rows = arcs::run_sweep(plan, out_root);
    arcs::write_sweep_summary(out_root + "/sweep_summary.csv", plan, rows);
    for (const auto& row : rows) {
        std::cout << row.directory << ": " << row.status;
        if (!row.note.empty()) std::cout << " (" << row.note << ")";
        std::cout << "\n";
    }
    std::cout << plan.combos << " runs, summary in " << out_root
              << "/sweep_summary.csv\n";
    return 0;
}

int cmd_convergence(const std::string& cells_arg, double t_end, double dt) {
    std::vector<int> cells;
    std::string item;
    std::istringstream ss(cells_arg);
    while (std::getline(ss, item, ',')) {
        try {
            cells.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw arcs::ParseError("bad --cells list: " + cells_arg);
        }
    }
    const arcs::ConvergenceReport rep = arcs::run_convergence(cells, t_end, dt);
    std::printf("%8s %12s %12s %14s %8s\n", "cells", "h", "dt", "max_error",
                "order");
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        if (i == 0)
            std::printf("%8d %12.5e %12.5e %14.6e %8s\n", r.cells, r.h, r.dt,
                        r.error, "-");
        else
            std::printf("%8d %12.5e %12.5e %14.6e %8.3f\n", r.cells, r.h, r.dt,
                        r.error, rep.orders[i - 1]);
    }
    std::printf("observed orders within [1.7, 2.3]: %s\n",
                rep.pass ? "yes" : "no");
    return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for attraction-repulsion chemotaxis "
                 "with signal-dependent sensitivities"};
    app.require_subcommand(1);

    auto* certify = app.add_subcommand(
        "certify", "check a parameter pair against the boundedness threshold");
    int n = 2;
    double alpha = 0.0, beta = 0.0;
    std::string certify_config;
    certify->add_option("--n", n, "space dimension")->default_val(2);
    auto* alpha_opt = certify->add_option("--alpha", alpha, "attraction strength bound");
    auto* beta_opt = certify->add_option("--beta", beta, "repulsion strength bound");
    certify->add_option("--config", certify_config,
                        "resolve and certify a full run config instead");
    alpha_opt->needs(beta_opt);
    beta_opt->needs(alpha_opt);

    auto* simulate = app.add_subcommand("simulate", "run one configured simulation");
    std::string sim_config, sim_out;
    bool force = false;
    simulate->add_option("config", sim_config, "run configuration file")->required();
    simulate->add_flag("--force-params", force,
                       "run even if certification fails (prints a warning)");
    simulate->add_option("--directory", sim_out, "override the output directory");

    auto* sweep = app.add_subcommand("sweep", "run a Cartesian parameter sweep");
    std::string sweep_config, sweep_out = "sweep_out";
    sweep->add_option("config", sweep_config,
                      "config file with comma lists on swept keys")
        ->required();
    sweep->add_option("--output", sweep_out, "root directory for the runs");

    auto* convergence = app.add_subcommand(
        "convergence", "order check against the exact decaying cosine mode");
    std::string cells = "32,64,128";
    double t_end = 0.1, dt = -1.0;
    convergence->add_option("--cells", cells, "comma list of 1D resolutions");
    convergence->add_option("--t-end", t_end, "final time of the decay test");
    convergence->add_option("--dt", dt, "fixed time step (default: h^2 per grid)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (certify->parsed()) {
            if (!certify_config.empty()) return cmd_certify_config(certify_config);
            if (alpha_opt->count() == 0)
                throw arcs::ValidationError(
                    "certify needs --alpha and --beta, or --config");
            return cmd_certify(n, alpha, beta);
        }
        if (simulate->parsed()) return cmd_simulate(sim_config, force, sim_out);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out);
        if (convergence->parsed()) return cmd_convergence(cells, t_end, dt);
    } catch (const arcs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
