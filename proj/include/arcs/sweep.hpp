#pragma once

/// @file sweep.hpp
/// Cartesian parameter sweeps. A sweep file is an ordinary run config in
/// which any numeric scalar key may carry a comma-separated list; the
/// product of all lists is enumerated in file order (first listed key
/// varies slowest). Each combination runs in its own subdirectory
/// run_NNNN; failures are isolated into that row's status.

#include <atomic>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "arcs/config.hpp"
#include "arcs/simulate.hpp"

namespace arcs {

struct SweepPlan {
    std::vector<detail::IniEntry> entries;
    std::vector<std::size_t> swept_entry;          ///< indices into entries
    std::vector<std::vector<std::string>> values;  ///< per swept entry
    std::size_t combos = 1;
};

inline SweepPlan build_sweep_plan(const std::string& text) {
    SweepPlan plan;
    plan.entries = detail::parse_ini_entries(text);
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const auto& e = plan.entries[i];
        if (!detail::sweepable_keys().count(e.key)) continue;
        if (e.value.find(',') == std::string::npos) continue;
        std::vector<std::string> vals;
        std::string item;
        std::istringstream ss(e.value);
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty())
                throw ParseError("line " + std::to_string(e.line) +
                                 ": empty element in list for `" + e.key + "`");
            vals.push_back(item);
        }
        if (e.value.back() == ',')
            throw ParseError("line " + std::to_string(e.line) +
                             ": empty element in list for `" + e.key + "`");
        plan.swept_entry.push_back(i);
        plan.values.push_back(std::move(vals));
        plan.combos *= plan.values.back().size();
    }
    return plan;
}

/// Reconstructs single-valued config text for combination `index`,
/// counting with the first swept key as the most significant digit.
inline std::string sweep_config_text(const SweepPlan& plan, std::size_t index) {
    std::vector<std::size_t> choice(plan.values.size(), 0);
    for (std::size_t k = plan.values.size(); k-- > 0;) {
        choice[k] = index % plan.values[k].size();
        index /= plan.values[k].size();
    }
    std::ostringstream out;
    std::string section;
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const auto& e = plan.entries[i];
        if (e.section != section) {
            section = e.section;
            out << "[" << section << "]\n";
        }
        std::string value = e.value;
        for (std::size_t k = 0; k < plan.swept_entry.size(); ++k)
            if (plan.swept_entry[k] == i) value = plan.values[k][choice[k]];
        out << e.key << " = " << value << "\n";
    }
    return out.str();
}

struct SweepRow {
    std::string directory;
    std::vector<std::string> param_values; ///< swept values, plan order
    std::string status;                    ///< completed, completed_with_violations,
                                           ///< suspected_blowup, config_error
    double sup_linf_u = 0.0;
    double max_energy_p = 0.0;
    std::string note;                      ///< error text for config_error rows
};

inline int sweep_worker_count() {
    const char* env = std::getenv("ARC_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

inline std::vector<SweepRow> run_sweep(const SweepPlan& plan,
                                       const std::string& out_root) {
    ensure_directory(out_root);
    std::vector<SweepRow> rows(plan.combos);
    std::atomic<std::size_t> next{0};
    const int workers =
        std::min<std::size_t>(sweep_worker_count(), std::max<std::size_t>(plan.combos, 1));

    const auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < plan.combos;
             i = next.fetch_add(1)) {
            SweepRow& row = rows[i];
            char sub[32];
            std::snprintf(sub, sizeof(sub), "run_%04zu", i);
            row.directory = sub;
            std::vector<std::size_t> choice(plan.values.size(), 0);
            std::size_t rem = i;
            for (std::size_t k = plan.values.size(); k-- > 0;) {
                choice[k] = rem % plan.values[k].size();
                rem /= plan.values[k].size();
            }
            for (std::size_t k = 0; k < plan.values.size(); ++k)
                row.param_values.push_back(plan.values[k][choice[k]]);
            try {
                RunConfig cfg = parse_config_text(sweep_config_text(plan, i),
                                                  row.directory);
                cfg.directory = out_root + "/" + sub;
                const ResolvedRun run = resolve_run(cfg, false);
                const SimulationOutcome outcome = simulate(run);
                for (const auto& r : outcome.records) {
                    row.sup_linf_u = std::max(row.sup_linf_u, r.linf_u);
                    row.max_energy_p = std::max(row.max_energy_p, r.energy_p);
                }
                if (outcome.exit_code == 3) row.status = "suspected_blowup";
                else if (outcome.exit_code == 4) row.status = "completed_with_violations";
                else row.status = "completed";
            } catch (const Error& e) {
                row.status = "config_error";
                row.note = e.what();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return rows;
}

inline void write_sweep_summary(const std::string& path, const SweepPlan& plan,
                                const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open sweep summary: " + path);
    out << "run";
    for (std::size_t k : plan.swept_entry) out << "," << plan.entries[k].key;
    out << ",status,sup_linf_u,max_energy_p\n";
    for (const auto& row : rows) {
        out << row.directory;
        for (const auto& v : row.param_values) out << "," << v;
        char buf[80];
        std::snprintf(buf, sizeof(buf), ",%s,%.17g,%.17g\n", row.status.c_str(),
                      row.sup_linf_u, row.max_energy_p);
        out << buf;
    }
}

} // namespace arcs
