// Acceptance gate: one pass/fail line per criterion, exit code = failures.
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "arcs/arcs.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, const char* what, bool ok, const std::string& note = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what,
                note.empty() ? "" : " -- ", note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

fs::path scratch_dir() {
    const fs::path p = fs::temp_directory_path() / "arcs_acceptance";
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    const fs::path log = scratch_dir() / "cli_output.txt";
    const std::string cmd =
        std::string(ARCS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    if (raw == -1 || !WIFEXITED(raw)) return -1;
    return WEXITSTATUS(raw);
}

nlohmann::json load_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    nlohmann::json j;
    in >> j;
    return j;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion1() {
    const char* what = "certifier closed forms match hand evaluations";
    try {
        const auto [lo, hi] = arcs::interval_J(2, 4.0);
        bool ok = std::abs(lo - (2.0 - std::sqrt(3.0))) <= 1e-9 &&
                  std::abs(hi - (2.0 + std::sqrt(3.0))) <= 1e-9;
        ok = ok && std::abs(arcs::discriminant_D(2, 4.0, 2.0) - 532.0) <= 1e-9;
        ok = ok && std::abs(arcs::discriminant_D(2, 4.0, 1.0) - 121.0) <= 1e-9;
        ok = ok && std::abs(arcs::alpha_threshold(2, 4.0, 1.0) - 10.0) <= 1e-9;
        const double expected = (20.0 + std::sqrt(532.0)) / 3.0;
        ok = ok && std::abs(arcs::alpha_threshold(2, 4.0, 2.0) - expected) <= 1e-9;
        report(1, what, ok);
    } catch (const std::exception& e) {
        report(1, what, false, e.what());
    }
}

void criterion2() {
    const char* what = "certification end-to-end and strict beta feasibility";
    try {
        const arcs::Certificate good = arcs::certify(2, 20.0, 4.0);
        bool ok = good.feasible && good.threshold_star >= 9.99 &&
                  good.threshold_star <= 10.01;
        ok = ok && !arcs::certify(2, 5.0, 4.0).feasible;
        const double edge = 2.0 + std::sqrt(1.0); // n + sqrt(n/2) at n = 2
        ok = ok && !arcs::beta_feasible(2, edge);
        ok = ok && arcs::beta_feasible(2, std::nextafter(edge, 4.0));
        bool threw = false;
        try {
            arcs::certify(2, 20.0, edge);
        } catch (const arcs::BetaInfeasible&) {
            threw = true;
        }
        report(2, what, ok && threw);
    } catch (const std::exception& e) {
        report(2, what, false, e.what());
    }
}

void criterion3() {
    const char* what = "witness is independently negative definite";
    try {
        const arcs::Witness w = arcs::find_witness(2, 20.0, 4.0);
        const std::array<double, 6> a =
            arcs::coefficients(w.p, w.r, w.sigma, 20.0, 4.0, w.eps0);
        const auto [A1, A2] = arcs::minors(a);
        double amax = 0.0;
        for (double c : a) amax = std::max(amax, std::abs(c));
        const auto eig = arcs::form_eigenvalues(a);
        bool ok = A1 > 0.0 && A2 < 0.0;
        for (double lam : eig) ok = ok && lam < -1e-12 * amax;

        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> dist(0.0, 10.0);
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 1000000; ++i) {
            const double x = dist(rng), y = dist(rng), z = dist(rng);
            const double q = a[0] * x * x + a[1] * x * y + a[2] * x * z +
                             a[3] * y * y + a[4] * y * z + a[5] * z * z;
            const double scale = amax * std::max(1.0, x * x + y * y + z * z);
            worst = std::max(worst, q / scale);
        }
        ok = ok && worst <= 1e-9;
        report(3, what, ok, "worst normalized Q = " + std::to_string(worst));
    } catch (const std::exception& e) {
        report(3, what, false, e.what());
    }
}

void criterion4() {
    const char* what = "signal floor formula and monotonicity";
    try {
        bool ok =
            std::abs(arcs::eta_bound(1.0, 1.0, 1.0) - (3.0 - std::sqrt(5.0)) / 2.0) <=
            1e-10;
        ok = ok && arcs::eta_bound(0.0, 3.7, 0.21) == 0.0;
        ok = ok && arcs::eta_bound(0.0, 50.0, 1.4) == 0.0;

        std::mt19937 rng(777);
        std::uniform_real_distribution<double> dist(0.05, 20.0);
        for (int i = 0; i < 1000 && ok; ++i) {
            const double z0 = dist(rng), m = dist(rng), c0 = dist(rng) / 10.0;
            const double base = arcs::eta_bound(z0, m, c0);
            const double slack = 1e-9 * (1.0 + base);
            ok = ok && arcs::eta_bound(z0 * 1.1, m, c0) >= base - slack;
            ok = ok && arcs::eta_bound(z0, m * 1.1, c0) >= base - slack;
            ok = ok && arcs::eta_bound(z0, m, c0 * 1.1) >= base - slack;
            ok = ok && base <= z0 + slack && base <= c0 * m + slack;
        }
        report(4, what, ok);
    } catch (const std::exception& e) {
        report(4, what, false, e.what());
    }
}

void criterion5() {
    const char* what = "solver shows second-order decay convergence";
    std::string out;
    const int code = run_cli("convergence", &out);
    report(5, what, code == 0,
           code == 0 ? "" : "exit " + std::to_string(code));
}

struct ReferenceArtifacts {
    fs::path dir_a;
    fs::path dir_b;
    bool ran_a = false;
    bool ran_b = false;
};

ReferenceArtifacts g_ref;

void criterion6() {
    const char* what = "reference run conserves mass and stays nonnegative";
    try {
        g_ref.dir_a = scratch_dir() / "reference_a";
        fs::remove_all(g_ref.dir_a);
        const std::string cfg =
            std::string(ARCS_CONFIG_DIR) + "/reference2d.ini";
        const int code =
            run_cli("simulate " + cfg + " --directory " + g_ref.dir_a.string());
        if (code != 0) {
            report(6, what, false, "simulate exit " + std::to_string(code));
            return;
        }
        g_ref.ran_a = true;
        const nlohmann::json summary = load_json(g_ref.dir_a / "summary.json");
        const double drift = std::abs(summary["mass_drift_total"].get<double>());
        const double neg = summary["worst_relative_negativity"].get<double>();
        const bool ok = summary["status"] == "completed" && drift <= 1e-8 &&
                        neg >= -1e-12;
        report(6, what, ok,
               "relative drift " + std::to_string(drift) +
                   ", worst negativity " + std::to_string(neg));
    } catch (const std::exception& e) {
        report(6, what, false, e.what());
    }
}

void criterion7() {
    const char* what = "theory monitors hold on every reference record";
    try {
        if (!g_ref.ran_a) {
            report(7, what, false, "reference run unavailable");
            return;
        }
        const nlohmann::json resolved = load_json(g_ref.dir_a / "resolved.json");
        const nlohmann::json summary = load_json(g_ref.dir_a / "summary.json");
        const double c4 = resolved["constants"]["c4"].get<double>();
        const double eta1 = resolved["constants"]["eta1"].get<double>();
        const double eta2 = resolved["constants"]["eta2"].get<double>();
        const double q_scale = summary["q_scale_max"].get<double>();
        const auto records =
            arcs::read_series((g_ref.dir_a / "series.csv").string());

        bool ok = !records.empty();
        for (const arcs::DiagnosticsRecord& rec : records) {
            ok = ok && rec.f_min >= c4 - 1e-12;
            ok = ok && rec.f_max <= 1.0 + 1e-12;
            ok = ok && rec.min_v >= eta1 - 0.05 * eta1;
            ok = ok && rec.min_w >= eta2 - 0.05 * eta2;
            ok = ok && rec.Q_max <= 1e-9 * q_scale;
            ok = ok && !rec.blowup;
        }
        ok = ok && summary.contains("energy") &&
             summary["energy"]["plateau"].get<bool>();
        report(7, what, ok,
               "records " + std::to_string(records.size()) + ", plateau " +
                   (summary.contains("energy") &&
                            summary["energy"]["plateau"].get<bool>()
                        ? "true"
                        : "false"));
    } catch (const std::exception& e) {
        report(7, what, false, e.what());
    }
}

void criterion8() {
    const char* what = "forced steep run stops as suspected blow-up";
    try {
        const fs::path dir = scratch_dir() / "blowup_probe";
        fs::remove_all(dir);
        const std::string cfg =
            std::string(ARCS_CONFIG_DIR) + "/blowup_probe.ini";
        const int code = run_cli("simulate --force-params " + cfg +
                                 " --directory " + dir.string());
        bool ok = code == 3;
        std::string note = "exit " + std::to_string(code);
        if (ok) {
            const nlohmann::json summary = load_json(dir / "summary.json");
            ok = summary["status"] == "suspected_blowup";
            note += ", status " + summary["status"].get<std::string>();
        }
        report(8, what, ok, note);
    } catch (const std::exception& e) {
        report(8, what, false, e.what());
    }
}

void criterion9() {
    const char* what = "series output is byte-identical across reruns";
    try {
        if (!g_ref.ran_a) {
            report(9, what, false, "reference run unavailable");
            return;
        }
        g_ref.dir_b = scratch_dir() / "reference_b";
        fs::remove_all(g_ref.dir_b);
        const std::string cfg =
            std::string(ARCS_CONFIG_DIR) + "/reference2d.ini";
        const int code =
            run_cli("simulate " + cfg + " --directory " + g_ref.dir_b.string());
        if (code != 0) {
            report(9, what, false, "second run exit " + std::to_string(code));
            return;
        }
        const std::string a = read_bytes(g_ref.dir_a / "series.csv");
        const std::string b = read_bytes(g_ref.dir_b / "series.csv");
        report(9, what, !a.empty() && a == b,
               std::to_string(a.size()) + " bytes");
    } catch (const std::exception& e) {
        report(9, what, false, e.what());
    }
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria failed\n", failures);
    return failures;
}
