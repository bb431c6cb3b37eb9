#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string output;
};

fs::path scratch_dir() {
    const fs::path p = fs::temp_directory_path() / "arcs_cli_tests";
    fs::create_directories(p);
    return p;
}

CliResult run_cli(const std::string& args) {
    const fs::path log = scratch_dir() / "cli_output.txt";
    const std::string cmd =
        std::string(ARCS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliResult res;
    if (raw != -1 && WIFEXITED(raw)) res.code = WEXITSTATUS(raw);
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

// Uniform state, certified pair, settles in a handful of steps.
const char* kQuietConfig = R"(
[domain]
dim = 1
cells_x = 32
length_x = 1.0
[model]
alpha = 8.0
beta = 6.0
c0_override = 0.37
u0 = constant
u0_amplitude = 40.0
v0 = constant
v0_amplitude = 7.0
w0 = constant
w0_amplitude = 7.0
[time]
dt_max = 0.01
t_end = 0.05
[output]
directory = %OUT%
)";

std::string quiet_config_text(const fs::path& out_dir) {
    std::string text = kQuietConfig;
    const std::string token = "%OUT%";
    text.replace(text.find(token), token.size(), out_dir.string());
    return text;
}

} // namespace

TEST_CASE("certify exits 0 for a certified pair and 1 otherwise") {
    CHECK(run_cli("certify --n 2 --alpha 20 --beta 4").code == 0);
    CHECK(run_cli("certify --n 2 --alpha 5 --beta 4").code == 1);

    const CliResult infeasible = run_cli("certify --n 2 --alpha 20 --beta 3");
    CHECK(infeasible.code == 1);
    CHECK(infeasible.output.find("beta infeasible") != std::string::npos);
}

TEST_CASE("certify reports the pair and threshold") {
    const CliResult res = run_cli("certify --n 2 --alpha 20 --beta 4");
    CHECK(res.output.find("\"certified\": true") != std::string::npos);
    CHECK(res.output.find("threshold") != std::string::npos);
    CHECK(res.output.find("witness") != std::string::npos);
}

TEST_CASE("bad invocations exit 2") {
    CHECK(run_cli("certify --alpha 20").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("simulate /nonexistent/nowhere.ini").code == 2);
    CHECK(run_cli("").code == 2);
}

TEST_CASE("certify --config resolves a full configuration") {
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "certify_cfg.ini";
    write_file(cfg, quiet_config_text(dir / "certify_out"));
    const CliResult res = run_cli("certify --config " + cfg.string());
    CHECK(res.code == 0);
    CHECK(res.output.find("\"certified\": true") != std::string::npos);
}

TEST_CASE("simulate writes the output set and exits 0") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "quiet_out";
    fs::remove_all(out);
    const fs::path cfg = dir / "quiet.ini";
    write_file(cfg, quiet_config_text(out));

    const CliResult res = run_cli("simulate " + cfg.string());
    CHECK(res.code == 0);
    CHECK(fs::exists(out / "series.csv"));
    CHECK(fs::exists(out / "resolved.json"));
    CHECK(fs::exists(out / "summary.json"));
}

TEST_CASE("zero horizon yields exactly one series row") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "t0_out";
    fs::remove_all(out);
    const fs::path cfg = dir / "t0.ini";
    std::string text = quiet_config_text(out);
    text.replace(text.find("t_end = 0.05"), 12, "t_end = 0.0 ");
    write_file(cfg, text);

    CHECK(run_cli("simulate " + cfg.string()).code == 0);
    CHECK(count_lines(out / "series.csv") == 2); // header + initial state
}

TEST_CASE("convergence study passes on a nested pair of grids") {
    const CliResult res = run_cli("convergence --cells 16,32 --t-end 0.05");
    CHECK(res.code == 0);
    CHECK(res.output.find("order") != std::string::npos);
    CHECK(res.output.find("yes") != std::string::npos);
}

TEST_CASE("sweep expands lists and writes one row per combination") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "sweep_out";
    fs::remove_all(out);
    const fs::path cfg = dir / "sweep.ini";
    std::string text = quiet_config_text(out / "ignored");
    text.replace(text.find("alpha = 8.0"), 11, "alpha = 8.0, 9.0");
    text.replace(text.find("dt_max = 0.01"), 13, "dt_max = 0.01, 0.02");
    write_file(cfg, text);

    const CliResult res = run_cli("sweep " + cfg.string() +
                                  " --output " + out.string());
    CHECK(res.code == 0);
    for (int i = 0; i < 4; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "run_%04d", i);
        CHECK(fs::exists(out / name / "series.csv"));
    }
    CHECK(count_lines(out / "sweep_summary.csv") == 5);
}

TEST_CASE("sweep rejects an empty list element") {
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "sweep_bad.ini";
    std::string text = quiet_config_text(dir / "sweep_bad_out");
    text.replace(text.find("alpha = 8.0"), 11, "alpha = 8.0,,9.0");
    write_file(cfg, text);
    const CliResult res = run_cli("sweep " + cfg.string() + " --output " +
                                  (dir / "sweep_bad_out").string());
    CHECK(res.code == 2);
    CHECK(res.output.find("empty") != std::string::npos);
}

TEST_CASE("forced runs warn but proceed") {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "forced_out";
    fs::remove_all(out);
    const fs::path cfg = dir / "forced.ini";
    std::string text = quiet_config_text(out);
    text.replace(text.find("alpha = 8.0"), 11, "alpha = 3.0"); // below threshold
    text += "[weights]\np = 2.0\nr = 0.1\nsigma = 0.1\n";
    write_file(cfg, text);

    CHECK(run_cli("simulate " + cfg.string()).code == 2);

    const CliResult res = run_cli("simulate --force-params " + cfg.string());
    CHECK(res.code == 0);
    CHECK(res.output.find("WARNING") != std::string::npos);
    CHECK(fs::exists(out / "summary.json"));
}
