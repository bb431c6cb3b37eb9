#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "arcs/config.hpp"
#include "arcs/io.hpp"
#include "arcs/setup.hpp"
#include "arcs/sweep.hpp"

using Catch::Approx;

namespace {

const char* kMinimal = R"(
[domain]
dim = 1
cells_x = 16
length_x = 1.0
)";

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("minimal config applies defaults") {
    const arcs::RunConfig cfg = arcs::parse_config_text(kMinimal);
    CHECK(cfg.dim == 1);
    CHECK(cfg.cells[0] == 16);
    CHECK(cfg.theorem_n == 2);
    CHECK(cfg.chi.family == "pow");
    CHECK(cfg.chi.chat == 1.0);
    CHECK(cfg.chi.k == 2.0);
    CHECK(cfg.alpha.is_auto);
    CHECK(cfg.beta.is_auto);
    CHECK(cfg.p.is_auto);
    CHECK(cfg.scheme.auto_dt());
    CHECK(cfg.scheme.t_end == 1.0);
    CHECK(cfg.scheme.implicit_diffusion);
    CHECK(cfg.interval.is_auto);
    CHECK_FALSE(cfg.snapshots);
    CHECK_FALSE(cfg.has_c0_override);
}

TEST_CASE("unknown keys and sections are parse errors with line numbers") {
    const std::string bad = std::string(kMinimal) + "foo = 1\n";
    CHECK_THROWS_WITH(arcs::parse_config_text(bad),
                      Catch::Matchers::ContainsSubstring("foo") &&
                          Catch::Matchers::ContainsSubstring("line"));
    CHECK_THROWS_AS(arcs::parse_config_text("[nope]\nx = 1\n"), arcs::ParseError);
    CHECK_THROWS_AS(arcs::parse_config_text("dim = 1\n"), arcs::ParseError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[domain\ndim=1\n"),
        arcs::ParseError);
    CHECK_THROWS_AS(arcs::parse_config_text(std::string(kMinimal) + "cells_x\n"),
                    arcs::ParseError);
}

TEST_CASE("duplicate and malformed values are parse errors") {
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[domain]\ndim = 1\n"),
        arcs::ParseError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[time]\ndt_max = abc\n"),
        arcs::ParseError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[domain]\ncells_y = 1.5\n"),
        arcs::ParseError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[output]\nsnapshots = maybe\n"),
        arcs::ParseError);
}

TEST_CASE("validation rejects out-of-contract values") {
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[model]\nchi_k = 0.5\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[model]\nchi_k = 1.0\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[domain]\ncells_y = 8\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(arcs::parse_config_text("[domain]\ndim = 3\ncells_x = 8\n"),
                    arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text("[domain]\ndim = 1\ncells_x = 2\nlength_x = 1\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[weights]\np = 2.0\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) +
                                "[weights]\np = 0.9\nr = 0.1\nsigma = 0.1\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) + "[time]\ncfl = 1.5\n"),
        arcs::ValidationError);
    CHECK_THROWS_AS(
        arcs::parse_config_text(std::string(kMinimal) +
                                "[model]\nchi_family = const\nchi_k = 2\n"),
        arcs::ValidationError);
}

TEST_CASE("comments and explicit values parse") {
    const char* text = R"(
# leading comment
[domain]
dim = 2           # trailing comment
cells_x = 8
cells_y = 12
length_x = 1.0
length_y = 2.0
[model]
alpha = 8.0
beta = auto
[time]
dt = 0.01
t_end = 0.5
)";
    const arcs::RunConfig cfg = arcs::parse_config_text(text);
    CHECK(cfg.dim == 2);
    CHECK(cfg.cells[1] == 12);
    CHECK(cfg.lengths[1] == 2.0);
    CHECK_FALSE(cfg.alpha.is_auto);
    CHECK(cfg.alpha.value == 8.0);
    CHECK(cfg.beta.is_auto);
    CHECK_FALSE(cfg.scheme.auto_dt());
    CHECK(cfg.scheme.dt == 0.01);
}

TEST_CASE("snapshot files round-trip and reject corruption") {
    const arcs::Grid grid = arcs::Grid::make_2d(6, 4, 1.0, 1.0);
    arcs::Field f = grid.make_field();
    for (std::size_t c = 0; c < f.size(); ++c) f[c] = 0.25 * c - 3.0;
    const std::string path = temp_path("arcs_snapshot_test.bin");
    arcs::write_snapshot(path, grid, f);

    arcs::SnapshotInfo info;
    const arcs::Field back = arcs::read_snapshot(path, info);
    CHECK(info.dim == 2);
    CHECK(info.cells_x == 6);
    CHECK(info.cells_y == 4);
    REQUIRE(back.size() == f.size());
    for (std::size_t c = 0; c < f.size(); ++c) CHECK(back[c] == f[c]);

    {
        std::ofstream out(path, std::ios::binary);
        out << "JUNKJUNKJUNKJUNK";
    }
    CHECK_THROWS_AS(arcs::read_snapshot(path, info), arcs::ParseError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(arcs::read_snapshot(path, info), arcs::ParseError);
}

TEST_CASE("initial data generators") {
    const arcs::Grid grid = arcs::Grid::make_2d(16, 16, 1.0, 1.0);

    arcs::GeneratorSpec constant;
    constant.kind = arcs::GeneratorKind::constant;
    constant.amplitude = 4.5;
    const arcs::Field fc = arcs::generate_field(constant, grid);
    for (double x : fc) CHECK(x == 4.5);

    arcs::GeneratorSpec gauss;
    gauss.kind = arcs::GeneratorKind::gaussian_bump;
    gauss.amplitude = 10.0;
    gauss.width = 0.2;
    const arcs::Field fg = arcs::generate_field(gauss, grid);
    CHECK(arcs::field_max(fg) <= 10.0);
    CHECK(arcs::field_max(fg) > 9.0);
    CHECK(fg[grid.index(7, 7)] == fg[grid.index(8, 8)]);
    CHECK(fg[grid.index(0, 0)] < 0.05);

    arcs::GeneratorSpec cosine;
    cosine.kind = arcs::GeneratorKind::cosine_bump;
    cosine.amplitude = 2.0;
    cosine.width = 0.25;
    cosine.center = {0.5, 0.5};
    const arcs::Field fb = arcs::generate_field(cosine, grid);
    CHECK(fb[grid.index(0, 7)] == 0.0);
    CHECK(fb[grid.index(8, 8)] > 0.0);
    for (double x : fb) CHECK(x >= 0.0);

    const std::string path = temp_path("arcs_generator_file.bin");
    arcs::write_snapshot(path, grid, fg);
    arcs::GeneratorSpec file;
    file.kind = arcs::GeneratorKind::file;
    file.path = path;
    const arcs::Field ff = arcs::generate_field(file, grid);
    CHECK(ff == fg);
    const arcs::Grid other = arcs::Grid::make_2d(8, 8, 1.0, 1.0);
    CHECK_THROWS_AS(arcs::generate_field(file, other), arcs::ValidationError);
    std::filesystem::remove(path);
}

TEST_CASE("resolution fills every auto field on a certified setup") {
    const char* text = R"(
[domain]
dim = 1
cells_x = 64
length_x = 1.0
[model]
alpha = 8.0
beta = 6.0
u0 = gaussian-bump
u0_amplitude = 120.0
u0_width = 0.1
v0 = constant
v0_amplitude = 7.0
w0 = constant
w0_amplitude = 4.0
[time]
t_end = 2.0
)";
    const arcs::ResolvedRun run = arcs::resolve_run(arcs::parse_config_text(text));
    CHECK(run.certified);
    CHECK(run.certificate.threshold_star == Approx(4.0).margin(1e-6));
    CHECK(run.witness_ok);
    CHECK(run.p > 1.0);
    CHECK(run.r > 0.0);
    CHECK(run.sigma > 0.0);
    CHECK(run.eps0 > 0.0);
    CHECK(run.m0 > 0.0);
    CHECK(run.aux.c0 > 0.0);
    CHECK(run.aux.eta1 > 0.0);
    CHECK(run.aux.eta1 <= 7.0);
    CHECK(run.aux.eta2 <= 4.0);
    CHECK(run.aux.c4 > 0.0);
    CHECK(run.aux.c4 <= 1.0);
    CHECK(run.aux.theta > 0.0);
    CHECK(run.aux.theta < 1.0);
    CHECK(run.output_interval == Approx(2.0 / 50.0).margin(1e-15));
    CHECK_FALSE(run.forced);
    CHECK(run.force_notes.empty());
    CHECK(run.chi.eta_floor() == run.aux.eta1);
    CHECK(run.blowup_cap_abs ==
          Approx(1e6 * arcs::field_linf(run.initial.u)).epsilon(1e-12));
}

TEST_CASE("auto alpha resolves to the family's damping maximum") {
    const char* text = R"(
[domain]
dim = 1
cells_x = 32
length_x = 1.0
[model]
c0_override = 0.37
u0 = constant
u0_amplitude = 40.0
v0 = constant
v0_amplitude = 7.0
w0 = constant
w0_amplitude = 7.0
[time]
t_end = 1.0
)";
    const arcs::ResolvedRun run =
        arcs::resolve_run(arcs::parse_config_text(text));
    CHECK(run.aux.eta1 == Approx(3.8392955419722616).margin(1e-10));
    CHECK(run.aux.eta2 == Approx(run.aux.eta1).epsilon(1e-14));
    CHECK(run.alpha == Approx(arcs::max_alpha(run.chi)).epsilon(1e-14));
    CHECK(run.beta == Approx(arcs::max_alpha(run.xi)).epsilon(1e-14));
    CHECK(run.alpha == Approx(2.0 * (1.0 + 3.8392955419722616)).margin(1e-9));
    CHECK(run.certified);
    CHECK(run.witness_ok);
    CHECK_FALSE(run.forced);
}

TEST_CASE("uncertified parameters require force and are annotated") {
    const char* text = R"(
[domain]
dim = 1
cells_x = 32
length_x = 1.0
[model]
alpha = 3.0
beta = 6.0
u0 = constant
u0_amplitude = 1.0
v0 = constant
v0_amplitude = 5.0
w0 = constant
w0_amplitude = 5.0
[weights]
p = 2.0
r = 0.1
sigma = 0.1
[time]
t_end = 1.0
)";
    const arcs::RunConfig cfg = arcs::parse_config_text(text);
    CHECK_THROWS_AS(arcs::resolve_run(cfg, false), arcs::ValidationError);
    const arcs::ResolvedRun run = arcs::resolve_run(cfg, true);
    CHECK(run.forced);
    CHECK_FALSE(run.force_notes.empty());
    CHECK_FALSE(run.certified);
}

TEST_CASE("sweep plans expand Cartesian lists in file order") {
    const std::string text = std::string(kMinimal) + R"(
[model]
chi_chat = 1.0, 2.0
alpha = 4.0
beta = 6.0
[weights]
r = 0.05, 0.1, 0.2
p = 2.0
sigma = 0.1
[time]
t_end = 0.1
)";
    const arcs::SweepPlan plan = arcs::build_sweep_plan(text);
    CHECK(plan.combos == 6);
    REQUIRE(plan.swept_entry.size() == 2);
    CHECK(plan.entries[plan.swept_entry[0]].key == "chi_chat");
    CHECK(plan.entries[plan.swept_entry[1]].key == "r");

    const std::string combo0 = arcs::sweep_config_text(plan, 0);
    CHECK(combo0.find("chi_chat = 1.0") != std::string::npos);
    CHECK(combo0.find("r = 0.05") != std::string::npos);
    const std::string combo5 = arcs::sweep_config_text(plan, 5);
    CHECK(combo5.find("chi_chat = 2.0") != std::string::npos);
    CHECK(combo5.find("r = 0.2") != std::string::npos);
    CHECK_NOTHROW(arcs::parse_config_text(combo0));

    CHECK_THROWS_AS(
        arcs::build_sweep_plan(std::string(kMinimal) + "[model]\nalpha = 1,,2\n"),
        arcs::ParseError);
    CHECK_THROWS_AS(
        arcs::build_sweep_plan(std::string(kMinimal) + "[model]\nalpha = 1,2,\n"),
        arcs::ParseError);
}

TEST_CASE("config file wrapper reports missing files") {
    CHECK_THROWS_AS(arcs::parse_config("/nonexistent/path.ini"), arcs::ParseError);
    const std::string path = temp_path("arcs_config_test.ini");
    {
        std::ofstream out(path);
        out << kMinimal;
    }
    CHECK_NOTHROW(arcs::parse_config(path));
    std::filesystem::remove(path);
}
