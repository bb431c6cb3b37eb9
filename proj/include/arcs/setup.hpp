#pragma once

/// @file setup.hpp
/// Turns a parsed RunConfig into a ResolvedRun: builds the grid and
/// initial fields, estimates the kernel constant, derives the signal
/// lower bounds and sensitivity floors, fills `auto` parameters,
/// certifies the (alpha, beta) pair, and locates the quadratic-form
/// witness. Certification failures throw unless `force` is set, in
/// which case they are collected as notes for the run report.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "arcs/certifier.hpp"
#include "arcs/config.hpp"
#include "arcs/errors.hpp"
#include "arcs/grid.hpp"
#include "arcs/io.hpp"
#include "arcs/sensitivity.hpp"
#include "arcs/solver.hpp"

namespace arcs {

inline Field generate_field(const GeneratorSpec& spec, const Grid& grid) {
    Field f = grid.make_field();
    if (spec.kind == GeneratorKind::file) {
        SnapshotInfo info;
        Field data = read_snapshot(spec.path, info);
        const std::uint32_t ny =
            static_cast<std::uint32_t>(grid.dim() == 2 ? grid.cells(1) : 1);
        if (info.dim != grid.dim() ||
            info.cells_x != static_cast<std::uint32_t>(grid.cells(0)) ||
            info.cells_y != ny)
            throw ValidationError("snapshot " + spec.path +
                                  " does not match the configured grid");
        return data;
    }
    if (spec.kind == GeneratorKind::constant) {
        std::fill(f.begin(), f.end(), spec.amplitude);
        return f;
    }
    double width = spec.width;
    if (width <= 0.0) {
        width = grid.length(0);
        if (grid.dim() == 2) width = std::min(width, grid.length(1));
        width /= 8.0;
    }
    std::array<double, 2> center = spec.center;
    for (int a = 0; a < grid.dim(); ++a)
        if (center[a] < 0.0) center[a] = 0.5 * grid.length(a);

    const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < grid.cells(0); ++i) {
            double value = spec.amplitude;
            for (int a = 0; a < grid.dim(); ++a) {
                const double d = grid.center(a, a == 0 ? i : j) - center[a];
                if (spec.kind == GeneratorKind::cosine_bump) {
                    if (std::abs(d) >= width) {
                        value = 0.0;
                        break;
                    }
                    const double c = std::cos(0.5 * std::numbers::pi * d / width);
                    value *= c * c;
                } else {
                    value *= std::exp(-0.5 * d * d / (width * width));
                }
            }
            f[grid.index(i, j)] = value;
        }
    }
    return f;
}

struct ResolvedRun {
    RunConfig cfg;
    Grid grid = Grid::make_1d(4, 1.0);
    SystemState initial{Grid::make_1d(4, 1.0)};
    SensitivitySpec chi = SensitivitySpec::constant(1.0);
    SensitivitySpec xi = SensitivitySpec::constant(1.0);
    double alpha = 0.0;
    double beta = 0.0;
    bool certified = false;
    Certificate certificate{};
    Witness witness{};
    bool witness_ok = false;
    double p = 0.0, r = 0.0, sigma = 0.0, eps0 = 0.0;
    std::array<double, 6> form_coeffs{};
    AuxConstants aux{};
    double m0 = 0.0;
    double output_interval = 0.0;
    double blowup_cap_abs = std::numeric_limits<double>::infinity();
    bool forced = false;
    std::vector<std::string> force_notes;
};

namespace detail {

inline void require_or_note(bool ok, const std::string& what, bool force,
                            ResolvedRun& run) {
    if (ok) return;
    if (!force) throw ValidationError(what);
    run.forced = true;
    run.force_notes.push_back(what);
}

inline SensitivitySpec make_spec(const FamilyConfig& fam, double eta_floor) {
    if (fam.family == "pow") return SensitivitySpec::power(fam.chat, fam.k, eta_floor);
    return SensitivitySpec::constant(fam.chat, eta_floor);
}

/// Largest eps in [0, 1) keeping both feasibility minors strict, scaled
/// back to 90% as a safety margin; 0 when already infeasible at eps = 0.
inline bool witness_from_weights(int n, double alpha, double beta, double p,
                                 double r, double sigma, Witness& w) {
    const auto ok_at = [&](double eps) {
        const auto a = coefficients(p, r, sigma, alpha, beta, eps);
        const auto [A1, A2] = minors(a);
        const double scale =
            std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]),
                      std::abs(a[3]), std::abs(a[4]), std::abs(a[5]), 1.0});
        return A1 > 1e-14 * scale * scale && A2 < -1e-14 * scale * scale * scale;
    };
    (void)n;
    if (!ok_at(0.0)) return false;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (ok_at(mid) ? lo : hi) = mid;
    }
    w.p = p;
    w.r = r;
    w.sigma = sigma;
    w.eps0 = 0.9 * lo;
    const auto a = coefficients(p, r, sigma, alpha, beta, w.eps0);
    const auto [A1, A2] = minors(a);
    w.A1 = A1;
    w.A2 = A2;
    w.eigenvalues = form_eigenvalues(a);
    const double scale =
        std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), std::abs(a[3]),
                  std::abs(a[4]), std::abs(a[5]), 1.0});
    return w.A1 > 0.0 && w.A2 < 0.0 && w.eigenvalues[2] < -1e-12 * scale;
}

} // namespace detail

inline ResolvedRun resolve_run(const RunConfig& cfg, bool force = false) {
    ResolvedRun run;
    run.cfg = cfg;
    run.grid = cfg.dim == 1
                   ? Grid::make_1d(cfg.cells[0], cfg.lengths[0])
                   : Grid::make_2d(cfg.cells[0], cfg.cells[1], cfg.lengths[0],
                                   cfg.lengths[1]);
    run.initial = SystemState(run.grid);
    run.initial.u = generate_field(cfg.u0, run.grid);
    run.initial.v = generate_field(cfg.v0, run.grid);
    run.initial.w = generate_field(cfg.w0, run.grid);
    for (const auto* f : {&run.initial.u, &run.initial.v, &run.initial.w})
        if (field_min(*f) < 0.0)
            throw ValidationError("initial data must be nonnegative");

    run.m0 = field_mass(run.initial.u, run.grid);
    run.aux.c0 = cfg.has_c0_override ? cfg.c0_override : kernel_c0_estimate(run.grid);

    const double min_v0 = field_min(run.initial.v);
    const double min_w0 = field_min(run.initial.w);
    run.aux.eta1 = run.m0 > 0.0 ? eta_bound(min_v0, run.m0, run.aux.c0) : 0.0;
    run.aux.eta2 = run.m0 > 0.0 ? eta_bound(min_w0, run.m0, run.aux.c0) : 0.0;

    run.chi = detail::make_spec(cfg.chi, run.aux.eta1);
    run.xi = detail::make_spec(cfg.xi, run.aux.eta2);

    if (cfg.alpha.is_auto) {
        if (cfg.chi.family != "pow")
            throw ValidationError("alpha must be explicit for the const family");
        run.alpha = max_alpha(run.chi);
    } else {
        run.alpha = cfg.alpha.value;
    }
    if (cfg.beta.is_auto) {
        if (cfg.xi.family != "pow")
            throw ValidationError("beta must be explicit for the const family");
        run.beta = max_alpha(run.xi);
    } else {
        run.beta = cfg.beta.value;
    }

    const HypothesisReport chi_rep = validate_hypotheses(run.chi, run.alpha);
    const HypothesisReport xi_rep = validate_hypotheses(run.xi, run.beta);
    run.chi.set_alpha_like(run.alpha);
    run.xi.set_alpha_like(run.beta);
    run.chi.set_c_bound(chi_rep.c_bound);
    run.xi.set_c_bound(xi_rep.c_bound);
    detail::require_or_note(chi_rep.all_ok(),
                            "attraction sensitivity violates its hypotheses", force, run);
    detail::require_or_note(xi_rep.all_ok(),
                            "repulsion sensitivity violates its hypotheses", force, run);

    try {
        run.certificate = certify(cfg.theorem_n, run.alpha, run.beta);
        run.certified = run.certificate.feasible;
        if (!run.certified)
            detail::require_or_note(
                false,
                "pair (alpha, beta) is below the certified threshold " +
                    std::to_string(run.certificate.threshold_star),
                force, run);
    } catch (const BetaInfeasible& e) {
        detail::require_or_note(false, std::string("beta infeasible: ") + e.what(),
                                force, run);
    }

    if (cfg.p.is_auto) {
        if (!run.certified)
            throw ValidationError(
                "weights must be explicit when the pair is not certified");
        run.witness = find_witness(cfg.theorem_n, run.alpha, run.beta);
        run.witness_ok = true;
    } else {
        run.witness_ok = detail::witness_from_weights(
            cfg.theorem_n, run.alpha, run.beta, cfg.p.value, cfg.r.value,
            cfg.sigma.value, run.witness);
        run.witness.p = cfg.p.value;
        run.witness.r = cfg.r.value;
        run.witness.sigma = cfg.sigma.value;
        if (!run.witness_ok) {
            run.witness.eps0 = 0.0;
            detail::require_or_note(
                false, "explicit weights do not certify the quadratic form", force,
                run);
        }
    }
    run.p = run.witness.p;
    run.r = run.witness.r;
    run.sigma = run.witness.sigma;
    run.eps0 = run.witness.eps0;
    run.form_coeffs =
        coefficients(run.p, run.r, run.sigma, run.alpha, run.beta, run.eps0);

    try {
        run.aux.c4 = c4_bound(run.chi, run.xi, run.r, run.sigma);
    } catch (const DivergentTail&) {
        run.aux.c4 = 0.0;
        detail::require_or_note(false,
                                "weight lower bound unavailable (divergent tail)",
                                force, run);
    }
    run.aux.theta = theta_exponent(run.p, cfg.theorem_n);

    run.output_interval = cfg.interval.is_auto
                              ? (cfg.scheme.t_end > 0.0 ? cfg.scheme.t_end / 50.0 : 0.0)
                              : cfg.interval.value;
    const double linf0 = field_linf(run.initial.u);
    run.blowup_cap_abs = linf0 > 0.0
                             ? cfg.blowup_cap_rel * linf0
                             : std::numeric_limits<double>::infinity();
    return run;
}

} // namespace arcs
