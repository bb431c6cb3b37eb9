#pragma once

/// @file solver.hpp
/// Time integration of the three-field system
///   u_t = Lap u - div(u chi(v) grad v) + div(u xi(w) grad w)
///   v_t = Lap v - v + u
///   w_t = Lap w - w + u
/// with zero-flux boundaries: conservative upwind chemotaxis fluxes, IMEX
/// first-order splitting, backward-Euler diffusion via conjugate gradient.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "arcs/grid.hpp"
#include "arcs/linsolve.hpp"
#include "arcs/sensitivity.hpp"
#include "arcs/stencil.hpp"

namespace arcs {

struct SchemeConfig {
    double dt = -1.0;          ///< fixed step when > 0, otherwise auto
    double dt_max = 0.05;      ///< cap for auto mode
    double cfl = 0.5;          ///< advective safety factor in (0, 1]
    bool implicit_diffusion = true;
    double linear_tol = 1e-10; ///< residual tolerance of the implicit solves
    double t_end = 1.0;
    double u_floor = 1e-12;    ///< relative mask threshold for gradient ratios

    bool auto_dt() const { return dt <= 0.0; }
};

struct StepReport {
    double dt_used = 0.0;
    double mass_drift = 0.0;           ///< relative change of the u integral
    double positivity_violation = 0.0; ///< worst negative u clamped (0 if none)
    int linear_iters = 0;              ///< summed over the step's solves
    std::uint64_t clamp_warnings = 0;  ///< sensitivity evaluations below floor
};

/// sign * div(u * sens(s) * grad s) in conservative flux form. Face fluxes
/// use the arithmetic face average of s (clamped to the sensitivity floor,
/// counted) and the donor-cell u picked by the sign of the face transport
/// velocity -sign * sens * grad s. Boundary faces carry zero flux, so the
/// cell-volume-weighted sum of the output telescopes to zero.
inline Field chemo_flux_div(const Field& u, const Field& s,
                            const SensitivitySpec& sens, const Grid& grid,
                            double sign, std::uint64_t* clamp_count = nullptr) {
    const int nx = grid.cells(0), ny = grid.cells(1);
    Field out(u.size(), 0.0);
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const double h = grid.h(axis);
        const int stride = axis == 0 ? 1 : nx;
        const int n_along = axis == 0 ? nx : ny;
        const int n_across = axis == 0 ? ny : nx;
        for (int jj = 0; jj < n_across; ++jj) {
            const std::size_t row0 =
                axis == 0 ? grid.index(0, jj) : grid.index(jj, 0);
            for (int ii = 0; ii + 1 < n_along; ++ii) {
                const std::size_t cl = row0 + static_cast<std::size_t>(ii) * stride;
                const std::size_t cr = cl + stride;
                const double grad = (s[cr] - s[cl]) / h;
                const double sbar = 0.5 * (s[cl] + s[cr]);
                const double coeff = sens.value_clamped(sbar, clamp_count);
                const double vel = -sign * coeff * grad;
                const double donor = vel >= 0.0 ? u[cl] : u[cr];
                const double flux = donor * vel;
                out[cl] -= flux / h;
                out[cr] += flux / h;
            }
        }
    }
    return out;
}

/// Advective stability limit: min over axes of cfl * h / vmax with vmax the
/// largest face speed |chi(vbar) dv/dn| + |xi(wbar) dw/dn| on that axis,
/// capped by dt_max; explicit diffusion adds dt <= 1 / (2 * sum_a h_a^-2)
/// (equal to h^2 / (2 dim) on isotropic grids).
inline double dt_stable(const SystemState& state, const Grid& grid,
                        const SensitivitySpec& chi, const SensitivitySpec& xi,
                        const SchemeConfig& scheme) {
    const int nx = grid.cells(0), ny = grid.cells(1);
    double dt = scheme.dt_max;
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const double h = grid.h(axis);
        const int stride = axis == 0 ? 1 : nx;
        const int n_along = axis == 0 ? nx : ny;
        const int n_across = axis == 0 ? ny : nx;
        double vmax = 0.0;
        for (int jj = 0; jj < n_across; ++jj) {
            const std::size_t row0 =
                axis == 0 ? grid.index(0, jj) : grid.index(jj, 0);
            for (int ii = 0; ii + 1 < n_along; ++ii) {
                const std::size_t cl = row0 + static_cast<std::size_t>(ii) * stride;
                const std::size_t cr = cl + stride;
                const double gv = std::abs(state.v[cr] - state.v[cl]) / h;
                const double gw = std::abs(state.w[cr] - state.w[cl]) / h;
                const double cv = chi.value_clamped(0.5 * (state.v[cl] + state.v[cr]), nullptr);
                const double cw = xi.value_clamped(0.5 * (state.w[cl] + state.w[cr]), nullptr);
                vmax = std::max(vmax, cv * gv + cw * gw);
            }
        }
        if (vmax > 0.0) dt = std::min(dt, scheme.cfl * h / vmax);
    }
    if (!scheme.implicit_diffusion) {
        double inv = 0.0;
        for (int axis = 0; axis < grid.dim(); ++axis)
            inv += 1.0 / (grid.h(axis) * grid.h(axis));
        dt = std::min(dt, 1.0 / (2.0 * inv));
    }
    return dt;
}

/// One IMEX step of size dt (callers take dt from dt_stable in auto mode):
/// (i) explicit upwind chemotaxis on u, (ii) backward-Euler diffusion of u
/// with a sum-preserving correction, (iii) v and w with diffusion and decay
/// implicit and the source +u explicit (the freshly updated u). u is clamped
/// at zero afterwards; the worst clamped value is reported and mass drift is
/// measured before the clamp.
inline StepReport step(SystemState& state, const Grid& grid,
                       const SensitivitySpec& chi, const SensitivitySpec& xi,
                       const SchemeConfig& scheme, double dt) {
    StepReport rep;
    rep.dt_used = dt;
    const double mass_before = field_sum(state.u);

    Field adv = chemo_flux_div(state.u, state.v, chi, grid, -1.0, &rep.clamp_warnings);
    const Field rep_term =
        chemo_flux_div(state.u, state.w, xi, grid, +1.0, &rep.clamp_warnings);
    for (std::size_t c = 0; c < adv.size(); ++c)
        state.u[c] += dt * (adv[c] + rep_term[c]);

    if (scheme.implicit_diffusion) {
        Field rhs = state.u;
        const CgResult cg =
            solve_diffusion_conservative(state.u, rhs, grid, dt, scheme.linear_tol);
        rep.linear_iters += cg.iterations;
    } else {
        laplacian_neumann(state.u, grid, adv);
        for (std::size_t c = 0; c < adv.size(); ++c) state.u[c] += dt * adv[c];
    }

    const double mass_after = field_sum(state.u);
    rep.mass_drift = (mass_after - mass_before) /
                     std::max(std::abs(mass_before), 1e-300);
    double worst = 0.0;
    for (double& uc : state.u) {
        if (uc < worst) worst = uc;
        if (uc < 0.0) uc = 0.0;
    }
    rep.positivity_violation = worst;

    for (Field* z : {&state.v, &state.w}) {
        Field rhs(z->size());
        for (std::size_t c = 0; c < rhs.size(); ++c)
            rhs[c] = (*z)[c] + dt * state.u[c];
        if (scheme.implicit_diffusion) {
            const CgResult cg =
                solve_helmholtz(*z, rhs, grid, 1.0 + dt, dt, scheme.linear_tol);
            rep.linear_iters += cg.iterations;
        } else {
            Field lap = laplacian_neumann(*z, grid);
            for (std::size_t c = 0; c < rhs.size(); ++c)
                (*z)[c] += dt * (lap[c] - (*z)[c] + state.u[c]);
        }
    }

    state.t += dt;
    return rep;
}

enum class RunStatus { completed, suspected_blowup };

struct RunResult {
    RunStatus status = RunStatus::completed;
    double t_final = 0.0;
    long steps = 0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double worst_relative_negativity = 0.0; ///< min over steps of min_u / max(1, max_u)
    double max_step_mass_drift = 0.0;       ///< max |per-step relative drift|
    long total_linear_iters = 0;
    std::uint64_t clamp_warnings = 0;
};

/// Advances the state from t to t_end. The observer runs on the initial
/// state, at every crossing of the output interval (steps are shortened to
/// land exactly on output times and on t_end), and on the final state. The
/// blow-up detector (see diagnostics) is supplied as a callback checked
/// after every step; when it fires the run stops with suspected_blowup
/// after one final observer call.
template <class Observer, class BlowupCheck>
RunResult run(SystemState& state, const Grid& grid, const SensitivitySpec& chi,
              const SensitivitySpec& xi, const SchemeConfig& scheme,
              double output_interval, Observer&& observe, BlowupCheck&& blown) {
    RunResult result;
    result.mass_initial = field_mass(state.u, grid);
    observe(state, false);
    if (scheme.t_end <= 0.0) {
        result.t_final = state.t;
        result.mass_final = result.mass_initial;
        observe(state, true);
        return result;
    }
    double next_output = output_interval > 0.0 ? output_interval : scheme.t_end;
    const double t_eps = 1e-12 * std::max(scheme.t_end, 1.0);
    while (state.t < scheme.t_end - t_eps) {
        double dt = scheme.auto_dt() ? dt_stable(state, grid, chi, xi, scheme)
                                     : scheme.dt;
        dt = std::min(dt, scheme.t_end - state.t);
        if (output_interval > 0.0) dt = std::min(dt, next_output - state.t);
        const StepReport rep = step(state, grid, chi, xi, scheme, dt);
        ++result.steps;
        result.total_linear_iters += rep.linear_iters;
        result.clamp_warnings += rep.clamp_warnings;
        result.max_step_mass_drift =
            std::max(result.max_step_mass_drift, std::abs(rep.mass_drift));
        const double umax = field_max(state.u);
        const double rel_neg = rep.positivity_violation / std::max(1.0, umax);
        result.worst_relative_negativity =
            std::min(result.worst_relative_negativity, rel_neg);
        if (blown(state)) {
            result.status = RunStatus::suspected_blowup;
            break;
        }
        if (output_interval > 0.0 && state.t >= next_output - t_eps &&
            state.t < scheme.t_end - t_eps) {
            observe(state, false);
            while (next_output <= state.t + t_eps) next_output += output_interval;
        }
    }
    result.t_final = state.t;
    result.mass_final = field_mass(state.u, grid);
    observe(state, true);
    return result;
}

} // namespace arcs
