#pragma once

/// @file convergence.hpp
/// Validates the implicit signal update against the exact decaying
/// cosine mode: with u = 0 the v equation has the closed-form solution
/// v(x, t) = exp(-(1 + pi^2 / L^2) t) cos(pi x / L), which satisfies the
/// no-flux boundary exactly. Stepping with dt = h^2 makes the first-order
/// temporal error track the second-order spatial one, so the observed
/// order between successive grid doublings should sit near 2.

#include <cmath>
#include <numbers>
#include <vector>

#include "arcs/grid.hpp"
#include "arcs/sensitivity.hpp"
#include "arcs/solver.hpp"

namespace arcs {

struct ConvergenceRow {
    int cells = 0;
    double h = 0.0;
    double dt = 0.0;
    double error = 0.0; ///< max-norm error at cell centers at t_end
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::vector<double> orders; ///< between consecutive rows
    bool pass = false;          ///< all orders within [1.7, 2.3]
};

inline ConvergenceReport run_convergence(std::vector<int> cells = {32, 64, 128},
                                         double t_end = 0.1,
                                         double dt_fixed = -1.0) {
    if (cells.size() < 2)
        throw ValidationError("convergence test needs at least 2 resolutions");
    ConvergenceReport report;
    const double length = 1.0;
    const double rate = 1.0 + std::numbers::pi * std::numbers::pi / (length * length);
    const SensitivitySpec unit = SensitivitySpec::constant(1.0);

    for (const int n : cells) {
        const Grid grid = Grid::make_1d(n, length);
        SystemState state(grid);
        for (int i = 0; i < n; ++i)
            state.v[grid.index(i, 0)] =
                std::cos(std::numbers::pi * grid.center(0, i) / length);
        SchemeConfig scheme;
        scheme.t_end = t_end;
        scheme.dt = dt_fixed > 0.0 ? dt_fixed : grid.h(0) * grid.h(0);
        scheme.linear_tol = 1e-13;

        const double t_eps = 1e-12 * std::max(t_end, 1.0);
        while (state.t < t_end - t_eps) {
            const double dt = std::min(scheme.dt, t_end - state.t);
            step(state, grid, unit, unit, scheme, dt);
        }

        ConvergenceRow row;
        row.cells = n;
        row.h = grid.h(0);
        row.dt = scheme.dt;
        const double amp = std::exp(-rate * state.t);
        for (int i = 0; i < n; ++i) {
            const double exact =
                amp * std::cos(std::numbers::pi * grid.center(0, i) / length);
            row.error = std::max(row.error,
                                 std::abs(state.v[grid.index(i, 0)] - exact));
        }
        report.rows.push_back(row);
    }

    report.pass = true;
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const auto& a = report.rows[i];
        const auto& b = report.rows[i + 1];
        const double order = std::log(a.error / b.error) /
                             std::log(static_cast<double>(b.cells) / a.cells);
        report.orders.push_back(order);
        if (!(order >= 1.7 && order <= 2.3)) report.pass = false;
    }
    return report;
}

} // namespace arcs
