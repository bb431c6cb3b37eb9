#pragma once

/// @file linsolve.hpp
/// Matrix-free conjugate gradient for the Helmholtz-type operators
/// (a*I - b*Lap) arising from backward-Euler diffusion steps. The operator
/// is symmetric positive definite for a > 0, b >= 0. Single-threaded,
/// fixed-order reductions: results are bit-reproducible.

#include <cmath>
#include <cstddef>

#include "arcs/errors.hpp"
#include "arcs/stencil.hpp"

namespace arcs {

struct CgResult {
    int iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline void apply_helmholtz(const Field& x, const Grid& grid, double a, double b,
                            Field& scratch, Field& out) {
    laplacian_neumann(x, grid, scratch);
    for (std::size_t c = 0; c < x.size(); ++c) out[c] = a * x[c] - b * scratch[c];
}

inline double dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
    return s;
}

} // namespace detail

/// Solves (a*I - b*Lap) x = rhs with Neumann boundaries, starting from the
/// passed-in x as initial guess. Converges when the residual 2-norm falls
/// below tol * max(||rhs||, tiny). Throws LinearSolveDiverged after
/// 10 * total_cells iterations.
inline CgResult solve_helmholtz(Field& x, const Field& rhs, const Grid& grid,
                                double a, double b, double tol) {
    const std::size_t n = rhs.size();
    Field r(n), p(n), ap(n), scratch(n);
    detail::apply_helmholtz(x, grid, a, b, scratch, ap);
    for (std::size_t c = 0; c < n; ++c) r[c] = rhs[c] - ap[c];
    const double rhs_norm = std::sqrt(detail::dot(rhs, rhs));
    const double stop = tol * std::max(rhs_norm, 1e-300);
    double rr = detail::dot(r, r);
    CgResult res;
    res.residual = std::sqrt(rr);
    if (res.residual <= stop) return res;
    p = r;
    const int max_iters = static_cast<int>(10 * grid.total_cells());
    for (int it = 1; it <= max_iters; ++it) {
        detail::apply_helmholtz(p, grid, a, b, scratch, ap);
        const double pap = detail::dot(p, ap);
        const double alpha = rr / pap;
        for (std::size_t c = 0; c < n; ++c) x[c] += alpha * p[c];
        for (std::size_t c = 0; c < n; ++c) r[c] -= alpha * ap[c];
        const double rr_new = detail::dot(r, r);
        res.iterations = it;
        res.residual = std::sqrt(rr_new);
        if (res.residual <= stop) return res;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t c = 0; c < n; ++c) p[c] = r[c] + beta * p[c];
    }
    throw LinearSolveDiverged("conjugate gradient failed to reach tolerance");
}

/// Same solve for the pure diffusion operator (I - b*Lap), followed by a
/// constant shift so the cell sum of x matches the cell sum of rhs exactly.
/// The operator preserves sums (the Neumann Laplacian telescopes to zero),
/// so the shift only absorbs the linear-solve residual and keeps discrete
/// mass conservation at round-off level.
inline CgResult solve_diffusion_conservative(Field& x, const Field& rhs,
                                             const Grid& grid, double b, double tol) {
    CgResult res = solve_helmholtz(x, rhs, grid, 1.0, b, tol);
    const double defect = (field_sum(rhs) - field_sum(x)) / static_cast<double>(x.size());
    for (double& xi : x) xi += defect;
    return res;
}

} // namespace arcs
