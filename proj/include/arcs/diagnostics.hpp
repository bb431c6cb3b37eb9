#pragma once

/// @file diagnostics.hpp
/// Every theoretically controlled functional along a run: mass and extrema,
/// the weight field f = exp(-r * int chi - sigma * int xi), the weighted
/// energy int u^p f, the gradient ratio fields (x, y, z), the quadratic form
/// Q with certified coefficients, floor/weight bound checks, blow-up
/// detection, and the energy plateau monitor.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "arcs/certifier.hpp"
#include "arcs/grid.hpp"
#include "arcs/sensitivity.hpp"
#include "arcs/stencil.hpp"

namespace arcs {

/// One output-time row of the run series. Column order is the series.csv
/// schema; serialization must round-trip all doubles losslessly.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass_u = 0.0;
    double linf_u = 0.0;
    double linf_v = 0.0;
    double linf_w = 0.0;
    double min_v = 0.0;
    double min_w = 0.0;
    double grad_linf_v = 0.0;
    double grad_linf_w = 0.0;
    double energy_p = 0.0;
    double f_min = 1.0;
    double f_max = 1.0;
    double Q_max = 0.0;
    long excluded_cells = 0;
    bool blowup = false;
};

/// Pointwise weight f = exp(-r * int_{eta1}^{v} chi - sigma * int_{eta2}^{w} xi),
/// exact via closed-form antiderivatives for the power family. Values of v, w
/// below the floors contribute zero-length integrals (clamped, counted).
inline Field weight_field(const SystemState& state, const SensitivitySpec& chi,
                          const SensitivitySpec& xi, double r, double sigma,
                          std::uint64_t* clamp_count = nullptr) {
    Field f(state.u.size());
    for (std::size_t c = 0; c < f.size(); ++c) {
        if (clamp_count != nullptr &&
            (state.v[c] < chi.eta_floor() || state.w[c] < xi.eta_floor()))
            ++*clamp_count;
        const double ev = r > 0.0 ? r * chi.partial_integral(state.v[c]) : 0.0;
        const double ew = sigma > 0.0 ? sigma * xi.partial_integral(state.w[c]) : 0.0;
        f[c] = std::exp(-(ev + ew));
    }
    return f;
}

/// Discrete weighted energy: sum of u^p * f over cells times cell volume.
inline double weighted_energy(const SystemState& state, double p,
                              const Field& f_field, const Grid& grid) {
    double s = 0.0;
    for (std::size_t c = 0; c < state.u.size(); ++c)
        s += std::pow(state.u[c], p) * f_field[c];
    return s * grid.cell_volume();
}

struct XyzFields {
    Field x; ///< |grad u| / u, zero on masked cells
    Field y; ///< chi(v) |grad v|
    Field z; ///< xi(w) |grad w|
    std::vector<char> mask; ///< 1 = included, 0 = u below floor
    long excluded = 0;
};

/// Gradient ratio fields from central differences. Cells with
/// u < u_floor * max(u) are masked out of x (and later out of Q).
inline XyzFields xyz_fields(const SystemState& state, const SensitivitySpec& chi,
                            const SensitivitySpec& xi, const Grid& grid,
                            double u_floor) {
    XyzFields out;
    const Field gu = gradient_magnitude(state.u, grid);
    const Field gv = gradient_magnitude(state.v, grid);
    const Field gw = gradient_magnitude(state.w, grid);
    const double umax = field_max(state.u);
    const double cut = u_floor * umax;
    const std::size_t n = state.u.size();
    out.x.assign(n, 0.0);
    out.y.resize(n);
    out.z.resize(n);
    out.mask.assign(n, 1);
    for (std::size_t c = 0; c < n; ++c) {
        out.y[c] = chi.value_clamped(state.v[c], nullptr) * gv[c];
        out.z[c] = xi.value_clamped(state.w[c], nullptr) * gw[c];
        if (umax <= 0.0 || state.u[c] < cut) {
            out.mask[c] = 0;
            ++out.excluded;
            continue;
        }
        out.x[c] = gu[c] / state.u[c];
    }
    return out;
}

/// Max over included cells of Q(x, y, z) = a1 x^2 + a2 xy + a3 xz + a4 y^2 +
/// a5 yz + a6 z^2. Zero when every cell is masked (the form's value at the
/// origin).
inline double quadratic_form_max(const std::array<double, 6>& a,
                                 const XyzFields& xyz) {
    double qmax = 0.0;
    bool any = false;
    for (std::size_t c = 0; c < xyz.x.size(); ++c) {
        if (!xyz.mask[c]) continue;
        const double x = xyz.x[c], y = xyz.y[c], z = xyz.z[c];
        const double q = a[0] * x * x + a[1] * x * y + a[2] * x * z +
                         a[3] * y * y + a[4] * y * z + a[5] * z * z;
        if (!any || q > qmax) qmax = q;
        any = true;
    }
    return any ? qmax : 0.0;
}

/// Scale for judging Q_max against round-off: max |a_i| times the largest
/// included squared gradient magnitude (at least 1).
inline double quadratic_form_scale(const std::array<double, 6>& a,
                                   const XyzFields& xyz) {
    double amax = 0.0;
    for (double ai : a) amax = std::max(amax, std::abs(ai));
    double m2 = 1.0;
    for (std::size_t c = 0; c < xyz.x.size(); ++c) {
        if (!xyz.mask[c]) continue;
        const double s2 = xyz.x[c] * xyz.x[c] + xyz.y[c] * xyz.y[c] + xyz.z[c] * xyz.z[c];
        if (s2 > m2) m2 = s2;
    }
    return amax * m2;
}

struct Violation {
    double t = 0.0;
    std::string what;
};

/// Flags records that break the certified floors: min_v below eta1, min_w
/// below eta2 (each with the grid slack), f_min below c4 (same slack scaled
/// to c4), f_max above 1 + 1e-12. grid_tol < 0 selects the default slack of
/// 0.05 * the respective floor.
inline std::vector<Violation> bounds_check(const DiagnosticsRecord& rec,
                                           const AuxConstants& aux,
                                           double grid_tol = -1.0) {
    std::vector<Violation> out;
    const double tol_v = grid_tol >= 0.0 ? grid_tol : 0.05 * aux.eta1;
    const double tol_w = grid_tol >= 0.0 ? grid_tol : 0.05 * aux.eta2;
    const double tol_f = grid_tol >= 0.0 ? grid_tol : 0.05 * aux.c4;
    if (rec.min_v < aux.eta1 - tol_v)
        out.push_back({rec.t, "min_v below eta1 floor"});
    if (rec.min_w < aux.eta2 - tol_w)
        out.push_back({rec.t, "min_w below eta2 floor"});
    if (rec.f_min < aux.c4 - tol_f)
        out.push_back({rec.t, "f_min below c4 bound"});
    if (rec.f_max > 1.0 + 1e-12)
        out.push_back({rec.t, "f_max above 1"});
    return out;
}

/// True when the density exceeds the cap (strictly) or any field holds a
/// non-finite value. The cap realizes the finite-time blow-up criterion as a
/// runtime-decidable check.
inline bool blowup_check(const SystemState& state, double cap) {
    double umax = 0.0;
    for (double x : state.u) {
        if (!std::isfinite(x)) return true;
        if (x > umax) umax = x;
    }
    if (umax > cap) return true;
    for (const Field* f : {&state.v, &state.w})
        for (double x : *f)
            if (!std::isfinite(x)) return true;
    return false;
}

struct MonitorReport {
    double max_energy = 0.0;
    double final_over_max = 0.0;
    bool plateau = false;
    double theta = 0.0; ///< echoed interpolation exponent for the run
};

/// Reports the energy supremum, the final/max ratio, and whether the last
/// quarter of the samples varies by less than 1% relative (the desk-scale
/// reading of "bounded uniformly in time"). No attempt is made to fit the
/// differential inequality's constants.
inline MonitorReport energy_monitor(const std::vector<std::pair<double, double>>& series,
                                    double theta) {
    if (series.size() < 3)
        throw InsufficientSamples("energy monitor needs at least 3 samples");
    MonitorReport rep;
    rep.theta = theta;
    double mx = series.front().second;
    for (const auto& [t, e] : series) mx = std::max(mx, e);
    rep.max_energy = mx;
    rep.final_over_max = mx != 0.0 ? series.back().second / mx : 0.0;
    const std::size_t start = series.size() - std::max<std::size_t>(1, series.size() / 4);
    double lo = series[start].second, hi = series[start].second;
    for (std::size_t i = start; i < series.size(); ++i) {
        lo = std::min(lo, series[i].second);
        hi = std::max(hi, series[i].second);
    }
    rep.plateau = (hi - lo) <= 0.01 * std::max(std::abs(hi), 1e-300);
    return rep;
}

/// Assembles the full record for one state snapshot.
inline DiagnosticsRecord
make_record(const SystemState& state, const Grid& grid, const SensitivitySpec& chi,
            const SensitivitySpec& xi, double p, double r, double sigma,
            const std::array<double, 6>& form_coeffs, double u_floor, double cap,
            std::uint64_t* clamp_count = nullptr, double* q_scale_out = nullptr) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mass_u = field_mass(state.u, grid);
    rec.linf_u = field_linf(state.u);
    rec.linf_v = field_linf(state.v);
    rec.linf_w = field_linf(state.w);
    rec.min_v = field_min(state.v);
    rec.min_w = field_min(state.w);
    rec.grad_linf_v = field_max(gradient_magnitude(state.v, grid));
    rec.grad_linf_w = field_max(gradient_magnitude(state.w, grid));
    const Field f = weight_field(state, chi, xi, r, sigma, clamp_count);
    rec.energy_p = weighted_energy(state, p, f, grid);
    rec.f_min = field_min(f);
    rec.f_max = field_max(f);
    const XyzFields xyz = xyz_fields(state, chi, xi, grid, u_floor);
    rec.Q_max = quadratic_form_max(form_coeffs, xyz);
    rec.excluded_cells = xyz.excluded;
    if (q_scale_out) *q_scale_out = quadratic_form_scale(form_coeffs, xyz);
    rec.blowup = blowup_check(state, cap);
    return rec;
}

} // namespace arcs
