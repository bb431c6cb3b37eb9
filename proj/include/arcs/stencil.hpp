#pragma once

/// @file stencil.hpp
/// Second-order Neumann stencils on the cell-centered grid: the 3/5-point
/// Laplacian with mirror ghost cells and central-difference gradient
/// magnitudes. Mirror ghosts (ghost = adjacent interior value) make the
/// discrete normal derivative vanish at every boundary face.

#include "arcs/grid.hpp"

namespace arcs {

inline void laplacian_neumann(const Field& in, const Grid& grid, Field& out) {
    const int nx = grid.cells(0), ny = grid.cells(1);
    const double ix2 = 1.0 / (grid.h(0) * grid.h(0));
    const double iy2 = grid.dim() == 2 ? 1.0 / (grid.h(1) * grid.h(1)) : 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t c = grid.index(i, j);
            const double uc = in[c];
            const double ul = i > 0 ? in[c - 1] : uc;
            const double ur = i + 1 < nx ? in[c + 1] : uc;
            double lap = (ul - 2.0 * uc + ur) * ix2;
            if (grid.dim() == 2) {
                const double ud = j > 0 ? in[c - nx] : uc;
                const double uu = j + 1 < ny ? in[c + nx] : uc;
                lap += (ud - 2.0 * uc + uu) * iy2;
            }
            out[c] = lap;
        }
    }
}

inline Field laplacian_neumann(const Field& in, const Grid& grid) {
    Field out(in.size());
    laplacian_neumann(in, grid, out);
    return out;
}

/// Central-difference gradient magnitude at cell centers. With mirror ghosts
/// the boundary formula degenerates to the half one-sided difference.
inline Field gradient_magnitude(const Field& in, const Grid& grid) {
    const int nx = grid.cells(0), ny = grid.cells(1);
    Field out(in.size());
    const double i2hx = 1.0 / (2.0 * grid.h(0));
    const double i2hy = grid.dim() == 2 ? 1.0 / (2.0 * grid.h(1)) : 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t c = grid.index(i, j);
            const double ul = i > 0 ? in[c - 1] : in[c];
            const double ur = i + 1 < nx ? in[c + 1] : in[c];
            double gx = (ur - ul) * i2hx;
            double g2 = gx * gx;
            if (grid.dim() == 2) {
                const double ud = j > 0 ? in[c - nx] : in[c];
                const double uu = j + 1 < ny ? in[c + nx] : in[c];
                const double gy = (uu - ud) * i2hy;
                g2 += gy * gy;
            }
            out[c] = std::sqrt(g2);
        }
    }
    return out;
}

} // namespace arcs
