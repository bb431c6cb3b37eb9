#pragma once

/// @file grid.hpp
/// Cell-centered structured grid (1D/2D) and the three-field system state.

#include <array>
#include <cstddef>
#include <vector>

#include "arcs/errors.hpp"

namespace arcs {

using Field = std::vector<double>;

/// Uniform cell-centered grid on a box. Cell i along an axis has its center
/// at (i + 1/2) * h. Boundary handling everywhere is mirror ghost cells
/// (ghost value = adjacent interior value), realizing zero normal flux.
class Grid {
  public:
    Grid(int dim, std::array<double, 2> lengths, std::array<int, 2> cells)
        : dim_(dim), lengths_(lengths), cells_(cells) {
        if (dim != 1 && dim != 2)
            throw ValidationError("grid dim must be 1 or 2");
        if (dim == 1) {
            lengths_[1] = 1.0;
            cells_[1] = 1;
        }
        for (int a = 0; a < dim; ++a) {
            if (cells_[a] < 4)
                throw ValidationError("grid needs at least 4 cells per axis");
            if (!(lengths_[a] > 0.0))
                throw ValidationError("grid lengths must be positive");
            h_[a] = lengths_[a] / cells_[a];
        }
        if (dim == 1) h_[1] = 1.0;
    }

    static Grid make_1d(int cells, double length) {
        return Grid(1, {length, 1.0}, {cells, 1});
    }
    static Grid make_2d(int nx, int ny, double lx, double ly) {
        return Grid(2, {lx, ly}, {nx, ny});
    }

    int dim() const { return dim_; }
    double length(int axis) const { return lengths_[axis]; }
    int cells(int axis) const { return cells_[axis]; }
    double h(int axis) const { return h_[axis]; }

    std::size_t total_cells() const {
        return static_cast<std::size_t>(cells_[0]) * cells_[1];
    }
    double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }

    /// Flat index; x runs fastest.
    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * cells_[0] + i;
    }
    double center(int axis, int i) const { return (i + 0.5) * h_[axis]; }

    Field make_field(double fill = 0.0) const { return Field(total_cells(), fill); }

  private:
    int dim_;
    std::array<double, 2> lengths_;
    std::array<int, 2> cells_;
    std::array<double, 2> h_{};
};

/// Cell density u, attractant v, repellent w at time t.
struct SystemState {
    double t = 0.0;
    Field u, v, w;

    SystemState() = default;
    explicit SystemState(const Grid& grid)
        : u(grid.make_field()), v(grid.make_field()), w(grid.make_field()) {}

    bool shape_matches(const Grid& grid) const {
        const auto n = grid.total_cells();
        return u.size() == n && v.size() == n && w.size() == n;
    }
};

inline double field_sum(const Field& f) {
    double s = 0.0;
    for (double x : f) s += x;
    return s;
}

inline double field_max(const Field& f) {
    double m = f.empty() ? 0.0 : f[0];
    for (double x : f)
        if (x > m) m = x;
    return m;
}

inline double field_min(const Field& f) {
    double m = f.empty() ? 0.0 : f[0];
    for (double x : f)
        if (x < m) m = x;
    return m;
}

inline double field_linf(const Field& f) {
    double m = 0.0;
    for (double x : f) {
        const double a = x < 0 ? -x : x;
        if (a > m) m = a;
    }
    return m;
}

/// Discrete integral: cell-volume-weighted sum.
inline double field_mass(const Field& f, const Grid& grid) {
    return field_sum(f) * grid.cell_volume();
}

} // namespace arcs
