#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "arcs/grid.hpp"
#include "arcs/stencil.hpp"

using Catch::Approx;

TEST_CASE("laplacian of a constant vanishes") {
    const arcs::Grid grid = arcs::Grid::make_2d(12, 9, 1.0, 2.0);
    arcs::Field f = grid.make_field();
    std::fill(f.begin(), f.end(), 4.25);
    const arcs::Field lap = arcs::laplacian_neumann(f, grid);
    for (double x : lap) CHECK(x == 0.0);
}

TEST_CASE("laplacian of x^2 is 2 in the interior") {
    const arcs::Grid grid = arcs::Grid::make_1d(32, 1.0);
    arcs::Field f = grid.make_field();
    for (int i = 0; i < 32; ++i) {
        const double x = grid.center(0, i);
        f[grid.index(i, 0)] = x * x;
    }
    const arcs::Field lap = arcs::laplacian_neumann(f, grid);
    for (int i = 1; i < 31; ++i)
        CHECK(lap[grid.index(i, 0)] == Approx(2.0).margin(1e-9));
}

TEST_CASE("cell-centered cosine is an exact discrete eigenvector") {
    const int n = 24;
    const arcs::Grid grid = arcs::Grid::make_1d(n, 1.0);
    const double h = grid.h(0);
    arcs::Field f = grid.make_field();
    for (int i = 0; i < n; ++i)
        f[grid.index(i, 0)] = std::cos(std::numbers::pi * grid.center(0, i));
    const arcs::Field lap = arcs::laplacian_neumann(f, grid);
    const double lambda = -2.0 * (1.0 - std::cos(std::numbers::pi * h)) / (h * h);
    for (int i = 0; i < n; ++i)
        CHECK(lap[grid.index(i, 0)] ==
              Approx(lambda * f[grid.index(i, 0)]).margin(1e-11 * std::abs(lambda)));
}

TEST_CASE("2D separable cosine mode") {
    const int nx = 16, ny = 12;
    const arcs::Grid grid = arcs::Grid::make_2d(nx, ny, 1.0, 1.5);
    arcs::Field f = grid.make_field();
    const double kx = std::numbers::pi / grid.length(0);
    const double ky = 2.0 * std::numbers::pi / grid.length(1);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            f[grid.index(i, j)] =
                std::cos(kx * grid.center(0, i)) * std::cos(ky * grid.center(1, j));
    const double hx = grid.h(0), hy = grid.h(1);
    const double lambda = -2.0 * (1.0 - std::cos(kx * hx)) / (hx * hx) -
                          2.0 * (1.0 - std::cos(ky * hy)) / (hy * hy);
    const arcs::Field lap = arcs::laplacian_neumann(f, grid);
    for (std::size_t c = 0; c < f.size(); ++c)
        CHECK(lap[c] == Approx(lambda * f[c]).margin(1e-10 * std::abs(lambda)));
}

TEST_CASE("no-flux laplacian conserves the cell sum") {
    const arcs::Grid grid = arcs::Grid::make_2d(20, 14, 1.0, 1.0);
    arcs::Field f = grid.make_field();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    for (double& x : f) x = dist(rng);
    const arcs::Field lap = arcs::laplacian_neumann(f, grid);
    double sum = 0.0, scale = 0.0;
    for (double x : lap) {
        sum += x;
        scale += std::abs(x);
    }
    CHECK(std::abs(sum) <= 1e-13 * std::max(scale, 1.0));
}

TEST_CASE("gradient magnitude of linear fields") {
    const int n = 16;
    const arcs::Grid grid = arcs::Grid::make_1d(n, 2.0);
    arcs::Field f = grid.make_field();
    const double a = 3.0;
    for (int i = 0; i < n; ++i) f[grid.index(i, 0)] = a * grid.center(0, i);
    const arcs::Field g = arcs::gradient_magnitude(f, grid);
    for (int i = 1; i < n - 1; ++i)
        CHECK(g[grid.index(i, 0)] == Approx(a).margin(1e-12));
    CHECK(g[grid.index(0, 0)] == Approx(a / 2.0).margin(1e-12));
    CHECK(g[grid.index(n - 1, 0)] == Approx(a / 2.0).margin(1e-12));

    const arcs::Grid g2 = arcs::Grid::make_2d(12, 12, 1.0, 1.0);
    arcs::Field f2 = g2.make_field();
    for (int j = 0; j < 12; ++j)
        for (int i = 0; i < 12; ++i)
            f2[g2.index(i, j)] = 3.0 * g2.center(0, i) + 4.0 * g2.center(1, j);
    const arcs::Field grad2 = arcs::gradient_magnitude(f2, g2);
    for (int j = 1; j < 11; ++j)
        for (int i = 1; i < 11; ++i)
            CHECK(grad2[g2.index(i, j)] == Approx(5.0).margin(1e-12));
}
