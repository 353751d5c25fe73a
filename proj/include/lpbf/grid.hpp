#pragma once

#include <cstddef>
#include <vector>

namespace lpbf {

/// Uniform structured grid in layer-thickness units.
///
/// x runs along the scan from 0, y is centred on the scan line, and z is the
/// depth below the top surface (k = 0 is the surface layer). Cell storage is
/// x-fastest: index = (k * ny + j) * nx + i.
struct Grid {
    int nx = 0, ny = 0, nz = 0;
    double hx = 1.0, hy = 1.0, hz = 1.0;

    /// Cells of size `spacing` covering at least `lx * ly * lz`.
    static Grid from_extents(double lx, double ly, double lz, double spacing);

    std::size_t cells() const { return std::size_t(nx) * ny * nz; }
    std::size_t idx(int i, int j, int k) const { return (std::size_t(k) * ny + j) * nx + i; }

    double x_center(int i) const { return (i + 0.5) * hx; }
    double y_center(int j) const { return (j + 0.5) * hy - 0.5 * ny * hy; }
    double z_center(int k) const { return (k + 0.5) * hz; }
    double x_face(int i) const { return i * hx; }
    double y_face(int j) const { return j * hy - 0.5 * ny * hy; }
    double z_face(int k) const { return k * hz; }

    double length() const { return nx * hx; }
    double width() const { return ny * hy; }
    double depth() const { return nz * hz; }
    double cell_volume() const { return hx * hy * hz; }

    // Staggered (MAC) face arrays: u on x-faces, v on y-faces, w on z-faces.
    std::size_t u_size() const { return std::size_t(nx + 1) * ny * nz; }
    std::size_t v_size() const { return std::size_t(nx) * (ny + 1) * nz; }
    std::size_t w_size() const { return std::size_t(nx) * ny * (nz + 1); }
    std::size_t u_idx(int i, int j, int k) const { return (std::size_t(k) * ny + j) * (nx + 1) + i; }
    std::size_t v_idx(int i, int j, int k) const { return (std::size_t(k) * (ny + 1) + j) * nx + i; }
    std::size_t w_idx(int i, int j, int k) const { return (std::size_t(k) * ny + j) * nx + i; }

    bool operator==(const Grid&) const = default;
};

using Field = std::vector<double>;

}  // namespace lpbf
