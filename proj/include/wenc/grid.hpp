#pragma once

#include <cstdint>
#include <vector>

#include "wenc/geometry.hpp"
#include "wenc/medium.hpp"

namespace wenc {

// Uniform Cartesian cell grid.  Cell (i,j,k) is centered at
// origin + h * (i + 1/2, j + 1/2, k + 1/2); fields live at cell centers and
// vanish outside the box (homogeneous Dirichlet closure).
struct GridSpec {
    Point3 origin;
    long nx = 0, ny = 0, nz = 0;
    double h = 0.0;
    double dt = 0.0;
    long steps = 0;

    long cells() const { return nx * ny * nz; }
    long index(long i, long j, long k) const { return (k * ny + j) * nx + i; }
    Point3 center(long i, long j, long k) const {
        return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h, origin.z + (k + 0.5) * h};
    }
    Point3 max_corner() const { return {origin.x + nx * h, origin.y + ny * h, origin.z + nz * h}; }
};

// Face-centered coefficient arrays for the flux form of div(gamma grad u).
// gx(i,j,k) sits between cells (i-1,j,k) and (i,j,k) for i in [0, nx]; the
// outermost faces carry the background value continued past the boundary.
struct FaceField {
    std::vector<double> gx, gy, gz;
    long nx = 0, ny = 0, nz = 0;

    long ix(long i, long j, long k) const { return (k * ny + j) * (nx + 1) + i; }
    long iy(long i, long j, long k) const { return (k * (ny + 1) + j) * nx + i; }
    long iz(long i, long j, long k) const { return (k * ny + j) * nx + i; }
};

// Harmonic face averages of the cell-centered coefficient; direction-resolved
// for diagonal anisotropy.
FaceField build_faces(const GridSpec& g, const MediumField& m);

// out = div(gamma grad x) in flux form, Dirichlet closure.
void apply_operator(const GridSpec& g, const FaceField& f, const std::vector<double>& x,
                    std::vector<double>& out, int threads);

// y = sigma * x - div(gamma grad x); fused loop used by the elliptic solver.
void apply_shifted(const GridSpec& g, const FaceField& f, double sigma,
                   const std::vector<double>& x, std::vector<double>& y, int threads);

// Value of a cell-centered field at an arbitrary interior point.  Nodes that
// coincide with cell centers are read off directly, so aligned sampling is
// exact; elsewhere trilinear interpolation is used.
double sample_field(const GridSpec& g, const std::vector<double>& u, const Point3& p);

// Centered-difference gradient of a cell-centered field, interpolated with
// the same alignment rules as sample_field (one-sided at the outer walls).
Vec3 sample_gradient(const GridSpec& g, const std::vector<double>& u, const Point3& p);

// Smallest distance from the box spanned by the region to the grid boundary.
double boundary_clearance(const GridSpec& g, const Box& b);

} // namespace wenc
