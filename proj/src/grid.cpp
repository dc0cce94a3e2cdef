#include "wenc/grid.hpp"

#include <algorithm>
#include <cmath>

#include "wenc/threads.hpp"

namespace wenc {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

} // namespace

FaceField build_faces(const GridSpec& g, const MediumField& m) {
    FaceField f;
    f.nx = g.nx; f.ny = g.ny; f.nz = g.nz;
    f.gx.assign(static_cast<std::size_t>((g.nx + 1) * g.ny * g.nz), 0.0);
    f.gy.assign(static_cast<std::size_t>(g.nx * (g.ny + 1) * g.nz), 0.0);
    f.gz.assign(static_cast<std::size_t>(g.nx * g.ny * (g.nz + 1)), 0.0);

    // Cell coefficients are evaluated once per needed center, including ghost
    // centers one layer outside the box where the background continues.
    auto cell_gamma = [&](long i, long j, long k) { return gamma_at(m, g.center(i, j, k)); };

    for (long k = 0; k < g.nz; ++k)
        for (long j = 0; j < g.ny; ++j) {
            Diag3 left = cell_gamma(-1, j, k);
            for (long i = 0; i <= g.nx; ++i) {
                Diag3 right = cell_gamma(i, j, k); // i == nx is the ghost column
                f.gx[f.ix(i, j, k)] = harmonic(left.d[0], right.d[0]);
                left = right;
            }
        }
    for (long k = 0; k < g.nz; ++k)
        for (long i = 0; i < g.nx; ++i) {
            Diag3 below = cell_gamma(i, -1, k);
            for (long j = 0; j <= g.ny; ++j) {
                Diag3 above = cell_gamma(i, j, k);
                f.gy[f.iy(i, j, k)] = harmonic(below.d[1], above.d[1]);
                below = above;
            }
        }
    for (long j = 0; j < g.ny; ++j)
        for (long i = 0; i < g.nx; ++i) {
            Diag3 back = cell_gamma(i, j, -1);
            for (long k = 0; k <= g.nz; ++k) {
                Diag3 front = cell_gamma(i, j, k);
                f.gz[f.iz(i, j, k)] = harmonic(back.d[2], front.d[2]);
                back = front;
            }
        }
    return f;
}

namespace {

// Flux divergence at one cell; missing neighbors are zero.
inline double lap_cell(const GridSpec& g, const FaceField& f, const double* x,
                       long i, long j, long k, double inv_h2) {
    long c = g.index(i, j, k);
    double u = x[c];
    double ul = i > 0 ? x[c - 1] : 0.0;
    double ur = i + 1 < g.nx ? x[c + 1] : 0.0;
    double ud = j > 0 ? x[c - g.nx] : 0.0;
    double uu = j + 1 < g.ny ? x[c + g.nx] : 0.0;
    double ub = k > 0 ? x[c - g.nx * g.ny] : 0.0;
    double uf = k + 1 < g.nz ? x[c + g.nx * g.ny] : 0.0;
    double s = f.gx[f.ix(i + 1, j, k)] * (ur - u) - f.gx[f.ix(i, j, k)] * (u - ul)
             + f.gy[f.iy(i, j + 1, k)] * (uu - u) - f.gy[f.iy(i, j, k)] * (u - ud)
             + f.gz[f.iz(i, j, k + 1)] * (uf - u) - f.gz[f.iz(i, j, k)] * (u - ub);
    return s * inv_h2;
}

struct CellOffset {
    long i, j, k;
    double fx, fy, fz;
};

// Base cell and interpolation fractions for a point, with fractions snapped
// to zero when the point sits on a cell center up to roundoff, so aligned
// sampling is an exact read.
CellOffset locate(const GridSpec& g, const Point3& p) {
    double qx = (p.x - g.origin.x) / g.h - 0.5;
    double qy = (p.y - g.origin.y) / g.h - 0.5;
    double qz = (p.z - g.origin.z) / g.h - 0.5;
    CellOffset c;
    c.i = static_cast<long>(std::floor(qx));
    c.j = static_cast<long>(std::floor(qy));
    c.k = static_cast<long>(std::floor(qz));
    c.fx = qx - c.i;
    c.fy = qy - c.j;
    c.fz = qz - c.k;

    const double snap = 1e-9;
    if (c.fx < snap && c.i >= 0) c.fx = 0.0;
    if (c.fx > 1.0 - snap) { ++c.i; c.fx = 0.0; }
    if (c.fy < snap && c.j >= 0) c.fy = 0.0;
    if (c.fy > 1.0 - snap) { ++c.j; c.fy = 0.0; }
    if (c.fz < snap && c.k >= 0) c.fz = 0.0;
    if (c.fz > 1.0 - snap) { ++c.k; c.fz = 0.0; }

    if (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= g.nx || c.j >= g.ny || c.k >= g.nz)
        throw DomainError("sample point outside the grid");
    return c;
}

} // namespace

void apply_operator(const GridSpec& g, const FaceField& f, const std::vector<double>& x,
                    std::vector<double>& out, int threads) {
    out.resize(x.size());
    double inv_h2 = 1.0 / (g.h * g.h);
    const double* xp = x.data();
    double* op = out.data();
    parallel_slabs(g.nz, threads, [&](long k0, long k1) {
        for (long k = k0; k < k1; ++k)
            for (long j = 0; j < g.ny; ++j)
                for (long i = 0; i < g.nx; ++i)
                    op[g.index(i, j, k)] = lap_cell(g, f, xp, i, j, k, inv_h2);
    });
}

void apply_shifted(const GridSpec& g, const FaceField& f, double sigma,
                   const std::vector<double>& x, std::vector<double>& y, int threads) {
    y.resize(x.size());
    double inv_h2 = 1.0 / (g.h * g.h);
    const double* xp = x.data();
    double* yp = y.data();
    parallel_slabs(g.nz, threads, [&](long k0, long k1) {
        for (long k = k0; k < k1; ++k)
            for (long j = 0; j < g.ny; ++j)
                for (long i = 0; i < g.nx; ++i) {
                    long c = g.index(i, j, k);
                    yp[c] = sigma * xp[c] - lap_cell(g, f, xp, i, j, k, inv_h2);
                }
    });
}

double sample_field(const GridSpec& g, const std::vector<double>& u, const Point3& p) {
    CellOffset c = locate(g, p);
    long i = c.i, j = c.j, k = c.k;
    double fx = c.fx, fy = c.fy, fz = c.fz;
    long i1 = std::min(i + 1, g.nx - 1);
    long j1 = std::min(j + 1, g.ny - 1);
    long k1 = std::min(k + 1, g.nz - 1);

    auto val = [&](long a, long b, long cc) { return u[static_cast<std::size_t>(g.index(a, b, cc))]; };
    double c00 = val(i, j, k) * (1 - fx) + val(i1, j, k) * fx;
    double c10 = val(i, j1, k) * (1 - fx) + val(i1, j1, k) * fx;
    double c01 = val(i, j, k1) * (1 - fx) + val(i1, j, k1) * fx;
    double c11 = val(i, j1, k1) * (1 - fx) + val(i1, j1, k1) * fx;
    double c0 = c00 * (1 - fy) + c10 * fy;
    double c1 = c01 * (1 - fy) + c11 * fy;
    return c0 * (1 - fz) + c1 * fz;
}

Vec3 sample_gradient(const GridSpec& g, const std::vector<double>& u, const Point3& p) {
    CellOffset c = locate(g, p);
    long i1 = std::min(c.i + 1, g.nx - 1);
    long j1 = std::min(c.j + 1, g.ny - 1);
    long k1 = std::min(c.k + 1, g.nz - 1);

    // Centered difference of one component at a cell, one-sided at the walls.
    auto diff = [&](long a, long b, long cc, int axis) {
        long lo[3] = {a, b, cc}, hi[3] = {a, b, cc};
        long n[3] = {g.nx, g.ny, g.nz};
        if (lo[axis] > 0) --lo[axis];
        if (hi[axis] + 1 < n[axis]) ++hi[axis];
        double span = (hi[axis] - lo[axis]) * g.h;
        return (u[g.index(hi[0], hi[1], hi[2])] - u[g.index(lo[0], lo[1], lo[2])]) / span;
    };

    Vec3 out;
    for (int axis = 0; axis < 3; ++axis) {
        double c00 = diff(c.i, c.j, c.k, axis) * (1 - c.fx) + diff(i1, c.j, c.k, axis) * c.fx;
        double c10 = diff(c.i, j1, c.k, axis) * (1 - c.fx) + diff(i1, j1, c.k, axis) * c.fx;
        double c01 = diff(c.i, c.j, k1, axis) * (1 - c.fx) + diff(i1, c.j, k1, axis) * c.fx;
        double c11 = diff(c.i, j1, k1, axis) * (1 - c.fx) + diff(i1, j1, k1, axis) * c.fx;
        double c0 = c00 * (1 - c.fy) + c10 * c.fy;
        double c1 = c01 * (1 - c.fy) + c11 * c.fy;
        out[axis] = c0 * (1 - c.fz) + c1 * c.fz;
    }
    return out;
}

double boundary_clearance(const GridSpec& g, const Box& b) {
    Point3 hi = g.max_corner();
    double c = b.lo.x - g.origin.x;
    c = std::min(c, b.lo.y - g.origin.y);
    c = std::min(c, b.lo.z - g.origin.z);
    c = std::min(c, hi.x - b.hi.x);
    c = std::min(c, hi.y - b.hi.y);
    c = std::min(c, hi.z - b.hi.z);
    return c;
}

} // namespace wenc
