#include "wenc/forward.hpp"

#include <algorithm>
#include <cmath>

#include "wenc/threads.hpp"

namespace wenc {

namespace {

// Distance from p to the complement of the region along the inward normal
// direction, approximated per primitive; used only for the optional ramp.
double inset_depth(const Region& r, const Point3& p) {
    if (const auto* ball = std::get_if<Ball>(&r.shape))
        return ball->radius - norm(p - ball->center);
    if (const auto* box = std::get_if<Box>(&r.shape)) {
        double d = box->hi.x - p.x;
        d = std::min(d, p.x - box->lo.x);
        d = std::min(d, box->hi.y - p.y);
        d = std::min(d, p.y - box->lo.y);
        d = std::min(d, box->hi.z - p.z);
        d = std::min(d, p.z - box->lo.z);
        return d;
    }
    const auto& u = std::get<RegionUnion>(r.shape);
    double best = -1.0;
    for (const auto& part : u.parts) best = std::max(best, inset_depth(part, p));
    return best;
}

} // namespace

double SourceSpec::value_at(const Point3& p) const {
    if (!contains(region, p)) return 0.0;
    double f = amplitude * sign;
    if (smoothing > 0.0) {
        double t = std::clamp(inset_depth(region, p) / smoothing, 0.0, 1.0);
        f *= t * t * (3.0 - 2.0 * t);
    }
    return f;
}

CflReport cfl_check(const GridSpec& g, const MediumField& m) {
    CflReport rep;
    rep.c_max = max_wave_speed(m);
    rep.dt_max = 0.9 * g.h / (std::sqrt(3.0) * rep.c_max);
    rep.ok = g.dt <= rep.dt_max;
    return rep;
}

GridSpec build_wave_grid(const MediumField& m, const Region& source_region, double T,
                         double h, double cfl_safety, double pad_slack) {
    if (!(h > 0.0) || !(T > 0.0)) throw DomainError("grid step and horizon must be positive");
    Box hull = bounding_box(source_region);
    if (m.inclusion) {
        Box ib = bounding_box(m.inclusion->region);
        for (int i = 0; i < 3; ++i) {
            hull.lo[i] = std::min(hull.lo[i], ib.lo[i]);
            hull.hi[i] = std::max(hull.hi[i], ib.hi[i]);
        }
    }
    double c = max_wave_speed(m);
    double pad = 0.5 * c * (T + pad_slack) + 2.0 * h;
    GridSpec g;
    g.h = h;
    g.origin = hull.lo - Vec3{pad, pad, pad};
    g.nx = static_cast<long>(std::ceil((hull.hi.x - hull.lo.x + 2.0 * pad) / h));
    g.ny = static_cast<long>(std::ceil((hull.hi.y - hull.lo.y + 2.0 * pad) / h));
    g.nz = static_cast<long>(std::ceil((hull.hi.z - hull.lo.z + 2.0 * pad) / h));
    double dt_bound = cfl_safety * h / (std::sqrt(3.0) * c);
    g.steps = static_cast<long>(std::ceil(T / dt_bound));
    g.dt = T / static_cast<double>(g.steps);
    return g;
}

QuadratureSet grid_aligned_quadrature(const GridSpec& g, const Region& r) {
    Box bb = bounding_box(r);
    long i0 = std::max(0L, static_cast<long>(std::floor((bb.lo.x - g.origin.x) / g.h)) - 1);
    long j0 = std::max(0L, static_cast<long>(std::floor((bb.lo.y - g.origin.y) / g.h)) - 1);
    long k0 = std::max(0L, static_cast<long>(std::floor((bb.lo.z - g.origin.z) / g.h)) - 1);
    long i1 = std::min(g.nx, static_cast<long>(std::ceil((bb.hi.x - g.origin.x) / g.h)) + 1);
    long j1 = std::min(g.ny, static_cast<long>(std::ceil((bb.hi.y - g.origin.y) / g.h)) + 1);
    long k1 = std::min(g.nz, static_cast<long>(std::ceil((bb.hi.z - g.origin.z) / g.h)) + 1);
    QuadratureSet q;
    double w = g.h * g.h * g.h;
    for (long k = k0; k < k1; ++k)
        for (long j = j0; j < j1; ++j)
            for (long i = i0; i < i1; ++i) {
                Point3 p = g.center(i, j, k);
                if (contains(r, p)) {
                    q.nodes.push_back(p);
                    q.weights.push_back(w);
                }
            }
    if (q.nodes.empty()) throw EmptyRegionError("region covers no grid cell centers");
    return q;
}

double discrete_energy(const GridSpec& g, const FaceField& f, const std::vector<double>& prev,
                       const std::vector<double>& next, int threads) {
    double inv_dt = 1.0 / g.dt;
    double h3 = g.h * g.h * g.h;
    double inv_h2 = 1.0 / (g.h * g.h);
    const double* up = prev.data();
    const double* un = next.data();

    double kinetic = parallel_plane_sum(g.nz, threads, [&](long k) {
        double s = 0.0;
        for (long j = 0; j < g.ny; ++j)
            for (long i = 0; i < g.nx; ++i) {
                long c = g.index(i, j, k);
                double v = (un[c] - up[c]) * inv_dt;
                s += v * v;
            }
        return s;
    });

    // Cross-time flux form: faces between existing cells plus boundary faces
    // against the zero exterior.
    double flux = parallel_plane_sum(g.nz, threads, [&](long k) {
        double s = 0.0;
        for (long j = 0; j < g.ny; ++j)
            for (long i = 0; i <= g.nx; ++i) {
                double a = i > 0 ? up[g.index(i - 1, j, k)] : 0.0;
                double b = i < g.nx ? up[g.index(i, j, k)] : 0.0;
                double an = i > 0 ? un[g.index(i - 1, j, k)] : 0.0;
                double bn = i < g.nx ? un[g.index(i, j, k)] : 0.0;
                s += f.gx[f.ix(i, j, k)] * (b - a) * (bn - an);
            }
        for (long j = 0; j <= g.ny; ++j)
            for (long i = 0; i < g.nx; ++i) {
                double a = j > 0 ? up[g.index(i, j - 1, k)] : 0.0;
                double b = j < g.ny ? up[g.index(i, j, k)] : 0.0;
                double an = j > 0 ? un[g.index(i, j - 1, k)] : 0.0;
                double bn = j < g.ny ? un[g.index(i, j, k)] : 0.0;
                s += f.gy[f.iy(i, j, k)] * (b - a) * (bn - an);
            }
        return s;
    });
    // z faces couple consecutive planes; accumulate separately over k-planes.
    double fluxz = parallel_plane_sum(g.nz + 1, threads, [&](long k) {
        double s = 0.0;
        for (long j = 0; j < g.ny; ++j)
            for (long i = 0; i < g.nx; ++i) {
                double a = k > 0 ? up[g.index(i, j, k - 1)] : 0.0;
                double b = k < g.nz ? up[g.index(i, j, k)] : 0.0;
                double an = k > 0 ? un[g.index(i, j, k - 1)] : 0.0;
                double bn = k < g.nz ? un[g.index(i, j, k)] : 0.0;
                s += f.gz[f.iz(i, j, k)] * (b - a) * (bn - an);
            }
        return s;
    });

    return 0.5 * h3 * (kinetic + inv_h2 * (flux + fluxz));
}

SimResult simulate(const MediumField& m, const SourceSpec& s, const GridSpec& g,
                   const QuadratureSet& record_nodes, const SimOptions& opts) {
    auto issues = validate(m, s.region);
    if (!issues.empty()) throw ValidationError(issues);

    CflReport cfl = cfl_check(g, m);
    if (!cfl.ok) throw CflViolation(g.dt, cfl.dt_max);

    double T = g.dt * g.steps;
    double horizon = opts.causality_horizon < 0.0 ? T : std::min(T, opts.causality_horizon);
    Box hull = bounding_box(s.region);
    if (m.inclusion) {
        Box ib = bounding_box(m.inclusion->region);
        for (int i = 0; i < 3; ++i) {
            hull.lo[i] = std::min(hull.lo[i], ib.lo[i]);
            hull.hi[i] = std::max(hull.hi[i], ib.hi[i]);
        }
    }
    double clearance = boundary_clearance(g, hull);
    double needed = 0.5 * cfl.c_max * horizon;
    if (!(clearance > needed)) throw PaddingViolation(clearance, needed);

    FaceField faces = build_faces(g, m);
    long n = g.cells();
    std::vector<double> u_prev(n, 0.0), u_curr(n, 0.0), u_next(n, 0.0);
    std::vector<double> f(n, 0.0);
    parallel_slabs(g.nz, opts.threads, [&](long k0, long k1) {
        for (long k = k0; k < k1; ++k)
            for (long j = 0; j < g.ny; ++j)
                for (long i = 0; i < g.nx; ++i)
                    f[g.index(i, j, k)] = s.value_at(g.center(i, j, k));
    });

    SimResult res;
    res.traces.quad = record_nodes;
    res.traces.dt = g.dt;
    res.traces.steps = g.steps;
    std::size_t nn = record_nodes.size();
    res.traces.data.assign(static_cast<std::size_t>(g.steps + 1) * nn, 0.0);

    auto record = [&](long row, const std::vector<double>& u) {
        for (std::size_t q = 0; q < nn; ++q)
            res.traces.data[row * nn + q] = sample_field(g, u, record_nodes.nodes[q]);
    };

    // First step from rest: u(dt) = dt * f.
    for (long c = 0; c < n; ++c) u_curr[c] = g.dt * f[c];
    record(1, u_curr);

    if (opts.energy_every > 0) {
        res.energy.times.push_back(0.5 * g.dt);
        res.energy.values.push_back(discrete_energy(g, faces, u_prev, u_curr, opts.threads));
    }

    double dt2 = g.dt * g.dt;
    double inv_h2 = 1.0 / (g.h * g.h);
    const double* gx = faces.gx.data();
    const double* gy = faces.gy.data();
    const double* gz = faces.gz.data();

    for (long k_step = 1; k_step < g.steps; ++k_step) {
        const double* uc = u_curr.data();
        const double* up = u_prev.data();
        double* un = u_next.data();
        parallel_slabs(g.nz, opts.threads, [&](long z0, long z1) {
            for (long k = z0; k < z1; ++k)
                for (long j = 0; j < g.ny; ++j) {
                    long rowc = g.index(0, j, k);
                    long rowgx = faces.ix(0, j, k);
                    long rowgy0 = faces.iy(0, j, k);
                    long rowgy1 = faces.iy(0, j + 1, k);
                    long rowgz0 = faces.iz(0, j, k);
                    long rowgz1 = faces.iz(0, j, k + 1);
                    long sx = 1, sy = g.nx, sz = g.nx * g.ny;
                    for (long i = 0; i < g.nx; ++i) {
                        long c = rowc + i;
                        double u = uc[c];
                        double ul = i > 0 ? uc[c - sx] : 0.0;
                        double ur = i + 1 < g.nx ? uc[c + sx] : 0.0;
                        double ud = j > 0 ? uc[c - sy] : 0.0;
                        double uu = j + 1 < g.ny ? uc[c + sy] : 0.0;
                        double ub = k > 0 ? uc[c - sz] : 0.0;
                        double uf = k + 1 < g.nz ? uc[c + sz] : 0.0;
                        double lap = gx[rowgx + i + 1] * (ur - u) - gx[rowgx + i] * (u - ul)
                                   + gy[rowgy1 + i] * (uu - u) - gy[rowgy0 + i] * (u - ud)
                                   + gz[rowgz1 + i] * (uf - u) - gz[rowgz0 + i] * (u - ub);
                        un[c] = 2.0 * u - up[c] + dt2 * inv_h2 * lap;
                    }
                }
        });
        record(k_step + 1, u_next);
        if (opts.energy_every > 0 && (k_step % opts.energy_every == 0 || k_step == g.steps - 1)) {
            res.energy.times.push_back((k_step + 0.5) * g.dt);
            res.energy.values.push_back(discrete_energy(g, faces, u_curr, u_next, opts.threads));
        }
        std::swap(u_prev, u_curr);
        std::swap(u_curr, u_next);
    }

    for (double v : res.traces.data)
        if (!std::isfinite(v)) throw Error("simulation produced non-finite trace values");
    return res;
}

} // namespace wenc
