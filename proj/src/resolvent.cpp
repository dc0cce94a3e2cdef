#include "wenc/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wenc/errors.hpp"
#include "wenc/optical.hpp"
#include "wenc/threads.hpp"

namespace wenc {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Deterministic reduction over a flat index range: fixed-size chunks are
// summed independently and combined in chunk order, so the result does not
// depend on the worker count.
double chunked_sum(std::size_t n, int threads, const std::function<double(std::size_t)>& term) {
    constexpr std::size_t kChunk = 512;
    long chunks = static_cast<long>((n + kChunk - 1) / kChunk);
    return parallel_plane_sum(chunks, threads, [&](long c) {
        std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        std::size_t hi = std::min(n, lo + kChunk);
        double s = 0.0;
        for (std::size_t q = lo; q < hi; ++q) s += term(q);
        return s;
    });
}

double grid_dot(const GridSpec& g, const std::vector<double>& a, const std::vector<double>& b,
                int threads) {
    long plane = g.nx * g.ny;
    return parallel_plane_sum(g.nz, threads, [&](long k) {
        const double* pa = a.data() + k * plane;
        const double* pb = b.data() + k * plane;
        double s = 0.0;
        for (long i = 0; i < plane; ++i) s += pa[i] * pb[i];
        return s;
    });
}

Box quad_bounding_box(const QuadratureSet& q) {
    Box b{q.nodes.front(), q.nodes.front()};
    for (const Point3& p : q.nodes) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.lo.z = std::min(b.lo.z, p.z);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
        b.hi.z = std::max(b.hi.z, p.z);
    }
    return b;
}

struct WeightedSource {
    std::vector<Point3> nodes;
    std::vector<double> strengths; // quadrature weight times source value
};

WeightedSource collapse_source(const SourceSpec& s, const QuadratureSet& quad) {
    WeightedSource ws;
    ws.nodes.reserve(quad.size());
    ws.strengths.reserve(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) {
        double fv = s.value_at(quad.nodes[q]);
        if (fv == 0.0) continue;
        ws.nodes.push_back(quad.nodes[q]);
        ws.strengths.push_back(quad.weights[q] * fv);
    }
    return ws;
}

} // namespace

ResolventSample eval_free_field(const Point3& x, double tau, const SourceSpec& s,
                                const QuadratureSet& source_quad) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    if (contains_closed(s.region, x))
        throw DomainError("evaluation point lies in the closed source region");
    ResolventSample out;
    out.x = x;
    out.tau = tau;
    Vec3 grad{};
    double val = 0.0;
    for (std::size_t q = 0; q < source_quad.size(); ++q) {
        double fv = s.value_at(source_quad.nodes[q]);
        if (fv == 0.0) continue;
        double wq = source_quad.weights[q] * fv;
        Vec3 d = x - source_quad.nodes[q];
        double r = norm(d);
        double kernel = wq * std::exp(-tau * r) / (kFourPi * r);
        val += kernel;
        grad -= d * (kernel * (tau + 1.0 / r) / r);
    }
    out.value = val;
    out.gradient = grad;
    return out;
}

double gradient_norm_sq_free(const Region& D, const SourceSpec& s, double tau, double spacing,
                             double source_spacing, int threads) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    if (!(spacing > 0.0)) throw DomainError("quadrature spacing must be positive");
    dist_sets(D, s.region); // rejects touching closures
    QuadratureSet dq = sample_region(D, spacing);
    QuadratureSet bq = sample_region(s.region, source_spacing > 0.0 ? source_spacing : spacing);
    WeightedSource ws = collapse_source(s, bq);
    if (ws.nodes.empty()) throw EmptyRegionError("source vanishes on every quadrature node");
    std::size_t ns = ws.nodes.size();
    return chunked_sum(dq.size(), threads, [&](std::size_t ixq) {
        const Point3& p = dq.nodes[ixq];
        Vec3 grad{};
        for (std::size_t q = 0; q < ns; ++q) {
            Vec3 d = p - ws.nodes[q];
            double r = norm(d);
            double kernel = ws.strengths[q] * std::exp(-tau * r) / (kFourPi * r);
            grad -= d * (kernel * (tau + 1.0 / r) / r);
        }
        return dq.weights[ixq] * norm_sq(grad);
    });
}

SolveStats solve_screened(const GridSpec& g, const FaceField& faces, double sigma,
                          const std::vector<double>& rhs, double tolerance, long max_iterations,
                          int threads, std::vector<double>& x) {
    long n = g.cells();
    if (n <= 0) throw DomainError("solver grid is empty");
    if (static_cast<long>(rhs.size()) != n) throw DomainError("right-hand side does not match the grid");
    if (!(sigma > 0.0)) throw DomainError("shift must be positive for a definite system");
    if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
    if (static_cast<long>(x.size()) != n) x.assign(rhs.size(), 0.0);

    double norm_b = std::sqrt(grid_dot(g, rhs, rhs, threads));
    if (norm_b == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0};
    }

    double inv_h2 = 1.0 / (g.h * g.h);
    std::vector<double> inv_diag(rhs.size());
    parallel_slabs(g.nz, threads, [&](long klo, long khi) {
        for (long k = klo; k < khi; ++k)
            for (long j = 0; j < g.ny; ++j)
                for (long i = 0; i < g.nx; ++i) {
                    double d = faces.gx[faces.ix(i, j, k)] + faces.gx[faces.ix(i + 1, j, k)] +
                               faces.gy[faces.iy(i, j, k)] + faces.gy[faces.iy(i, j + 1, k)] +
                               faces.gz[faces.iz(i, j, k)] + faces.gz[faces.iz(i, j, k + 1)];
                    inv_diag[g.index(i, j, k)] = 1.0 / (sigma + d * inv_h2);
                }
    });

    std::vector<double> r(rhs.size()), z(rhs.size()), p(rhs.size()), Ap(rhs.size());
    long plane = g.nx * g.ny;
    auto axpy_planes = [&](const std::function<void(long, long)>& body) {
        parallel_slabs(g.nz, threads, [&](long klo, long khi) { body(klo * plane, khi * plane); });
    };

    apply_shifted(g, faces, sigma, x, Ap, threads);
    axpy_planes([&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            r[i] = rhs[i] - Ap[i];
            z[i] = inv_diag[i] * r[i];
            p[i] = z[i];
        }
    });

    double rho = grid_dot(g, r, z, threads);
    double res = std::sqrt(grid_dot(g, r, r, threads));
    double target = tolerance * norm_b;
    long it = 0;
    while (res > target) {
        if (it >= max_iterations) throw NoConvergence(it, res / norm_b);
        apply_shifted(g, faces, sigma, p, Ap, threads);
        double denom = grid_dot(g, p, Ap, threads);
        if (!(denom > 0.0)) throw NoConvergence(it, res / norm_b);
        double alpha = rho / denom;
        axpy_planes([&](long lo, long hi) {
            for (long i = lo; i < hi; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
                z[i] = inv_diag[i] * r[i];
            }
        });
        ++it;
        res = std::sqrt(grid_dot(g, r, r, threads));
        if (res <= target) break;
        double rho_next = grid_dot(g, r, z, threads);
        double beta = rho_next / rho;
        rho = rho_next;
        axpy_planes([&](long lo, long hi) {
            for (long i = lo; i < hi; ++i) p[i] = z[i] + beta * p[i];
        });
    }
    return {it, res / norm_b};
}

std::vector<ResolventSample> eval_layered_field(const QuadratureSet& eval, double tau,
                                                const SourceSpec& s, const TwoLayer& bg,
                                                const HelmholtzSolveSpec& spec, SolveStats* stats,
                                                std::vector<double>* field) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    if (!(bg.gamma_plus > 0.0) || !(bg.gamma_minus > 0.0))
        throw DomainError("layer coefficients must be positive");
    if (!(spec.tolerance > 0.0) || spec.tolerance > 1e-6)
        throw DomainError("solver tolerance must lie in (0, 1e-6]");
    if (spec.max_iterations < 1) throw DomainError("iteration budget must be positive");
    const GridSpec& g = spec.grid;
    if (g.nx < 2 || g.ny < 2 || g.nz < 2 || !(g.h > 0.0))
        throw DomainError("solver grid is degenerate");
    if (eval.size() == 0) throw DomainError("evaluation set is empty");
    if (boundary_clearance(g, bounding_box(s.region)) < 0.0)
        throw DomainError("source region extends outside the solver grid");

    // The zero far boundary is admissible only while the field has decayed:
    // e^{-tau d / sqrt(gamma)} across the clearance d must be negligible.
    double clearance = boundary_clearance(g, quad_bounding_box(eval));
    double needed = spec.padding_factor * std::sqrt(std::max(bg.gamma_plus, bg.gamma_minus)) / tau;
    if (clearance < needed) throw PaddingViolation(clearance, needed);

    MediumField m;
    m.background = bg;
    FaceField faces = build_faces(g, m);

    std::vector<double> rhs(static_cast<std::size_t>(g.cells()), 0.0);
    parallel_slabs(g.nz, spec.threads, [&](long klo, long khi) {
        for (long k = klo; k < khi; ++k)
            for (long j = 0; j < g.ny; ++j)
                for (long i = 0; i < g.nx; ++i)
                    rhs[g.index(i, j, k)] = s.value_at(g.center(i, j, k));
    });

    std::vector<double> local;
    std::vector<double>& u = field ? *field : local;
    SolveStats st = solve_screened(g, faces, tau * tau, rhs, spec.tolerance, spec.max_iterations,
                                   spec.threads, u);
    if (stats) *stats = st;

    std::vector<ResolventSample> out(eval.size());
    parallel_slabs(static_cast<long>(eval.size()), spec.threads, [&](long lo, long hi) {
        for (long q = lo; q < hi; ++q) {
            ResolventSample& r = out[q];
            r.x = eval.nodes[q];
            r.tau = tau;
            r.value = sample_field(g, u, r.x);
            r.gradient = sample_gradient(g, u, r.x);
        }
    });
    return out;
}

KernelLeadingOrder leading_order_kernel(const Point3& x, const Point3& y, double tau,
                                        const TwoLayer& bg) {
    if (!(tau >= 1.0)) throw DomainError("decay rate must be at least 1");
    if (!(x.z < 0.0) || !(y.z > 0.0))
        throw DomainError("kernel expects x below the interface and y above it");
    if (!(bg.gamma_plus > 0.0) || !(bg.gamma_minus > 0.0))
        throw DomainError("layer coefficients must be positive");
    if (bg.gamma_plus == bg.gamma_minus)
        throw DomainError("layers must differ; use the free-space kernel instead");

    OpticalPath path = make_optical_path(x, y, bg);
    Hessian2 H = snell_hessian(x, y, bg);
    double det = H.det();

    double a0 = std::sqrt(bg.gamma_minus / bg.gamma_plus);
    double depth = -x.z;
    Vec2 dxy{x.x - path.z.x, x.y - path.z.y};
    // Snell's law keeps the lower sine below a0, so the radicand is positive.
    double w2 = a0 * a0 * path.g_minus * path.g_minus - dot(dxy, dxy);
    double w = std::sqrt(std::max(w2, 0.0));
    double transmitted = 4.0 * std::sqrt(bg.gamma_minus) * depth * w /
                         (path.g_minus * (w + a0 * a0 * depth));

    KernelLeadingOrder out;
    out.travel_time = path.length;
    out.det_hessian = det;
    out.amplitude = transmitted / (8.0 * std::numbers::pi * bg.gamma_plus * bg.gamma_minus *
                                   std::sqrt(det) * path.g_minus * path.g_plus);
    out.value = out.amplitude * std::exp(-tau * path.length);
    Vec3 descent{x.x - path.z.x, x.y - path.z.y, x.z};
    out.gradient_factor = descent * (-tau / (std::sqrt(bg.gamma_minus) * path.g_minus));
    return out;
}

double gradient_norm_sq_layered(const Region& D, const SourceSpec& s, double tau,
                                const TwoLayer& bg, const HelmholtzSolveSpec& spec) {
    if (bounding_box(D).hi.z >= 0.0)
        throw DomainError("target region must lie strictly below the interface");
    if (bounding_box(s.region).lo.z <= 0.0)
        throw DomainError("source region must lie strictly above the interface");
    QuadratureSet dq = grid_aligned_quadrature(spec.grid, D);
    std::vector<ResolventSample> samples = eval_layered_field(dq, tau, s, bg, spec);
    double total = 0.0;
    for (std::size_t q = 0; q < dq.size(); ++q) total += dq.weights[q] * norm_sq(samples[q].gradient);
    return total;
}

} // namespace wenc
