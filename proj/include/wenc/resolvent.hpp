#pragma once

#include <vector>

#include "wenc/forward.hpp"
#include "wenc/geometry.hpp"
#include "wenc/grid.hpp"
#include "wenc/medium.hpp"

namespace wenc {

// One evaluation of the decay-rate-parametrized background field: the
// solution of (div(gamma grad) - tau^2) v + f = 0 sampled at a point.
struct ResolventSample {
    Point3 x;
    double tau = 0.0;
    double value = 0.0;
    Vec3 gradient{};
};

// Controls for the screened elliptic solve on a truncated grid. The far
// boundary carries a zero condition; `padding_factor` sets how many decay
// lengths of clearance the evaluation set must keep from every outer wall
// (relative truncation error behaves like exp(-padding_factor)).
struct HelmholtzSolveSpec {
    GridSpec grid;
    double tolerance = 1e-8;      // relative residual; must lie in (0, 1e-6]
    long max_iterations = 20000;
    int threads = 1;
    double padding_factor = 10.0;
};

struct SolveStats {
    long iterations = 0;
    double residual = 0.0;
};

// Kernel quadrature of the free-space field at a point outside the closed
// source region. Value and gradient come from the same node set.
ResolventSample eval_free_field(const Point3& x, double tau, const SourceSpec& s,
                                const QuadratureSet& source_quad);

// Integral of |grad v|^2 over D for the free-space field, by midpoint
// quadrature over D of the kernel gradient. `source_spacing` of zero reuses
// `spacing` for the source region.
double gradient_norm_sq_free(const Region& D, const SourceSpec& s, double tau,
                             double spacing, double source_spacing = 0.0, int threads = 1);

// Preconditioned conjugate gradients for (sigma - div(gamma grad)) x = rhs
// with the flux-form stencil of `faces`. `x` is the start vector on entry
// (warm starts) and the solution on exit. Throws NoConvergence past
// max_iterations. All reductions are deterministic for any thread count.
SolveStats solve_screened(const GridSpec& g, const FaceField& faces, double sigma,
                          const std::vector<double>& rhs, double tolerance,
                          long max_iterations, int threads, std::vector<double>& x);

// Numerical layered background field: solves (tau^2 - div(gamma0 grad)) v = f
// on spec.grid and samples value and centered-difference gradient at the
// evaluation nodes. `field` (optional) carries the grid solution in and out
// so sweeps over ascending tau can warm start.
std::vector<ResolventSample> eval_layered_field(const QuadratureSet& eval, double tau,
                                                const SourceSpec& s, const TwoLayer& bg,
                                                const HelmholtzSolveSpec& spec,
                                                SolveStats* stats = nullptr,
                                                std::vector<double>* field = nullptr);

// Leading large-tau form of the layered transmission kernel between a point
// below and a point above the interface.
struct KernelLeadingOrder {
    double value = 0.0;        // kernel magnitude at this tau
    Vec3 gradient_factor{};    // multiply by value for the leading gradient
    double travel_time = 0.0;  // refracted travel time between the points
    double det_hessian = 0.0;  // interface Hessian determinant at the bend
    double amplitude = 0.0;    // tau-independent transmission amplitude
};

KernelLeadingOrder leading_order_kernel(const Point3& x, const Point3& y, double tau,
                                        const TwoLayer& bg);

// Integral of |grad v|^2 over D for the layered background field, on the
// grid-aligned quadrature of D.
double gradient_norm_sq_layered(const Region& D, const SourceSpec& s, double tau,
                                const TwoLayer& bg, const HelmholtzSolveSpec& spec);

} // namespace wenc
