#include "wenc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wenc {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double dist_point_box(const Point3& p, const Box& b) {
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double g = std::max({b.lo[i] - p[i], 0.0, p[i] - b.hi[i]});
        d2 += g * g;
    }
    return std::sqrt(d2);
}

// Distance between two axis-aligned boxes; zero when they touch or overlap.
double dist_box_box(const Box& a, const Box& b) {
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double g = std::max({b.lo[i] - a.hi[i], 0.0, a.lo[i] - b.hi[i]});
        d2 += g * g;
    }
    return std::sqrt(d2);
}

double dist_primitive(const Region& a, const Region& b);

double dist_to_region(const Region& a, const Ball& bb) {
    if (const auto* ball = std::get_if<Ball>(&a.shape))
        return norm(ball->center - bb.center) - ball->radius - bb.radius;
    if (const auto* box = std::get_if<Box>(&a.shape))
        return dist_point_box(bb.center, *box) - bb.radius;
    const auto& u = std::get<RegionUnion>(a.shape);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& part : u.parts) best = std::min(best, dist_to_region(part, bb));
    return best;
}

double dist_to_region(const Region& a, const Box& bb) {
    if (const auto* ball = std::get_if<Ball>(&a.shape))
        return dist_point_box(ball->center, bb) - ball->radius;
    if (const auto* box = std::get_if<Box>(&a.shape))
        return dist_box_box(*box, bb);
    const auto& u = std::get<RegionUnion>(a.shape);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& part : u.parts) best = std::min(best, dist_to_region(part, bb));
    return best;
}

double dist_primitive(const Region& a, const Region& b) {
    if (const auto* ball = std::get_if<Ball>(&b.shape)) return dist_to_region(a, *ball);
    if (const auto* box = std::get_if<Box>(&b.shape)) return dist_to_region(a, *box);
    const auto& u = std::get<RegionUnion>(b.shape);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& part : u.parts) best = std::min(best, dist_primitive(a, part));
    return best;
}

} // namespace

void validate_region(const Region& r) {
    if (const auto* ball = std::get_if<Ball>(&r.shape)) {
        if (!(ball->radius > 0.0)) throw DomainError("ball radius must be positive");
        return;
    }
    if (const auto* box = std::get_if<Box>(&r.shape)) {
        for (int i = 0; i < 3; ++i)
            if (!(box->lo[i] < box->hi[i])) throw DomainError("box must have lo < hi per axis");
        return;
    }
    const auto& u = std::get<RegionUnion>(r.shape);
    if (u.parts.empty()) throw DomainError("union region must have at least one part");
    for (const auto& part : u.parts) validate_region(part);
}

bool contains(const Region& r, const Point3& p) {
    if (const auto* ball = std::get_if<Ball>(&r.shape))
        return norm_sq(p - ball->center) < ball->radius * ball->radius;
    if (const auto* box = std::get_if<Box>(&r.shape)) {
        for (int i = 0; i < 3; ++i)
            if (p[i] <= box->lo[i] || p[i] >= box->hi[i]) return false;
        return true;
    }
    const auto& u = std::get<RegionUnion>(r.shape);
    for (const auto& part : u.parts)
        if (contains(part, p)) return true;
    return false;
}

bool contains_closed(const Region& r, const Point3& p) {
    if (const auto* ball = std::get_if<Ball>(&r.shape))
        return norm_sq(p - ball->center) <= ball->radius * ball->radius;
    if (const auto* box = std::get_if<Box>(&r.shape)) {
        for (int i = 0; i < 3; ++i)
            if (p[i] < box->lo[i] || p[i] > box->hi[i]) return false;
        return true;
    }
    const auto& u = std::get<RegionUnion>(r.shape);
    for (const auto& part : u.parts)
        if (contains_closed(part, p)) return true;
    return false;
}

Box bounding_box(const Region& r) {
    if (const auto* ball = std::get_if<Ball>(&r.shape)) {
        Vec3 rad{ball->radius, ball->radius, ball->radius};
        return Box{ball->center - rad, ball->center + rad};
    }
    if (const auto* box = std::get_if<Box>(&r.shape)) return *box;
    const auto& u = std::get<RegionUnion>(r.shape);
    Box bb = bounding_box(u.parts.front());
    for (std::size_t k = 1; k < u.parts.size(); ++k) {
        Box pb = bounding_box(u.parts[k]);
        for (int i = 0; i < 3; ++i) {
            bb.lo[i] = std::min(bb.lo[i], pb.lo[i]);
            bb.hi[i] = std::max(bb.hi[i], pb.hi[i]);
        }
    }
    return bb;
}

Point3 project_onto(const Region& r, const Point3& p) {
    if (const auto* ball = std::get_if<Ball>(&r.shape)) {
        Vec3 d = p - ball->center;
        double n = norm(d);
        if (n <= ball->radius) return p;
        return ball->center + d * (ball->radius / n);
    }
    if (const auto* box = std::get_if<Box>(&r.shape)) {
        return {clamp(p.x, box->lo.x, box->hi.x),
                clamp(p.y, box->lo.y, box->hi.y),
                clamp(p.z, box->lo.z, box->hi.z)};
    }
    const auto& u = std::get<RegionUnion>(r.shape);
    Point3 best = project_onto(u.parts.front(), p);
    double best_d = norm_sq(best - p);
    for (std::size_t k = 1; k < u.parts.size(); ++k) {
        Point3 q = project_onto(u.parts[k], p);
        double d = norm_sq(q - p);
        if (d < best_d) { best_d = d; best = q; }
    }
    return best;
}

double dist_sets(const Region& a, const Region& b) {
    validate_region(a);
    validate_region(b);
    double d = dist_primitive(a, b);
    if (d <= 0.0) throw OverlapError("regions must have disjoint closures");
    return d;
}

double support_function(const Region& r, const Vec3& omega) {
    if (const auto* ball = std::get_if<Ball>(&r.shape))
        return dot(ball->center, omega) + ball->radius * norm(omega);
    if (const auto* box = std::get_if<Box>(&r.shape)) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            s += omega[i] >= 0.0 ? box->hi[i] * omega[i] : box->lo[i] * omega[i];
        return s;
    }
    const auto& u = std::get<RegionUnion>(r.shape);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& part : u.parts) best = std::max(best, support_function(part, omega));
    return best;
}

double cone_integral(const Cone& c, double tau) {
    if (!(tau >= 1.0)) throw DomainError("cone_integral requires tau >= 1");
    if (!(c.height > 0.0) || !(c.half_angle > 0.0) || c.half_angle > 1.5707963267948966 + 1e-12)
        throw DomainError("cone must have positive height and half angle in (0, pi/2]");
    // Solid angle of the spherical cap times the radial profile integral
    // int_0^{h tau} s^2 exp(-s) ds = 2 - exp(-u)(u^2 + 2u + 2).
    double cap = 2.0 * M_PI * (1.0 - std::cos(c.half_angle));
    double u = c.height * tau;
    double radial = 2.0 - std::exp(-u) * (u * (u + 2.0) + 2.0);
    return cap * radial / (tau * tau * tau);
}

QuadratureSet sample_region(const Region& r, double spacing) {
    validate_region(r);
    if (!(spacing > 0.0)) throw DomainError("spacing must be positive");
    Box bb = bounding_box(r);
    long nx = static_cast<long>(std::ceil((bb.hi.x - bb.lo.x) / spacing - 1e-12));
    long ny = static_cast<long>(std::ceil((bb.hi.y - bb.lo.y) / spacing - 1e-12));
    long nz = static_cast<long>(std::ceil((bb.hi.z - bb.lo.z) / spacing - 1e-12));
    QuadratureSet q;
    double w = spacing * spacing * spacing;
    for (long i = 0; i < nx; ++i) {
        double x = bb.lo.x + (i + 0.5) * spacing;
        for (long j = 0; j < ny; ++j) {
            double y = bb.lo.y + (j + 0.5) * spacing;
            for (long k = 0; k < nz; ++k) {
                Point3 p{x, y, bb.lo.z + (k + 0.5) * spacing};
                if (contains(r, p)) {
                    q.nodes.push_back(p);
                    q.weights.push_back(w);
                }
            }
        }
    }
    if (q.nodes.empty()) throw EmptyRegionError("no lattice cell centers fell inside the region");
    return q;
}

} // namespace wenc
