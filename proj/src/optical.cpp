#include "wenc/optical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace wenc {

namespace {

void require_sides(const Point3& x, const Point3& y) {
    if (!(x.z < 0.0)) throw DomainError("first point must lie strictly below the interface");
    if (!(y.z > 0.0)) throw DomainError("second point must lie strictly above the interface");
}

void require_positive(const TwoLayer& g) {
    if (!(g.gamma_plus > 0.0) || !(g.gamma_minus > 0.0))
        throw DomainError("layer coefficients must be positive");
}

struct SegmentTime {
    // Travel time restricted to the segment z(t) = x' + t (y' - x'), t in [0,1].
    double d;         // |y' - x'|
    double x3, y3;    // |x.z|, y.z
    double sm, sp;    // sqrt(gamma_minus), sqrt(gamma_plus)

    double value(double t) const {
        double a = std::sqrt(t * t * d * d + x3 * x3);
        double b = std::sqrt((1.0 - t) * (1.0 - t) * d * d + y3 * y3);
        return a / sm + b / sp;
    }
    double slope(double t) const {
        double a = std::sqrt(t * t * d * d + x3 * x3);
        double b = std::sqrt((1.0 - t) * (1.0 - t) * d * d + y3 * y3);
        return d * d * (t / (a * sm) - (1.0 - t) / (b * sp));
    }
    double curvature(double t) const {
        double a2 = t * t * d * d + x3 * x3, a = std::sqrt(a2);
        double b2 = (1.0 - t) * (1.0 - t) * d * d + y3 * y3, b = std::sqrt(b2);
        double ca = d * d * (1.0 - t * t * d * d / a2) / (a * sm);
        double cb = d * d * (1.0 - (1.0 - t) * (1.0 - t) * d * d / b2) / (b * sp);
        return ca + cb;
    }
};

// Root of the strictly increasing slope on (0,1): Newton guarded by bisection.
double solve_segment(const SegmentTime& f) {
    double lo = 0.0, hi = 1.0;
    double t = 0.5;
    for (int it = 0; it < 200; ++it) {
        double s = f.slope(t);
        if (s > 0.0) hi = t; else lo = t;
        double c = f.curvature(t);
        double tn = (c > 0.0) ? t - s / c : 0.5 * (lo + hi);
        if (!(tn > lo) || !(tn < hi)) tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) < 1e-16 && std::abs(s) < 1e-12 * std::max(1.0, f.d)) { t = tn; break; }
        t = tn;
        if (hi - lo < 1e-16) break;
    }
    return t;
}

} // namespace

double broken_ray_time(const Point3& x, const Point3& y, const Vec2& z, const TwoLayer& g) {
    require_sides(x, y);
    require_positive(g);
    double dxm = z.x - x.x, dym = z.y - x.y;
    double dxp = z.x - y.x, dyp = z.y - y.y;
    double a = std::sqrt(dxm * dxm + dym * dym + x.z * x.z);
    double b = std::sqrt(dxp * dxp + dyp * dyp + y.z * y.z);
    return a / std::sqrt(g.gamma_minus) + b / std::sqrt(g.gamma_plus);
}

Vec2 snell_point(const Point3& x, const Point3& y, const TwoLayer& g) {
    return make_optical_path(x, y, g).z;
}

OpticalPath make_optical_path(const Point3& x, const Point3& y, const TwoLayer& g) {
    require_sides(x, y);
    require_positive(g);
    Vec2 xp{x.x, x.y}, yp{y.x, y.y};
    double d = norm(yp - xp);
    OpticalPath path;
    if (d == 0.0) {
        path.z = xp;
        path.g_minus = -x.z;
        path.g_plus = y.z;
        path.sin_minus = 0.0;
        path.sin_plus = 0.0;
        path.length = path.g_minus / std::sqrt(g.gamma_minus) + path.g_plus / std::sqrt(g.gamma_plus);
        return path;
    }
    SegmentTime f{d, -x.z, y.z, std::sqrt(g.gamma_minus), std::sqrt(g.gamma_plus)};
    double t = solve_segment(f);
    path.z = xp + (yp - xp) * t;
    path.g_minus = std::sqrt(t * t * d * d + x.z * x.z);
    path.g_plus = std::sqrt((1.0 - t) * (1.0 - t) * d * d + y.z * y.z);
    path.sin_minus = t * d / path.g_minus;
    path.sin_plus = (1.0 - t) * d / path.g_plus;
    path.length = f.value(t);
    return path;
}

double optical_distance(const Point3& x, const Point3& y, const TwoLayer& g) {
    return make_optical_path(x, y, g).length;
}

Hessian2 snell_hessian(const Point3& x, const Point3& y, const TwoLayer& g) {
    OpticalPath p = make_optical_path(x, y, g);
    double sm = std::sqrt(g.gamma_minus), sp = std::sqrt(g.gamma_plus);
    // Each leg contributes (I - rho rho^T) / (leg * speed) with rho the
    // horizontal offset divided by the three-dimensional leg length.
    Vec2 rm{(p.z.x - x.x) / p.g_minus, (p.z.y - x.y) / p.g_minus};
    Vec2 rp{(p.z.x - y.x) / p.g_plus, (p.z.y - y.y) / p.g_plus};
    Hessian2 h;
    double am = 1.0 / (p.g_minus * sm), ap = 1.0 / (p.g_plus * sp);
    h.h11 = am * (1.0 - rm.x * rm.x) + ap * (1.0 - rp.x * rp.x);
    h.h22 = am * (1.0 - rm.y * rm.y) + ap * (1.0 - rp.y * rp.y);
    h.h12 = -am * rm.x * rm.y - ap * rp.x * rp.y;
    return h;
}

double evanescent_travel_time(const Point3& x, const Point3& y, const Vec2& z, const TwoLayer& g) {
    require_sides(x, y);
    require_positive(g);
    if (!(g.gamma_plus > g.gamma_minus))
        throw DomainError("evanescent travel time requires a faster upper layer");
    double sm = std::sqrt(g.gamma_minus), sp = std::sqrt(g.gamma_plus);
    double a0 = sm / sp;                       // sine of the critical angle
    double c0 = std::sqrt(1.0 - a0 * a0);      // cosine of the critical angle
    double dxm = z.x - x.x, dym = z.y - x.y;
    double dh = std::sqrt(dxm * dxm + dym * dym);   // horizontal offset from x
    double dxp = z.x - y.x, dyp = z.y - y.y;
    double b = std::sqrt(dxp * dxp + dyp * dyp + y.z * y.z);
    double x3 = -x.z;
    double direct = broken_ray_time(x, y, z, g); // in-aperture branch is the exact time
    double skim = x3 * c0 / sm + (dh + b) / sp;
    double aperture = x3 * a0 / c0;            // horizontal reach of the critical cone
    double tol = 1e-9 * std::max(1.0, x3);
    if (dh < aperture - tol) return direct;
    if (dh > aperture + tol) return skim;
    return std::min(direct, skim);             // on the critical circle both agree
}

EvanescentMin min_evanescent_time(const Point3& x, const Point3& y, const TwoLayer& g) {
    require_sides(x, y);
    if (!(g.gamma_plus > g.gamma_minus))
        throw DomainError("evanescent travel time requires a faster upper layer");
    double pad = 2.0 * std::max(-x.z, y.z);
    double lox = std::min(x.x, y.x) - pad, hix = std::max(x.x, y.x) + pad;
    double loy = std::min(x.y, y.y) - pad, hiy = std::max(x.y, y.y) + pad;

    auto eval = [&](double u, double v) { return evanescent_travel_time(x, y, Vec2{u, v}, g); };

    // Coarse scan; keep several candidate cells so a refinement track cannot
    // lock onto a secondary dip of the piecewise definition.
    const int n0 = 81;
    double hx = (hix - lox) / (n0 - 1), hy = (hiy - loy) / (n0 - 1);
    std::array<std::pair<double, Vec2>, 3> best;
    best.fill({std::numeric_limits<double>::infinity(), Vec2{}});
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j) {
            Vec2 zc{lox + i * hx, loy + j * hy};
            double v = eval(zc.x, zc.y);
            if (v < best[2].first) {
                best[2] = {v, zc};
                std::sort(best.begin(), best.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
            }
        }

    EvanescentMin out{std::numeric_limits<double>::infinity(), Vec2{}};
    for (const auto& cand : best) {
        Vec2 c = cand.second;
        double sx = 2.5 * hx, sy = 2.5 * hy;
        for (int level = 0; level < 8; ++level) {
            const int n = 41;
            double gx = 2.0 * sx / (n - 1), gy = 2.0 * sy / (n - 1);
            double bv = std::numeric_limits<double>::infinity();
            Vec2 bz = c;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Vec2 zc{c.x - sx + i * gx, c.y - sy + j * gy};
                    double v = eval(zc.x, zc.y);
                    if (v < bv) { bv = v; bz = zc; }
                }
            c = bz;
            sx = 2.5 * gx;
            sy = 2.5 * gy;
            if (bv < out.value) { out.value = bv; out.argmin = bz; }
        }
    }
    return out;
}

RegionPairDistance min_optical_distance(const Region& below, const Region& above, const TwoLayer& g) {
    validate_region(below);
    validate_region(above);
    require_positive(g);
    Box bb = bounding_box(below);
    Box ba = bounding_box(above);
    if (!(bb.hi.z < 0.0)) throw DomainError("first region must lie strictly below the interface");
    if (!(ba.lo.z > 0.0)) throw DomainError("second region must lie strictly above the interface");

    double sm = std::sqrt(g.gamma_minus), sp = std::sqrt(g.gamma_plus);
    auto pair_time = [&](const Point3& px, const Point3& py) {
        return make_optical_path(px, py, g);
    };

    Point3 cb{0.5 * (bb.lo.x + bb.hi.x), 0.5 * (bb.lo.y + bb.hi.y), 0.5 * (bb.lo.z + bb.hi.z)};
    Point3 ca{0.5 * (ba.lo.x + ba.hi.x), 0.5 * (ba.lo.y + ba.hi.y), 0.5 * (ba.lo.z + ba.hi.z)};
    double scale = std::max(norm(ca - cb), 1.0);

    // Deterministic spread of start pairs: facing points plus offsets pushed
    // to the region boundaries by projection.
    static const std::array<Vec3, 7> dirs = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{-1, 0, 0},
                                             Vec3{0, 1, 0}, Vec3{0, -1, 0}, Vec3{1, 1, 0},
                                             Vec3{-1, -1, 0}};

    RegionPairDistance result;
    result.length = std::numeric_limits<double>::infinity();

    for (const Vec3& d : dirs) {
        Point3 x = project_onto(below, ca + d * (0.5 * scale));
        Point3 y = project_onto(above, cb + d * (0.5 * scale));
        if (!(x.z < 0.0)) x.z = std::min(x.z, 0.5 * bb.hi.z);
        if (!(y.z > 0.0)) y.z = std::max(y.z, 0.5 * ba.lo.z);
        OpticalPath p = pair_time(x, y);
        double step = 0.25 * scale;
        for (int it = 0; it < 400; ++it) {
            Vec3 zt{p.z.x, p.z.y, 0.0};
            Vec3 gx = (x - zt) / (p.g_minus * sm);   // travel-time gradient in x
            Vec3 gy = (y - zt) / (p.g_plus * sp);    // travel-time gradient in y
            bool moved = false;
            while (step > 1e-14 * scale) {
                Point3 xn = project_onto(below, x - gx * step);
                Point3 yn = project_onto(above, y - gy * step);
                OpticalPath pn = pair_time(xn, yn);
                if (pn.length < p.length - 1e-15 * scale) {
                    x = xn; y = yn; p = pn; moved = true;
                    step *= 1.3;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        if (p.length < result.length) {
            result.length = p.length;
            result.x = x;
            result.y = y;
        }
    }
    return result;
}

} // namespace wenc
