#pragma once

#include "wenc/geometry.hpp"
#include "wenc/medium.hpp"

namespace wenc {

// Refraction data for a pair x (below the interface) and y (above it).
struct OpticalPath {
    Vec2 z;            // interface crossing point minimizing the travel time
    double length;     // travel time through the two half-spaces
    double g_minus;    // |x - crossing| in three dimensions
    double g_plus;     // |crossing - y| in three dimensions
    double sin_minus;  // sine of the incidence angle below
    double sin_plus;   // sine of the incidence angle above
};

struct Hessian2 {
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;
    double det() const { return h11 * h22 - h12 * h12; }
};

struct EvanescentMin {
    double value = 0.0;
    Vec2 argmin;
};

struct RegionPairDistance {
    double length = 0.0;
    Point3 x;
    Point3 y;
};

// Travel time through the layered medium for the straight path broken at the
// interface point z: |x~ - x|/sqrt(gm) + |x~ - y|/sqrt(gp) with x~ = (z, 0).
double broken_ray_time(const Point3& x, const Point3& y, const Vec2& z, const TwoLayer& g);

// Interface point minimizing broken_ray_time; unique and located on the
// segment between the horizontal projections of x and y.
// Requires x strictly below and y strictly above the interface.
Vec2 snell_point(const Point3& x, const Point3& y, const TwoLayer& g);

OpticalPath make_optical_path(const Point3& x, const Point3& y, const TwoLayer& g);

// Travel time along the refracted path (the minimum of broken_ray_time).
double optical_distance(const Point3& x, const Point3& y, const TwoLayer& g);

// Hessian of z -> broken_ray_time(x, y, z) at the minimizing point.
Hessian2 snell_hessian(const Point3& x, const Point3& y, const TwoLayer& g);

// Travel-time estimate with the lower leg replaced, outside the critical
// aperture around x, by a critically inclined descent plus an interface run
// at the upper speed.  Requires gamma_plus > gamma_minus.
double evanescent_travel_time(const Point3& x, const Point3& y, const Vec2& z, const TwoLayer& g);

// Global minimum of evanescent_travel_time over interface points, found by a
// refined exhaustive search over a box padded around the projections.
EvanescentMin min_evanescent_time(const Point3& x, const Point3& y, const TwoLayer& g);

// Shortest travel time between a region below the interface and one above it,
// minimized by projected descent from several deterministic starts.
RegionPairDistance min_optical_distance(const Region& below, const Region& above, const TwoLayer& g);

} // namespace wenc
