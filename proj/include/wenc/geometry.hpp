#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "wenc/errors.hpp"

namespace wenc {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

using Point3 = Vec3;

// Planar point, used for positions on the material interface x3 = 0.
struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

struct Ball {
    Point3 center;
    double radius = 0.0;
};

struct Box {
    Point3 lo;
    Point3 hi;
};

struct Region;

struct RegionUnion {
    std::vector<Region> parts;
};

// Closed bounded region: ball, axis-aligned box, or finite union of such.
struct Region {
    std::variant<Ball, Box, RegionUnion> shape;

    Region() : shape(Ball{}) {}
    Region(Ball b) : shape(std::move(b)) {}
    Region(Box b) : shape(std::move(b)) {}
    Region(RegionUnion u) : shape(std::move(u)) {}
};

inline Region make_ball(const Point3& c, double r) { return Region{Ball{c, r}}; }
inline Region make_box(const Point3& lo, const Point3& hi) { return Region{Box{lo, hi}}; }
inline Region make_union(std::vector<Region> parts) { return Region{RegionUnion{std::move(parts)}}; }

// Truncated solid cone: apex, unit axis, slant height h, half-opening angle in (0, pi/2].
struct Cone {
    Point3 apex;
    Vec3 axis;
    double height = 0.0;
    double half_angle = 0.0;
};

// Nodes with positive weights approximating integration over a region.
struct QuadratureSet {
    std::vector<Point3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

void validate_region(const Region& r);

bool contains(const Region& r, const Point3& p);

// Membership in the closure (boundary points included).
bool contains_closed(const Region& r, const Point3& p);

Box bounding_box(const Region& r);

// Closest point of the region to p (p itself when inside).
Point3 project_onto(const Region& r, const Point3& p);

// Euclidean distance between two disjoint closed regions.
// Throws OverlapError when the closures intersect.
double dist_sets(const Region& a, const Region& b);

// Support function h(omega) = sup_{x in region} x . omega for |omega| = 1.
double support_function(const Region& r, const Vec3& omega);

// Integral of exp(-tau * |x - apex|) over the truncated cone, evaluated in
// closed form via the radial profile s^2 exp(-s).  Requires tau >= 1.
double cone_integral(const Cone& c, double tau);

// Midpoint-rule nodes of a Cartesian lattice of the given spacing anchored at
// the bounding box corner; keeps cells whose centers lie in the region, each
// with weight spacing^3.  Throws EmptyRegionError when nothing survives.
QuadratureSet sample_region(const Region& r, double spacing);

} // namespace wenc
