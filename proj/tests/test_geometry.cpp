#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracle_helpers.hpp"
#include "wenc/errors.hpp"
#include "wenc/geometry.hpp"

using namespace wenc;

TEST_CASE("ball membership is open, closure includes the boundary") {
    Region b = make_ball({1.0, 0.0, 0.0}, 0.5);
    CHECK(contains(b, {1.0, 0.0, 0.0}));
    CHECK(contains(b, {1.49, 0.0, 0.0}));
    CHECK_FALSE(contains(b, {1.5, 0.0, 0.0}));
    CHECK(contains_closed(b, {1.5, 0.0, 0.0}));
    CHECK_FALSE(contains_closed(b, {1.5 + 1e-12, 0.0, 0.0}));
}

TEST_CASE("box membership is open, closure includes faces") {
    Region b = make_box({0, 0, 0}, {1, 2, 3});
    CHECK(contains(b, {0.5, 1.0, 1.5}));
    CHECK_FALSE(contains(b, {0.0, 1.0, 1.5}));
    CHECK(contains_closed(b, {0.0, 1.0, 1.5}));
    CHECK(contains_closed(b, {1.0, 2.0, 3.0}));
    CHECK_FALSE(contains(b, {0.5, 1.0, 3.5}));
}

TEST_CASE("union membership is the disjunction of the parts") {
    Region u = make_union({make_ball({0, 0, 0}, 1.0), make_box({2, -1, -1}, {3, 1, 1})});
    CHECK(contains(u, {0.5, 0, 0}));
    CHECK(contains(u, {2.5, 0, 0}));
    CHECK_FALSE(contains(u, {1.5, 0, 0}));
    CHECK(contains_closed(u, {1.0, 0, 0}));
    CHECK(contains_closed(u, {2.0, 0, 0}));
}

TEST_CASE("region validation rejects degenerate shapes") {
    CHECK_THROWS_AS(validate_region(make_ball({0, 0, 0}, 0.0)), DomainError);
    CHECK_THROWS_AS(validate_region(make_ball({0, 0, 0}, -1.0)), DomainError);
    CHECK_THROWS_AS(validate_region(make_box({0, 0, 0}, {1, 0, 1})), DomainError);
    CHECK_THROWS_AS(validate_region(make_union({})), DomainError);
    CHECK_NOTHROW(validate_region(make_union({make_ball({0, 0, 0}, 1.0)})));
}

TEST_CASE("bounding box covers all union parts") {
    Region u = make_union({make_ball({0, 0, 0}, 1.0), make_box({2, -1, -1}, {3, 1, 4})});
    Box bb = bounding_box(u);
    CHECK(bb.lo.x == doctest::Approx(-1.0));
    CHECK(bb.lo.y == doctest::Approx(-1.0));
    CHECK(bb.lo.z == doctest::Approx(-1.0));
    CHECK(bb.hi.x == doctest::Approx(3.0));
    CHECK(bb.hi.y == doctest::Approx(1.0));
    CHECK(bb.hi.z == doctest::Approx(4.0));
}

TEST_CASE("projection returns the closest region point") {
    Region b = make_ball({0, 0, 0}, 1.0);
    Point3 p = project_onto(b, {3.0, 0.0, 0.0});
    CHECK(norm(p - Point3{1.0, 0.0, 0.0}) < 1e-12);
    // interior points project to themselves
    Point3 q = project_onto(b, {0.2, -0.1, 0.3});
    CHECK(norm(q - Point3{0.2, -0.1, 0.3}) == 0.0);

    Region box = make_box({0, 0, 0}, {1, 1, 1});
    Point3 r = project_onto(box, {2.0, 0.5, -1.0});
    CHECK(norm(r - Point3{1.0, 0.5, 0.0}) < 1e-12);
}

TEST_CASE("set distance agrees with closed forms and rejects overlap") {
    CHECK(dist_sets(make_ball({0, 0, 0}, 1.0), make_ball({0, 0, 4}, 0.5)) ==
          doctest::Approx(2.5).epsilon(1e-12));
    // ball against a box face
    CHECK(dist_sets(make_ball({0, 0, 0}, 1.0), make_box({3, -1, -1}, {4, 1, 1})) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // boxes separated along one axis
    CHECK(dist_sets(make_box({0, 0, 0}, {1, 1, 1}), make_box({2.5, 0, 0}, {3, 1, 1})) ==
          doctest::Approx(1.5).epsilon(1e-12));
    // diagonal corner-to-corner separation
    CHECK(dist_sets(make_box({0, 0, 0}, {1, 1, 1}), make_box({2, 2, 2}, {3, 3, 3})) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    CHECK_THROWS_AS(dist_sets(make_ball({0, 0, 0}, 1.0), make_ball({0, 0, 1.2}, 0.5)), OverlapError);
    // touching closures count as overlap
    CHECK_THROWS_AS(dist_sets(make_ball({0, 0, 0}, 1.0), make_ball({0, 0, 1.5}, 0.5)), OverlapError);
}

TEST_CASE("set distance between unions takes the pairwise minimum") {
    Region a = make_union({make_ball({0, 0, 0}, 0.5), make_ball({10, 0, 0}, 0.5)});
    Region b = make_union({make_ball({0, 0, 3}, 0.5), make_ball({10, 0, 2}, 0.5)});
    CHECK(dist_sets(a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("support function closed forms") {
    std::mt19937_64 g = oracle::rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        Vec3 omega = normalized(Vec3{u(g), u(g), u(g) + 1.5});
        Point3 c{u(g), u(g), u(g)};
        double r = 0.3 + 0.5 * std::fabs(u(g));
        CHECK(support_function(make_ball(c, r), omega) ==
              doctest::Approx(dot(c, omega) + r).epsilon(1e-12));

        Box box{{-0.5, -1.0, 0.0}, {0.5, 1.0, 2.0}};
        double expect = 0.0;
        for (int ax = 0; ax < 3; ++ax)
            expect += std::max(box.lo[ax] * omega[ax], box.hi[ax] * omega[ax]);
        CHECK(support_function(make_box(box.lo, box.hi), omega) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
    // union support is the max over parts
    Region a = make_ball({0, 0, 0}, 1.0);
    Region b = make_ball({0, 0, 5}, 0.5);
    Vec3 up{0, 0, 1};
    CHECK(support_function(make_union({a, b}), up) == doctest::Approx(5.5).epsilon(1e-12));
    Vec3 down{0, 0, -1};
    CHECK(support_function(make_union({a, b}), down) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cone integral matches radial quadrature of the profile") {
    Cone c{{0.2, -0.1, 0.4}, normalized(Vec3{1, 1, 1}), 0.8, 0.4};
    for (double tau : {1.0, 2.5, 5.0, 20.0, 50.0}) {
        double ref = 2.0 * std::numbers::pi * (1.0 - std::cos(c.half_angle)) *
                     oracle::simpson([&](double s) { return s * s * std::exp(-tau * s); }, 0.0,
                                     c.height, 4000);
        CHECK(cone_integral(c, tau) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("cone integral matches Monte Carlo volume sampling") {
    Cone c{{0, 0, 0}, {0, 0, 1}, 1.2, 0.6};
    double tau = 3.0;
    std::mt19937_64 g = oracle::rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double vol = 2.0 * std::numbers::pi / 3.0 * (1.0 - std::cos(c.half_angle)) *
                 c.height * c.height * c.height;
    double acc = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        double s = c.height * std::cbrt(u(g));
        acc += std::exp(-tau * s);
    }
    // radius density 3 s^2 / h^3 matches the volume element; the direction
    // marginal is uniform on the cap and drops out of a radial integrand
    double mc = vol * acc / n;
    CHECK(cone_integral(c, tau) == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("cone integral decreases in tau and respects preconditions") {
    Cone c{{0, 0, 0}, {0, 0, 1}, 1.0, 0.5};
    double prev = cone_integral(c, 1.0);
    for (int i = 1; i <= 49; ++i) {
        double cur = cone_integral(c, 1.0 + i);
        CHECK(cur < prev);
        CHECK(cur > 0.0);
        prev = cur;
    }
    CHECK_THROWS_AS(cone_integral(c, 0.5), DomainError);
    CHECK_THROWS_AS(cone_integral(Cone{{0, 0, 0}, {0, 0, 1}, -1.0, 0.5}, 2.0), DomainError);
    CHECK_THROWS_AS(cone_integral(Cone{{0, 0, 0}, {0, 0, 1}, 1.0, 2.0}, 2.0), DomainError);
}

TEST_CASE("lattice sampling integrates volumes") {
    // box volume is exact: the lattice tiles it
    QuadratureSet qb = sample_region(make_box({0, 0, 0}, {1.0, 0.5, 2.0}), 0.25);
    CHECK(qb.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

    QuadratureSet qs = sample_region(make_ball({0.3, -0.2, 0.1}, 1.0), 0.05);
    CHECK(qs.total_weight() ==
          doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.01));

    for (double w : qs.weights) CHECK(w == doctest::Approx(0.05 * 0.05 * 0.05));
    for (const Point3& p : qs.nodes) CHECK(contains(make_ball({0.3, -0.2, 0.1}, 1.0), p));

    CHECK_THROWS_AS(sample_region(make_ball({0, 0, 0}, 0.01), 0.5), EmptyRegionError);
    CHECK_THROWS_AS(sample_region(make_ball({0, 0, 0}, 1.0), -0.1), DomainError);
}

TEST_CASE("union sampling does not double-count overlapping parts") {
    Region u = make_union({make_ball({0, 0, 0}, 1.0), make_ball({0.5, 0, 0}, 1.0)});
    QuadratureSet q = sample_region(u, 0.04);
    // volume of two unit balls at center distance 0.5: 2 V - lens(0.5)
    double d = 0.5;
    double lens = std::numbers::pi * (4.0 + d) * std::pow(2.0 - d, 2) / 12.0;
    double expect = 2.0 * 4.0 * std::numbers::pi / 3.0 - lens;
    CHECK(q.total_weight() == doctest::Approx(expect).epsilon(0.01));
}
