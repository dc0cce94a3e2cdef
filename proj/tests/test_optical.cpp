#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "wenc/errors.hpp"
#include "wenc/optical.hpp"

using namespace wenc;

namespace {

double snell_residual(const Point3& x, const Point3& y, const Vec2& z, const TwoLayer& g) {
    double dm = std::hypot(z.x - x.x, z.y - x.y);
    double dp = std::hypot(z.x - y.x, z.y - y.y);
    double gm = std::sqrt(dm * dm + x.z * x.z);
    double gp = std::sqrt(dp * dp + y.z * y.z);
    return std::fabs(dm / gm / std::sqrt(g.gamma_minus) - dp / gp / std::sqrt(g.gamma_plus));
}

// critical-cone radius around x' on the interface
double aperture_radius(const Point3& x, const TwoLayer& g) {
    double a0 = std::sqrt(g.gamma_minus / g.gamma_plus);
    return -x.z * a0 / std::sqrt(1.0 - a0 * a0);
}

} // namespace

TEST_CASE("vertical pair bends nowhere") {
    TwoLayer g{4.0, 1.0};
    Vec2 z = snell_point({0, 0, -1}, {0, 0, 2}, g);
    CHECK(z.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(z.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(optical_distance({0, 0, -1}, {0, 0, 2}, g) ==
          doctest::Approx(1.0 / 1.0 + 2.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("vertical pair closed form for several layer contrasts") {
    auto g = oracle::rng(42);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int i = 0; i < 20; ++i) {
        TwoLayer lay = oracle::random_layers(g);
        double a = u(g), b = u(g);
        double want = a / std::sqrt(lay.gamma_minus) + b / std::sqrt(lay.gamma_plus);
        CHECK(optical_distance({0.3, -0.7, -a}, {0.3, -0.7, b}, lay) ==
              doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("half-space preconditions") {
    TwoLayer g{1.0, 4.0};
    CHECK_THROWS_AS(snell_point({0, 0, 1}, {0, 0, 2}, g), DomainError);
    CHECK_THROWS_AS(snell_point({0, 0, -1}, {0, 0, -2}, g), DomainError);
    CHECK_THROWS_AS(optical_distance({0, 0, 0}, {0, 0, 2}, g), DomainError);
    CHECK_THROWS_AS(broken_ray_time({0, 0, -1}, {0, 0, 0}, Vec2{0, 0}, g), DomainError);
    CHECK_THROWS_AS(snell_point({0, 0, -1}, {0, 0, 2}, TwoLayer{-1.0, 2.0}), DomainError);
}

TEST_CASE("crossing point matches segment brute force and obeys the bend law") {
    auto g = oracle::rng(7);
    for (int i = 0; i < 200; ++i) {
        Point3 x = oracle::random_below(g);
        Point3 y = oracle::random_above(g);
        TwoLayer lay = oracle::random_layers(g);
        Vec2 z = snell_point(x, y, lay);
        Vec2 zb = oracle::brute_force_crossing(
            x, y, lay, [&](const Vec2& q) { return broken_ray_time(x, y, q, lay); });
        CHECK(std::hypot(z.x - zb.x, z.y - zb.y) <= 1e-6);
        CHECK(snell_residual(x, y, z, lay) <= 1e-10);
        // the crossing lies on the segment between the horizontal projections
        Vec2 a{x.x, x.y}, b{y.x, y.y};
        double seg = std::hypot(b.x - a.x, b.y - a.y);
        double t = seg == 0.0 ? 0.0 : ((z.x - a.x) * (b.x - a.x) + (z.y - a.y) * (b.y - a.y)) /
                                          (seg * seg);
        CHECK(t >= -1e-12);
        CHECK(t <= 1.0 + 1e-12);
        double off = std::fabs((z.x - a.x) * (b.y - a.y) - (z.y - a.y) * (b.x - a.x));
        CHECK(off <= 1e-9 * std::max(1.0, seg));
    }
}

TEST_CASE("travel time is minimal over random crossings") {
    auto g = oracle::rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    Point3 x{0.4, -0.2, -1.3}, y{-0.8, 1.1, 0.9};
    TwoLayer lay{2.0, 0.7};
    double l = optical_distance(x, y, lay);
    for (int i = 0; i < 100; ++i) {
        Vec2 z{u(g), u(g)};
        CHECK(l <= broken_ray_time(x, y, z, lay) + 1e-13);
    }
}

TEST_CASE("travel time grows with source depth") {
    TwoLayer lay{3.0, 1.2};
    Point3 y{1.0, 0.5, 1.4};
    double prev = 0.0;
    for (double depth : {0.3, 0.6, 1.1, 2.0, 3.5}) {
        double l = optical_distance({-0.6, 0.2, -depth}, y, lay);
        CHECK(l > prev);
        prev = l;
    }
}

TEST_CASE("equal layer speeds degenerate to the straight ray") {
    TwoLayer lay{2.25, 2.25};
    Point3 x{0.5, -1.0, -2.0}, y{-0.5, 2.0, 1.0};
    double straight = norm(y - x) / 1.5;
    CHECK(optical_distance(x, y, lay) == doctest::Approx(straight).epsilon(1e-12));
}

TEST_CASE("guided travel time branches") {
    auto g = oracle::rng(23);
    std::uniform_real_distribution<double> ang(0.0, 2 * 3.14159265358979);
    std::uniform_real_distribution<double> mag(0.0, 0.95);
    int outside_checked = 0;
    for (int i = 0; i < 500; ++i) {
        Point3 x = oracle::random_below(g);
        Point3 y = oracle::random_above(g);
        TwoLayer lay = oracle::random_layers(g);
        if (!(lay.gamma_plus > lay.gamma_minus)) std::swap(lay.gamma_plus, lay.gamma_minus);
        double ap = aperture_radius(x, lay);
        double th = ang(g);
        // half the draws inside the critical circle, half outside
        double r = (i % 2 == 0) ? mag(g) * ap : ap * (1.05 + 3.0 * mag(g));
        Vec2 z{x.x + r * std::cos(th), x.y + r * std::sin(th)};
        double lt = evanescent_travel_time(x, y, z, lay);
        double full = broken_ray_time(x, y, z, lay);
        if (i % 2 == 0) {
            CHECK(lt == full); // in-aperture value is the exact broken-ray time
        } else {
            CHECK(lt < full);
            // decomposition through the critical-circle point on the segment x' -> z
            double sm = std::sqrt(lay.gamma_minus), sp = std::sqrt(lay.gamma_plus);
            double a0 = sm / sp;
            double tan0 = a0 / std::sqrt(1.0 - a0 * a0);
            Vec2 dir{(z.x - x.x) / r, (z.y - x.y) / r};
            double reach = -x.z * tan0;
            Vec2 z0{x.x + reach * dir.x, x.y + reach * dir.y};
            double leg_down = std::sqrt(reach * reach + x.z * x.z) / sm;
            double run = (r - reach) / sp;
            double leg_up = std::hypot(std::hypot(z.x - y.x, z.y - y.y), y.z) / sp;
            CHECK(lt == doctest::Approx(leg_down + run + leg_up).epsilon(1e-12));
            ++outside_checked;
        }
    }
    CHECK(outside_checked == 250);
}

TEST_CASE("guided travel time is continuous at the critical circle") {
    TwoLayer lay{3.0, 1.0}; // fast layer above
    Point3 x{0.2, -0.4, -1.7}, y{-1.0, 0.8, 1.1};
    double ap = aperture_radius(x, lay);
    for (double th : {0.0, 1.1, 2.9, 4.4}) {
        Vec2 z{x.x + ap * std::cos(th), x.y + ap * std::sin(th)};
        double lt = evanescent_travel_time(x, y, z, lay);
        CHECK(lt == doctest::Approx(broken_ray_time(x, y, z, lay)).epsilon(1e-8));
    }
}

TEST_CASE("guided travel time needs a faster upper layer") {
    CHECK_THROWS_AS(evanescent_travel_time({0, 0, -1}, {0, 0, 1}, Vec2{0, 0}, TwoLayer{1.0, 4.0}),
                    DomainError);
    CHECK_THROWS_AS(min_evanescent_time({0, 0, -1}, {0, 0, 1}, TwoLayer{2.0, 2.0}), DomainError);
}

TEST_CASE("guided minimum reproduces the refracted distance and crossing") {
    auto g = oracle::rng(31);
    for (int i = 0; i < 50; ++i) {
        Point3 x = oracle::random_below(g);
        Point3 y = oracle::random_above(g);
        TwoLayer lay = oracle::random_layers(g);
        if (!(lay.gamma_plus > lay.gamma_minus)) std::swap(lay.gamma_plus, lay.gamma_minus);
        EvanescentMin m = min_evanescent_time(x, y, lay);
        CHECK(std::fabs(m.value - optical_distance(x, y, lay)) <= 1e-8);
        Vec2 z = snell_point(x, y, lay);
        CHECK(std::hypot(m.argmin.x - z.x, m.argmin.y - z.y) <= 1e-4);
    }
}

TEST_CASE("guided minimum near the critical incidence") {
    // geometry whose refracted ray meets the interface almost critically
    TwoLayer lay{4.0, 1.0}; // fast layer above
    Point3 x{0, 0, -0.2};
    Point3 y{3.0, 0, 2.5};
    OpticalPath p = make_optical_path(x, y, lay);
    double a0 = std::sqrt(lay.gamma_minus / lay.gamma_plus);
    CHECK(std::fabs(p.sin_minus - a0) < 0.2); // close to critical
    EvanescentMin m = min_evanescent_time(x, y, lay);
    CHECK(std::fabs(m.value - p.length) <= 1e-6);
}

TEST_CASE("bend-point curvature closed form for vertical geometry") {
    TwoLayer lay{3.0, 1.5};
    double a = 1.2, b = 1.9;
    Hessian2 H = snell_hessian({0, 0, -a}, {0, 0, b}, lay);
    double want = 1.0 / (a * std::sqrt(lay.gamma_minus)) + 1.0 / (b * std::sqrt(lay.gamma_plus));
    CHECK(H.h11 == doctest::Approx(want).epsilon(1e-12));
    CHECK(H.h22 == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::fabs(H.h12) <= 1e-14);
    CHECK(H.det() == doctest::Approx(want * want).epsilon(1e-12));
}

TEST_CASE("bend-point curvature matches finite differences") {
    auto g = oracle::rng(57);
    for (int i = 0; i < 40; ++i) {
        Point3 x = oracle::random_below(g);
        Point3 y = oracle::random_above(g);
        TwoLayer lay = oracle::random_layers(g);
        Vec2 z = snell_point(x, y, lay);
        Hessian2 H = snell_hessian(x, y, lay);
        CHECK(H.det() > 0.0);
        double h = 1e-4;
        auto f = [&](double u, double v) { return broken_ray_time(x, y, Vec2{u, v}, lay); };
        double f0 = f(z.x, z.y);
        double d11 = (f(z.x + h, z.y) - 2 * f0 + f(z.x - h, z.y)) / (h * h);
        double d22 = (f(z.x, z.y + h) - 2 * f0 + f(z.x, z.y - h)) / (h * h);
        double d12 = (f(z.x + h, z.y + h) - f(z.x + h, z.y - h) - f(z.x - h, z.y + h) +
                      f(z.x - h, z.y - h)) /
                     (4 * h * h);
        double scale = std::fabs(H.h11) + std::fabs(H.h22);
        CHECK(std::fabs(H.h11 - d11) <= 1e-5 * scale);
        CHECK(std::fabs(H.h22 - d22) <= 1e-5 * scale);
        CHECK(std::fabs(H.h12 - d12) <= 1e-5 * scale);
    }
}

TEST_CASE("region distance for coaxial balls") {
    TwoLayer lay{1.0, 4.0}; // slow layer below carries the long leg
    Region D = make_ball({0, 0, -3}, 1.0);
    Region B = make_ball({0, 0, 2}, 0.5);
    RegionPairDistance r = min_optical_distance(D, B, lay);
    CHECK(r.length == doctest::Approx(2.0 / 2.0 + 1.5 / 1.0).epsilon(1e-9));
    CHECK(std::hypot(r.x.x, r.x.y) <= 1e-6);
    CHECK(r.x.z == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(r.y.z == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("region distance is a lower bound over sampled pairs") {
    TwoLayer lay{2.5, 0.8};
    Region D = make_ball({0.7, -0.4, -2.2}, 0.8);
    Region B = make_box({-1.5, -1.0, 0.6}, {-0.3, 0.2, 1.4});
    RegionPairDistance r = min_optical_distance(D, B, lay);
    auto g = oracle::rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        Point3 p{0.7 + 0.8 * u(g), -0.4 + 0.8 * u(g), -2.2 + 0.8 * u(g)};
        if (!contains(D, p)) continue;
        Point3 q{-0.9 + 0.6 * u(g), -0.4 + 0.6 * u(g), 1.0 + 0.4 * u(g)};
        if (!contains(B, q)) continue;
        CHECK(r.length <= optical_distance(p, q, lay) + 1e-9);
    }
    CHECK(optical_distance(r.x, r.y, lay) == doctest::Approx(r.length).epsilon(1e-10));
}

TEST_CASE("region distance matches a boundary grid search") {
    TwoLayer lay{1.0, 2.0};
    Region D = make_ball({0.5, 0.3, -1.8}, 0.6);
    Region B = make_ball({-0.7, 0.9, 1.2}, 0.4);
    RegionPairDistance r = min_optical_distance(D, B, lay);
    // scan the lower sphere with the upper endpoint fixed at the reported pair,
    // then refine around the best cell to squeeze out the angular grid error
    auto at = [&](double th, double ph) {
        Point3 p{0.5 + 0.6 * std::sin(th) * std::cos(ph),
                 0.3 + 0.6 * std::sin(th) * std::sin(ph), -1.8 + 0.6 * std::cos(th)};
        return optical_distance(p, r.y, lay);
    };
    const double pi = 3.14159265358979;
    double best = 1e300, bth = 0, bph = 0;
    const int n = 60;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < 2 * n; ++j) {
            double v = at(pi * i / n, pi * j / n);
            if (v < best) { best = v; bth = pi * i / n; bph = pi * j / n; }
        }
    double sth = pi / n, sph = pi / n;
    for (int level = 0; level < 6; ++level) {
        double cth = bth, cph = bph;
        for (int i = -8; i <= 8; ++i)
            for (int j = -8; j <= 8; ++j) {
                double v = at(cth + i * sth / 8, cph + j * sph / 8);
                if (v < best) { best = v; bth = cth + i * sth / 8; bph = cph + j * sph / 8; }
            }
        sth /= 8;
        sph /= 8;
    }
    CHECK(r.length <= best + 1e-10);
    CHECK(best - r.length <= 1e-6);
}
