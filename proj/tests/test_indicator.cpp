#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "wenc/errors.hpp"
#include "wenc/indicator.hpp"

using namespace wenc;

namespace {

TraceSet make_traces(std::size_t nodes, double dt, long steps,
                     const std::function<double(double, std::size_t)>& u) {
    TraceSet tr;
    for (std::size_t q = 0; q < nodes; ++q) {
        tr.quad.nodes.push_back({0.1 * static_cast<double>(q), 0, 0});
        tr.quad.weights.push_back(1.0);
    }
    tr.dt = dt;
    tr.steps = steps;
    tr.data.resize(static_cast<std::size_t>(steps + 1) * nodes);
    for (long k = 0; k <= steps; ++k)
        for (std::size_t q = 0; q < nodes; ++q)
            tr.data[static_cast<std::size_t>(k) * nodes + q] = u(k * dt, q);
    return tr;
}

IndicatorSeries synthetic_series(const std::vector<double>& taus, double L, double p, double c,
                                 int sign = +1) {
    IndicatorSeries s;
    s.taus = taus;
    for (double t : taus) s.values.push_back(sign * c * std::pow(t, p) * std::exp(-2 * L * t));
    s.horizon = 4.0;
    s.variant = "standard";
    return s;
}

} // namespace

TEST_CASE("damped trace integral") {
    // constant trace, dt small enough that the trapezoid error sits under 1e-8
    double tau = 2.0;
    TraceSet ones = make_traces(2, 5e-5, 20000, [](double, std::size_t) { return 1.0; });
    auto w = laplace_transform_traces(ones, tau);
    double want = (1 - std::exp(-tau * 1.0)) / tau;
    CHECK(w.size() == 2);
    CHECK(std::fabs(w[0] - want) <= 1e-8);
    CHECK(std::fabs(w[1] - want) <= 1e-8);

    double T = 2.0;
    tau = 3.0;
    auto ramp = [](double t, std::size_t) { return t; };
    double closed = (1 - std::exp(-tau * T) * (1 + tau * T)) / (tau * tau);
    TraceSet lin1 = make_traces(1, 0.02, 100, ramp);
    TraceSet lin2 = make_traces(1, 0.01, 200, ramp);
    double e1 = std::fabs(laplace_transform_traces(lin1, tau)[0] - closed);
    double e2 = std::fabs(laplace_transform_traces(lin2, tau)[0] - closed);
    CHECK(e1 <= 2 * tau * tau * lin1.dt * lin1.dt);
    CHECK(e1 / e2 > 3.5); // halving dt cuts the trapezoid error fourfold
    CHECK(e1 / e2 < 4.5);

    // nonnegative traces keep nonnegative transforms
    TraceSet bumps = make_traces(1, 0.05, 40, [](double t, std::size_t) {
        return std::max(0.0, std::sin(5 * t));
    });
    CHECK(laplace_transform_traces(bumps, 1.0)[0] >= 0.0);

    CHECK_THROWS_AS(laplace_transform_traces(ones, 0.5), DomainError);
}

TEST_CASE("indicator quadrature") {
    SourceSpec s{make_ball({0, 0, 0}, 1.0), 2.0, -1, 0.0};
    QuadratureSet q;
    q.nodes = {{0.1, 0, 0}, {0.3, 0, 0}, {0.5, 0, 0}};
    q.weights = {0.2, 0.3, 0.5};
    std::vector<double> w{1.0, 2.0, 3.0};
    std::vector<double> v{0.5, 1.0, 1.5};

    // f is -2 on every node, so the integral is -2 sum w_q (w - v)
    double want = -2.0 * (0.2 * 0.5 + 0.3 * 1.0 + 0.5 * 1.5);
    CHECK(indicator(w, v, s, q, 2.0) == doctest::Approx(want).epsilon(1e-15));
    CHECK(indicator(w, w, s, q, 2.0) == 0.0);

    std::vector<double> shorter{1.0, 2.0};
    CHECK_THROWS_AS(indicator(shorter, v, s, q, 2.0), DomainError);
    CHECK_THROWS_AS(indicator(w, v, s, q, 0.9), DomainError);
}

TEST_CASE("damped difference of trace sets") {
    SourceSpec s{make_ball({0, 0, 0}, 1.0), 1.0, +1, 0.0};
    double T = 1.5, tau = 2.0;
    TraceSet u = make_traces(2, 0.005, 300, [](double t, std::size_t) { return 1.0 + t; });
    TraceSet u0 = make_traces(2, 0.005, 300, [](double t, std::size_t) { return t; });

    // the difference is 1, so the integral is 2 nodes * (1 - e^{-tau T}) / tau
    double want = 2.0 * (1 - std::exp(-tau * T)) / tau;
    CHECK(indicator_tilde(u, u0, s, u.quad, tau) == doctest::Approx(want).epsilon(1e-4));
    CHECK(indicator_tilde(u, u, s, u.quad, tau) == 0.0);

    TraceSet other_dt = make_traces(2, 0.01, 150, [](double t, std::size_t) { return t; });
    CHECK_THROWS_AS(indicator_tilde(u, other_dt, s, u.quad, tau), DomainError);
    TraceSet fewer = make_traces(1, 0.005, 300, [](double t, std::size_t) { return t; });
    CHECK_THROWS_AS(indicator_tilde(u, fewer, s, u.quad, tau), DomainError);

    // runs of different length integrate over the shared window
    TraceSet longer = make_traces(2, 0.005, 400, [](double t, std::size_t) { return 1.0 + t; });
    CHECK(indicator_tilde(longer, u0, s, u.quad, tau) ==
          doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("decay fit recovery") {
    std::vector<double> taus = log_spaced_taus(2.0, 16.0, 16);
    IndicatorSeries s = synthetic_series(taus, 4.0, 2.0, 3.0);
    SlopeFit f = extract_length(s);
    CHECK(std::fabs(f.length - 4.0) <= 1e-6);
    CHECK(std::fabs(f.power - 2.0) <= 1e-6);
    CHECK(std::fabs(f.offset - std::log(3.0)) <= 1e-6);
    CHECK(f.window_size >= 8);
    CHECK(f.dropped.empty());
    CHECK(f.rms <= 1e-10);

    // sign does not matter, the fit sees |I|
    IndicatorSeries neg = synthetic_series(taus, 4.0, 2.0, 3.0, -1);
    CHECK(extract_length(neg).length == doctest::Approx(4.0).epsilon(1e-9));

    // multiplicative noise moves the estimate by its own order
    auto g = oracle::rng(5);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    IndicatorSeries noisy = s;
    for (double& v : noisy.values) v *= 1.0 + u(g);
    SlopeFit fn = extract_length(noisy);
    CHECK(std::fabs(fn.length - 4.0) <= 0.04);
}

TEST_CASE("decay fit guards") {
    std::vector<double> taus = log_spaced_taus(2.0, 16.0, 12);

    IndicatorSeries s = synthetic_series(taus, 4.0, 2.0, 3.0);
    s.values[0] = 1e-310;
    s.values[1] = 0.0;
    SlopeFit f = extract_length(s);
    CHECK(f.dropped == std::vector<std::size_t>{0, 1});
    CHECK(f.length == doctest::Approx(4.0).epsilon(1e-9));

    IndicatorSeries dead = s;
    for (double& v : dead.values) v = 0.0;
    CHECK_THROWS_AS(extract_length(dead), AllBelowFloor);

    // alternating wild values leave no 4-point suffix under the threshold
    IndicatorSeries wild = s;
    for (std::size_t i = 0; i < wild.values.size(); ++i)
        wild.values[i] = (i % 2 == 0) ? 1.0 : 1e-12;
    CHECK_THROWS_AS(extract_length(wild), WindowEmpty);

    IndicatorSeries unsorted = synthetic_series(taus, 4.0, 2.0, 3.0);
    std::swap(unsorted.taus[3], unsorted.taus[4]);
    CHECK_THROWS_AS(extract_length(unsorted), DomainError);

    IndicatorSeries low = synthetic_series(taus, 4.0, 2.0, 3.0);
    low.taus[0] = 0.5;
    CHECK_THROWS_AS(extract_length(low), DomainError);

    IndicatorSeries ragged = synthetic_series(taus, 4.0, 2.0, 3.0);
    ragged.values.pop_back();
    CHECK_THROWS_AS(extract_length(ragged), DomainError);

    CHECK_THROWS_AS(extract_length(s, -0.1), DomainError);
}

TEST_CASE("sign law report") {
    std::vector<double> taus = log_spaced_taus(2.0, 8.0, 8);
    IndicatorSeries neg = synthetic_series(taus, 1.0, 0.0, 2.0, -1);

    SignReport rep = sign_check(neg, "monotone-plus", 2);
    CHECK(rep.pass);
    CHECK(rep.checked == 6);
    CHECK(rep.first_violation_tau == 0.0);

    SignReport wrong = sign_check(neg, "monotone-minus", 2);
    CHECK_FALSE(wrong.pass);
    CHECK(wrong.first_violation_tau == taus[2]);

    IndicatorSeries pos = synthetic_series(taus, 1.0, 0.0, 2.0, +1);
    CHECK(sign_check(pos, "monotone-minus", 0).pass);
    CHECK_FALSE(sign_check(pos, "monotone-plus", 0).pass);

    SignReport none = sign_check(pos, "none", 0);
    CHECK(none.pass);
    CHECK(none.checked == 0);

    // a single flipped value in the window trips the check at that point
    IndicatorSeries mixed = neg;
    mixed.values[5] = 1e-9;
    SignReport trip = sign_check(mixed, "monotone-plus", 2);
    CHECK_FALSE(trip.pass);
    CHECK(trip.first_violation_tau == taus[5]);
    CHECK(trip.checked == 6);
}

TEST_CASE("rank trend statistic") {
    CHECK(kendall_tau({1, 2, 3, 4}) == 1.0);
    CHECK(kendall_tau({4, 3, 2, 1}) == -1.0);
    CHECK(kendall_tau({1, 1, 1}) == 0.0);
    CHECK(kendall_tau({1.0, 1.0, 2.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(kendall_tau({}) == 0.0);
    CHECK(kendall_tau({7.0}) == 0.0);
    CHECK(kendall_tau({2, 1, 3, 4}) == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("decay rate grids") {
    std::vector<double> taus = log_spaced_taus(2.0, 16.0, 16);
    CHECK(taus.size() == 16);
    CHECK(taus.front() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(taus.back() == doctest::Approx(16.0).epsilon(1e-15));
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        CHECK(taus[i] < taus[i + 1]);
        if (i + 2 < taus.size())
            CHECK(taus[i + 1] / taus[i] == doctest::Approx(taus[i + 2] / taus[i + 1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(log_spaced_taus(0.5, 8.0, 4), DomainError);
    CHECK_THROWS_AS(log_spaced_taus(4.0, 2.0, 4), DomainError);
    CHECK_THROWS_AS(log_spaced_taus(2.0, 8.0, 1), DomainError);
}

TEST_CASE("enclosure membership") {
    // single probe carves out one ball
    std::vector<ProbeResult> one{{{0, 0, 3}, 0.5, 1.5}};
    EnclosurePredicate pred = enclosure(one, Homogeneous{});
    CHECK(pred.contains({0, 0, 0}));
    CHECK_FALSE(pred.contains({0, 0, 1.5}));          // 1.5 from the probe < 2
    CHECK_FALSE(pred.contains({0, 0, 2.99}));
    CHECK(pred.contains({0, 0, 0.9}));                // 2.1 from the probe > 2

    // six axis probes around a unit ball, exact separations
    std::vector<ProbeResult> six;
    for (int ax = 0; ax < 3; ++ax)
        for (int sgn : {-1, 1}) {
            Point3 p{0, 0, 0};
            (ax == 0 ? p.x : ax == 1 ? p.y : p.z) = sgn * 2.5;
            six.push_back({p, 0.4, 1.1}); // dist(D, probe ball) = 2.5 - 1 - 0.4
        }
    EnclosurePredicate cage = enclosure(six, Homogeneous{});
    auto g = oracle::rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int inside = 0;
    for (int i = 0; i < 2000;) {
        Point3 x{u(g), u(g), u(g)};
        if (norm_sq(x) > 1.0) continue;
        ++i;
        if (cage.contains(x)) ++inside;
    }
    CHECK(inside == 2000); // the theorem guarantees set inclusion

    CHECK_THROWS_AS(enclosure({}, Homogeneous{}), DomainError);
    CHECK_THROWS_AS(enclosure({{{0, 0, 3}, 0.5, -1.0}}, Homogeneous{}), DomainError);
    CHECK_THROWS_AS(enclosure({{{0, 0, 3}, -0.5, 1.0}}, Homogeneous{}), DomainError);
}

TEST_CASE("layered enclosure uses the refracted metric") {
    TwoLayer bg{1.0, 4.0}; // gamma_plus first: fast lower half-space, speed 2
    // inclusion ball r=0.5 at (0,0,-2); probe ball r=0.5 at (0,0,2)
    // refracted separation: 1.5 / sqrt(4) + 1.5 / sqrt(1)
    double L = 1.5 / 2.0 + 1.5 / 1.0;
    std::vector<ProbeResult> probes{{{0, 0, 2}, 0.5, L}};
    EnclosurePredicate pred = enclosure(probes, bg);

    CHECK(pred.contains({0, 0, -2.0}));
    CHECK(pred.contains({0.3, -0.2, -2.1}));
    // directly above the inclusion, between it and the interface: too close
    CHECK_FALSE(pred.contains({0, 0, -0.5}));
    CHECK_FALSE(pred.contains({0, 0, -1.2}));
    // the upper half-space is never part of the reconstruction
    CHECK_FALSE(pred.contains({0, 0, 0.5}));
    CHECK_FALSE(pred.contains({0, 0, 0.0}));

    CHECK_THROWS_AS(enclosure({{{0, 0, -1}, 0.5, 1.0}}, bg), DomainError);
    CHECK_THROWS_AS(enclosure(probes, TwoLayer{-1.0, 4.0}), DomainError);
}

TEST_CASE("enclosure boundary sampler") {
    std::vector<ProbeResult> one{{{0, 0, 3}, 0.5, 1.5}};
    EnclosurePredicate pred = enclosure(one, Homogeneous{});
    auto pts = sample_enclosure_boundary(pred, {0, 0, 0}, 6.0, 300);
    CHECK(!pts.empty());
    CHECK(pts.size() < 300); // directions missing the excluded ball are open
    for (const Point3& x : pts)
        CHECK(norm(x - Point3{0, 0, 3}) == doctest::Approx(2.0).epsilon(1e-9));

    CHECK_THROWS_AS(sample_enclosure_boundary(pred, {0, 0, 3}, 6.0, 10), DomainError);
    CHECK_THROWS_AS(sample_enclosure_boundary(pred, {0, 0, 0}, -1.0, 10), DomainError);
    CHECK_THROWS_AS(sample_enclosure_boundary(pred, {0, 0, 0}, 6.0, 0), DomainError);
}

TEST_CASE("pipeline without an inclusion reports an empty fit") {
    PipelineConfig cfg;
    cfg.medium = MediumField{Homogeneous{}, std::nullopt};
    cfg.source = SourceSpec{make_ball({0, 0, 0}, 0.3), 1.0, +1, 0.0};
    cfg.T = 1.0;
    cfg.h = 0.12;
    cfg.pad_slack = 0.1;
    cfg.taus = {2.0, 3.0, 4.0, 5.0};

    PipelineResult res = run_probe_pipeline(cfg);
    CHECK(res.tag == "none");
    // both runs solve the same problem, so the damped difference vanishes
    // exactly and the fit has nothing to work with
    for (double v : res.tilde.values) CHECK(v == 0.0);
    CHECK(res.fit_error.find("floor") != std::string::npos);
    CHECK(res.sign.pass);
    CHECK(res.sign.checked == 0);
    CHECK(res.standard.taus == cfg.taus);
    CHECK(res.tilde.taus == cfg.taus);
    CHECK(res.standard.horizon == cfg.T);
    CHECK(res.standard.variant == "standard");
    CHECK(res.tilde.variant == "tilde");
    CHECK(res.equivalence.size() == cfg.taus.size());
    for (double v : res.equivalence) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    CHECK(res.f_norm_sq > 0.0);
}

TEST_CASE("pipeline validations") {
    PipelineConfig cfg;
    cfg.medium = MediumField{Homogeneous{}, std::nullopt};
    cfg.source = SourceSpec{make_ball({0, 0, 0}, 0.3), 1.0, +1, 0.0};
    cfg.T = 1.0;
    cfg.h = 0.12;
    cfg.pad_slack = 0.1;

    PipelineConfig bad = cfg;
    bad.taus = {4.0, 3.0};
    CHECK_THROWS_AS(run_probe_pipeline(bad), DomainError);
    bad.taus = {0.5, 3.0};
    CHECK_THROWS_AS(run_probe_pipeline(bad), DomainError);
    bad = cfg;
    bad.T = -1.0;
    CHECK_THROWS_AS(run_probe_pipeline(bad), DomainError);
    bad = cfg;
    bad.medium.inclusion = InclusionSpec{make_ball({0, 0, 0.2}, 0.4), Diag3::iso(2.0)};
    CHECK_THROWS_AS(run_probe_pipeline(bad), ValidationError); // overlaps the source
}
