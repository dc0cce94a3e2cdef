#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wenc/forward.hpp"
#include "wenc/geometry.hpp"
#include "wenc/medium.hpp"

namespace wenc {

// Indicator values over an ascending decay-rate grid. `tag` carries the
// inclusion's monotonicity class ("monotone-plus", "monotone-minus" or
// "none"); `config_hash` ties the series to the run that produced it.
struct IndicatorSeries {
    std::vector<double> taus;
    std::vector<double> values;
    double horizon = 0.0;           // observation time T
    std::string variant;            // "standard" or "tilde"
    std::string tag;
    std::uint64_t config_hash = 0;
};

// Three-parameter decay fit log|I| = -2 L tau + p log(tau) + c.
struct SlopeFit {
    double length = 0.0;            // L
    double power = 0.0;             // p
    double offset = 0.0;            // c
    double rms = 0.0;               // per-point residual over the window
    std::size_t window_begin = 0;   // index into the original series
    std::size_t window_size = 0;
    std::vector<std::size_t> dropped;  // indices under the magnitude floor
};

struct SignReport {
    bool pass = false;
    std::string tag;                // class the check ran against
    double first_violation_tau = 0.0;  // zero when pass
    std::size_t checked = 0;        // zero when the check was not applicable
};

// One probe's extracted length, feeding the enclosure intersection.
struct ProbeResult {
    Point3 p;            // probe region center
    double r = 0.0;      // probe region radius
    double length = 0.0; // extracted shortest length to the inclusion
};

// Intersection-of-complements membership test: a point survives when every
// probe certifies it farther away than the probe's extracted length. For a
// two-layered background the metric is the refracted travel time and only
// the lower half-space can be enclosed.
struct EnclosurePredicate {
    std::vector<ProbeResult> probes;
    BackgroundSpec background;

    bool contains(const Point3& x) const;
};

// Damped time integral of every trace column: trapezoid over the step grid
// of e^{-tau t} u(t, x_q).
std::vector<double> laplace_transform_traces(const TraceSet& tr, double tau);

// Quadrature of f (w - v) over the source region; w and v are node values on
// source_quad.
double indicator(const std::vector<double>& w_values, const std::vector<double>& v_values,
                 const SourceSpec& s, const QuadratureSet& source_quad, double tau);

// Damped space-time integral of f (u - u0) over the traces' common window.
// Requires matching node sets and steps; the runs may differ in length, the
// integral covers the shorter one.
double indicator_tilde(const TraceSet& tr_u, const TraceSet& tr_u0, const SourceSpec& s,
                       const QuadratureSet& source_quad, double tau);

// Widest-suffix least-squares fit of the decay model. Points at or under
// the magnitude floor 1e-300 are dropped and reported; the window grows from
// the large-tau end and stops at the widest suffix whose rms residual stays
// within `residual_threshold`. Throws AllBelowFloor when nothing is left and
// WindowEmpty when no window of at least four points qualifies.
SlopeFit extract_length(const IndicatorSeries& series, double residual_threshold = 0.05);

// Sign law over the fitted window: values strictly negative for
// "monotone-plus", strictly positive for "monotone-minus", starting at
// window_begin. A series with no inclusion class reports checked = 0.
SignReport sign_check(const IndicatorSeries& series, const std::string& tag,
                      std::size_t window_begin);

// Kendall rank correlation (tau-a) of a sequence against its own index:
// +1 strictly increasing, -1 strictly decreasing, ties contribute zero.
double kendall_tau(const std::vector<double>& values);

// Validates probe data and binds it to the background metric.
EnclosurePredicate enclosure(std::vector<ProbeResult> probes, const BackgroundSpec& background);

// Boundary points of the predicate region: rays from an interior anchor are
// marched outward and bisected onto the first membership flip. Directions
// with no flip within r_max contribute nothing.
std::vector<Point3> sample_enclosure_boundary(const EnclosurePredicate& pred, const Point3& anchor,
                                              double r_max, int directions);

// Log-spaced decay-rate grid, endpoints included.
std::vector<double> log_spaced_taus(double lo, double hi, int n);

// End-to-end experiment: forward runs with and without the inclusion, both
// indicator series over the tau grid, decay fit, and sign check.
struct PipelineConfig {
    MediumField medium;
    SourceSpec source;
    double T = 4.0;
    double h = 0.06;
    double cfl_safety = 0.9;
    double pad_slack = 0.5;
    // Extra background-run duration feeding the standard indicator's
    // time-tail correction; negative means T again.
    double tail_horizon = -1.0;
    std::vector<double> taus;  // empty selects 16 log-spaced points in [2, 16]
    int threads = 1;
    std::uint64_t config_hash = 0;
};

struct PipelineResult {
    GridSpec grid;
    IndicatorSeries standard;
    IndicatorSeries tilde;
    SlopeFit fit;              // fitted on the tilde series
    std::string fit_error;     // nonempty when the fit was impossible
    SignReport sign;           // standard series over the fitted window
    // tau * e^{tau T} |standard - tilde| / ||f||^2 per grid point, assembled
    // with the exponential cancelled analytically.
    std::vector<double> equivalence;
    double f_norm_sq = 0.0;
    std::string tag;
};

PipelineResult run_probe_pipeline(const PipelineConfig& cfg);

} // namespace wenc
