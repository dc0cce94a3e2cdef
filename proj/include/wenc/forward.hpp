#pragma once

#include <optional>
#include <vector>

#include "wenc/grid.hpp"
#include "wenc/medium.hpp"

namespace wenc {

// Volumetric emission: f = sign * amplitude inside the region, zero outside.
// A positive smoothing width replaces the sharp edge by a cubic ramp of that
// width just inside the boundary (off by default; the sharp profile is the
// reference setup).
struct SourceSpec {
    Region region;
    double amplitude = 1.0;
    int sign = +1;
    double smoothing = 0.0;

    double value_at(const Point3& p) const;
};

// Time series of the field at a fixed node set; row k holds time k * dt.
struct TraceSet {
    QuadratureSet quad;
    double dt = 0.0;
    long steps = 0;
    std::vector<double> data; // (steps + 1) rows, quad.size() columns

    double at(long k, std::size_t node) const { return data[k * quad.size() + node]; }
    long rows() const { return steps + 1; }
};

struct EnergySeries {
    std::vector<double> times;  // half-step instants
    std::vector<double> values;
};

struct SimOptions {
    int threads = 1;
    long energy_every = 0;      // 0 disables energy recording
    // Portion of the run that must stay free of wall reflections at the
    // recorded nodes; negative means the full duration.  Runs extended past
    // this horizon capture the reflections deliberately.
    double causality_horizon = -1.0;
};

struct SimResult {
    TraceSet traces;
    EnergySeries energy;
};

struct CflReport {
    bool ok = false;
    double c_max = 0.0;
    double dt_max = 0.0;  // largest admissible step for this grid and medium
};

// Stability bound dt <= 0.9 h / (sqrt(3) c_max).
CflReport cfl_check(const GridSpec& g, const MediumField& m);

// Grid sized for a wave run: the box around the source and inclusion, padded
// on all sides by c_max (T + pad_slack) / 2 so boundary reflections cannot
// reach the recorded nodes before T (and only pad_slack/2 later).
GridSpec build_wave_grid(const MediumField& m, const Region& source_region, double T,
                         double h, double cfl_safety = 0.9, double pad_slack = 0.5);

// Cell centers of g lying inside the region, weighted by cell volume.
QuadratureSet grid_aligned_quadrature(const GridSpec& g, const Region& r);

// Leapfrog evolution of u_tt = div(gamma grad u) from rest with velocity f,
// recording the field at the given nodes every step.  Checks configuration,
// stability, and padding before running.
SimResult simulate(const MediumField& m, const SourceSpec& s, const GridSpec& g,
                   const QuadratureSet& record_nodes, const SimOptions& opts = {});

// Conserved quantity of the scheme for a consecutive field pair:
// (h^3 / 2) sum ((next - prev) / dt)^2 plus the cross-time flux form.
double discrete_energy(const GridSpec& g, const FaceField& f, const std::vector<double>& prev,
                       const std::vector<double>& next, int threads = 1);

} // namespace wenc
