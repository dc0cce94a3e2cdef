#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wenc/forward.hpp"
#include "wenc/indicator.hpp"
#include "wenc/medium.hpp"

namespace wenc {

struct ProbeSpec {
    Point3 center;
    double radius = 0.0;
};

// Parsed experiment description. The text format is sectioned key = value
// lines; '#' starts a comment. Section and key names are fixed; anything
// unknown is rejected so typos cannot silently change an experiment.
struct ExperimentConfig {
    MediumField medium;
    std::optional<Region> source_region;
    double amplitude = 1.0;
    int sign = +1;
    double smoothing = 0.0;
    double h = 0.06;
    double cfl_safety = 0.9;
    double pad_slack = 0.5;
    double T = 4.0;
    double tail_horizon = -1.0;
    int threads = 1;
    std::vector<double> taus;       // empty selects the library default grid
    std::vector<ProbeSpec> probes;
    std::optional<Point3> anchor;   // survey boundary-march start override
    std::uint64_t hash = 0;         // config bytes plus applied overrides
};

// FNV-1a over the byte string; `seed` chains multiple inputs.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed = 14695981039346656037ull);

// Throws ConfigError with a line reference on any structural problem.
ExperimentConfig parse_config(const std::string& text);

// Region grammar shared with the config file:
//   ball cx cy cz r | box lx ly lz hx hy hz | union ( region , region ... )
Region parse_region_text(const std::string& text);

// Rebuilds the decay grid from command-line overrides (log-spaced between
// the effective endpoints) and folds the override into the hash.
void apply_tau_override(ExperimentConfig& cfg, std::optional<double> tau_min,
                        std::optional<double> tau_max, std::optional<int> tau_count);

// The emission described by [source]; requires a region.
SourceSpec make_source(const ExperimentConfig& cfg);

// Pipeline inputs for the configured source.
PipelineConfig make_pipeline(const ExperimentConfig& cfg);

// Pipeline inputs with one survey probe as the source.
PipelineConfig make_probe_pipeline(const ExperimentConfig& cfg, const ProbeSpec& probe);

} // namespace wenc
