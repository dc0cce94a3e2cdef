#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wenc {

// Base class for all library errors so callers can catch everything in one place.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two regions whose closures must be disjoint intersect.
struct OverlapError : Error {
    explicit OverlapError(const std::string& msg) : Error(msg) {}
};

// An argument lies outside the mathematical domain of the operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A sampling request produced no nodes.
struct EmptyRegionError : Error {
    explicit EmptyRegionError(const std::string& msg) : Error(msg) {}
};

// A medium query that requires an inclusion was made on a background-only field.
struct NoInclusionError : Error {
    explicit NoInclusionError(const std::string& msg) : Error(msg) {}
};

// Validation failures collected into one report.
struct ValidationError : Error {
    std::vector<std::string> issues;
    explicit ValidationError(std::vector<std::string> list)
        : Error(join(list)), issues(std::move(list)) {}
    static std::string join(const std::vector<std::string>& list) {
        std::string s = "validation failed:";
        for (const auto& e : list) { s += "\n  - "; s += e; }
        return s;
    }
};

// Time step too large for the stability bound; carries the largest admissible dt.
struct CflViolation : Error {
    double dt_given;
    double dt_max;
    CflViolation(double given, double max_dt)
        : Error("dt " + std::to_string(given) + " exceeds stability bound " + std::to_string(max_dt)),
          dt_given(given), dt_max(max_dt) {}
};

// Grid too small for the requested run; carries the clearance that would comply.
struct PaddingViolation : Error {
    double clearance_given;
    double clearance_needed;
    PaddingViolation(double given, double needed)
        : Error("grid clearance " + std::to_string(given) + " below required " + std::to_string(needed)),
          clearance_given(given), clearance_needed(needed) {}
};

// Iterative solve did not reach the requested tolerance.
struct NoConvergence : Error {
    int iterations;
    double residual;
    NoConvergence(int iters, double resid)
        : Error("solver stopped after " + std::to_string(iters) +
                " iterations with relative residual " + std::to_string(resid)),
          iterations(iters), residual(resid) {}
};

// Decay-rate fit: every series value fell below the numeric floor.
struct AllBelowFloor : Error {
    explicit AllBelowFloor(const std::string& msg) : Error(msg) {}
};

// Decay-rate fit: no suffix window met the residual threshold.
struct WindowEmpty : Error {
    explicit WindowEmpty(const std::string& msg) : Error(msg) {}
};

// Malformed configuration file or inconsistent option set.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace wenc
