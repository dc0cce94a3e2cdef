#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wenc/geometry.hpp"

namespace wenc {

// Background coefficient: identity everywhere.
struct Homogeneous {};

// Piecewise-constant background, gamma_plus for x3 > 0 and gamma_minus for
// x3 < 0.  The interface plane x3 = 0 is assigned the lower-half value.
struct TwoLayer {
    double gamma_plus = 1.0;
    double gamma_minus = 1.0;
};

using BackgroundSpec = std::variant<Homogeneous, TwoLayer>;

// Diagonal 3x3 coefficient (isotropic when all entries agree).
struct Diag3 {
    double d[3] = {1.0, 1.0, 1.0};

    static Diag3 iso(double v) { return Diag3{{v, v, v}}; }
    double min() const { return std::min(d[0], std::min(d[1], d[2])); }
    double max() const { return std::max(d[0], std::max(d[1], d[2])); }
};

struct InclusionSpec {
    Region region;
    Diag3 gamma;
};

// Coefficient field of the whole medium: background plus optional inclusion.
struct MediumField {
    BackgroundSpec background;
    std::optional<InclusionSpec> inclusion;
};

enum class Monotonicity { Plus, Minus, Violated };

// Background value at p (lower value on the interface plane itself).
double background_at(const BackgroundSpec& bg, const Point3& p);

// Full coefficient at p; the inclusion value wins inside the inclusion.
Diag3 gamma_at(const MediumField& m, const Point3& p);

// Largest wave speed sqrt(gamma) over the whole medium.
double max_wave_speed(const MediumField& m);

// Classifies the inclusion jump against the background value on the
// inclusion's side.  Throws NoInclusionError when there is no inclusion.
Monotonicity check_monotonicity(const MediumField& m);

// Collects configuration problems (overlap, interface-side violations,
// non-positive coefficients).  Returns an empty list when the pair is usable.
std::vector<std::string> validate(const MediumField& m, const Region& source_region);

} // namespace wenc
