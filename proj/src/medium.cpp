#include "wenc/medium.hpp"

#include <cmath>

namespace wenc {

double background_at(const BackgroundSpec& bg, const Point3& p) {
    if (std::holds_alternative<Homogeneous>(bg)) return 1.0;
    const auto& tl = std::get<TwoLayer>(bg);
    return p.z > 0.0 ? tl.gamma_plus : tl.gamma_minus;
}

Diag3 gamma_at(const MediumField& m, const Point3& p) {
    if (m.inclusion && contains(m.inclusion->region, p)) return m.inclusion->gamma;
    return Diag3::iso(background_at(m.background, p));
}

double max_wave_speed(const MediumField& m) {
    double g = 1.0;
    if (const auto* tl = std::get_if<TwoLayer>(&m.background))
        g = std::max(tl->gamma_plus, tl->gamma_minus);
    if (m.inclusion) g = std::max(g, m.inclusion->gamma.max());
    return std::sqrt(g);
}

Monotonicity check_monotonicity(const MediumField& m) {
    if (!m.inclusion) throw NoInclusionError("medium has no inclusion to classify");
    // The inclusion sits entirely on one side of the interface, so the
    // reference value is the background at any of its points.
    Box bb = bounding_box(m.inclusion->region);
    Point3 inside{0.5 * (bb.lo.x + bb.hi.x), 0.5 * (bb.lo.y + bb.hi.y), 0.5 * (bb.lo.z + bb.hi.z)};
    double ref = background_at(m.background, inside);
    const Diag3& g = m.inclusion->gamma;
    if (g.min() > ref) return Monotonicity::Plus;
    if (g.max() < ref) return Monotonicity::Minus;
    return Monotonicity::Violated;
}

std::vector<std::string> validate(const MediumField& m, const Region& source_region) {
    std::vector<std::string> issues;

    try {
        validate_region(source_region);
    } catch (const Error& e) {
        issues.push_back(std::string("source region: ") + e.what());
        return issues;
    }

    if (const auto* tl = std::get_if<TwoLayer>(&m.background)) {
        if (!(tl->gamma_plus > 0.0) || !(tl->gamma_minus > 0.0))
            issues.push_back("layer coefficients must be positive");
        if (tl->gamma_plus == tl->gamma_minus)
            issues.push_back("layer coefficients must differ (use the homogeneous background otherwise)");
        Box sb = bounding_box(source_region);
        if (!(sb.lo.z > 0.0))
            issues.push_back("source region must lie strictly above the interface plane");
    }

    if (m.inclusion) {
        try {
            validate_region(m.inclusion->region);
        } catch (const Error& e) {
            issues.push_back(std::string("inclusion region: ") + e.what());
            return issues;
        }
        if (!(m.inclusion->gamma.min() > 0.0))
            issues.push_back("inclusion coefficient entries must be positive");
        try {
            dist_sets(m.inclusion->region, source_region);
        } catch (const OverlapError&) {
            issues.push_back("inclusion and source closures must be disjoint");
        }
        if (std::holds_alternative<TwoLayer>(m.background)) {
            Box ib = bounding_box(m.inclusion->region);
            if (!(ib.hi.z < 0.0))
                issues.push_back("inclusion must lie strictly below the interface plane");
        }
    }

    return issues;
}

} // namespace wenc
