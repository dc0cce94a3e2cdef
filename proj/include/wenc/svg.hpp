#pragma once

#include <string>
#include <vector>

#include "wenc/geometry.hpp"
#include "wenc/indicator.hpp"

namespace wenc {

// Scatter of (x, y) with an optional overlay polyline (same x grid) and a
// corner annotation. Self-contained SVG, no external references.
std::string svg_xy_plot(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>* overlay_y, const std::string& x_label,
                        const std::string& y_label, const std::string& title,
                        const std::string& annotation);

// Horizontal slice of the membership predicate at x3 = z over the window's
// x-y extent: cells where the predicate holds are filled, probe centers that
// project into the window are marked.
std::string svg_enclosure_slice(const EnclosurePredicate& pred, double z, const Box& window,
                                int resolution, const std::string& title);

} // namespace wenc
