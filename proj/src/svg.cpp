#include "wenc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wenc/errors.hpp"

namespace wenc {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void escape_text(std::string& out, const std::string& s) {
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    double pix0 = 0.0, pix1 = 1.0;

    double map(double v) const { return pix0 + (v - lo) / (hi - lo) * (pix1 - pix0); }
};

void expand(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

void draw_frame(std::string& svg, const Axis& ax, const Axis& ay, const std::string& x_label,
                const std::string& y_label, const std::string& title) {
    svg += "<rect x='" + num(kMarginL) + "' y='" + num(kMarginT) + "' width='" +
           num(kWidth - kMarginL - kMarginR) + "' height='" + num(kHeight - kMarginT - kMarginB) +
           "' fill='white' stroke='black' stroke-width='1'/>\n";
    for (int t = 0; t <= 4; ++t) {
        double fx = ax.lo + (ax.hi - ax.lo) * t / 4.0;
        double px = ax.map(fx);
        svg += "<line x1='" + num(px) + "' y1='" + num(kHeight - kMarginB) + "' x2='" + num(px) +
               "' y2='" + num(kHeight - kMarginB + 5) + "' stroke='black'/>\n";
        svg += "<text x='" + num(px) + "' y='" + num(kHeight - kMarginB + 18) +
               "' font-size='11' text-anchor='middle'>" + tick_label(fx) + "</text>\n";
        double fy = ay.lo + (ay.hi - ay.lo) * t / 4.0;
        double py = ay.map(fy);
        svg += "<line x1='" + num(kMarginL - 5) + "' y1='" + num(py) + "' x2='" + num(kMarginL) +
               "' y2='" + num(py) + "' stroke='black'/>\n";
        svg += "<text x='" + num(kMarginL - 8) + "' y='" + num(py + 4) +
               "' font-size='11' text-anchor='end'>" + tick_label(fy) + "</text>\n";
    }
    svg += "<text x='" + num((kMarginL + kWidth - kMarginR) / 2) + "' y='" + num(kHeight - 12) +
           "' font-size='13' text-anchor='middle'>";
    escape_text(svg, x_label);
    svg += "</text>\n";
    svg += "<text x='16' y='" + num((kMarginT + kHeight - kMarginB) / 2) +
           "' font-size='13' text-anchor='middle' transform='rotate(-90 16 " +
           num((kMarginT + kHeight - kMarginB) / 2) + ")'>";
    escape_text(svg, y_label);
    svg += "</text>\n";
    svg += "<text x='" + num(kWidth / 2) + "' y='24' font-size='15' text-anchor='middle'>";
    escape_text(svg, title);
    svg += "</text>\n";
}

} // namespace

std::string svg_xy_plot(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>* overlay_y, const std::string& x_label,
                        const std::string& y_label, const std::string& title,
                        const std::string& annotation) {
    if (x.size() != y.size() || x.empty()) throw DomainError("plot needs matching nonempty series");
    if (overlay_y && overlay_y->size() != x.size())
        throw DomainError("overlay must match the x grid");

    double xlo = x[0], xhi = x[0], ylo = y[0], yhi = y[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
        xlo = std::min(xlo, x[i]);
        xhi = std::max(xhi, x[i]);
        if (std::isfinite(y[i])) {
            ylo = std::min(ylo, y[i]);
            yhi = std::max(yhi, y[i]);
        }
    }
    if (overlay_y)
        for (double v : *overlay_y)
            if (std::isfinite(v)) {
                ylo = std::min(ylo, v);
                yhi = std::max(yhi, v);
            }
    expand(xlo, xhi);
    expand(ylo, yhi);

    Axis ax{xlo, xhi, kMarginL, kWidth - kMarginR};
    Axis ay{ylo, yhi, kHeight - kMarginB, kMarginT}; // y grows upward

    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + num(kWidth) +
                      "' height='" + num(kHeight) + "' viewBox='0 0 " + num(kWidth) + " " +
                      num(kHeight) + "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    draw_frame(svg, ax, ay, x_label, y_label, title);

    if (x.size() > 1) {
        svg += "<polyline fill='none' stroke='#888888' stroke-width='1' points='";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(y[i])) continue;
            svg += num(ax.map(x[i])) + "," + num(ay.map(y[i])) + " ";
        }
        svg += "'/>\n";
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(y[i])) continue;
        svg += "<circle cx='" + num(ax.map(x[i])) + "' cy='" + num(ay.map(y[i])) +
               "' r='3' fill='#1f4e9c'/>\n";
    }
    if (overlay_y) {
        svg += "<polyline fill='none' stroke='#c0392b' stroke-width='1.5' stroke-dasharray='6 3' points='";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite((*overlay_y)[i])) continue;
            svg += num(ax.map(x[i])) + "," + num(ay.map((*overlay_y)[i])) + " ";
        }
        svg += "'/>\n";
    }
    if (!annotation.empty()) {
        svg += "<text x='" + num(kWidth - kMarginR - 8) + "' y='" + num(kMarginT + 18) +
               "' font-size='12' text-anchor='end' fill='#c0392b'>";
        escape_text(svg, annotation);
        svg += "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string svg_enclosure_slice(const EnclosurePredicate& pred, double z, const Box& window,
                                int resolution, const std::string& title) {
    if (resolution < 2 || resolution > 2000) throw DomainError("slice resolution out of range");
    if (!(window.hi.x > window.lo.x) || !(window.hi.y > window.lo.y))
        throw DomainError("slice window is degenerate");

    Axis ax{window.lo.x, window.hi.x, kMarginL, kWidth - kMarginR};
    Axis ay{window.lo.y, window.hi.y, kHeight - kMarginB, kMarginT};

    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + num(kWidth) +
                      "' height='" + num(kHeight) + "' viewBox='0 0 " + num(kWidth) + " " +
                      num(kHeight) + "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    draw_frame(svg, ax, ay, "x1", "x2", title);

    double dx = (window.hi.x - window.lo.x) / resolution;
    double dy = (window.hi.y - window.lo.y) / resolution;
    double pw = std::fabs(ax.map(dx) - ax.map(0.0));
    double ph = std::fabs(ay.map(0.0) - ay.map(dy));
    for (int j = 0; j < resolution; ++j) {
        // Run-length encode each row to keep the file small.
        int run_start = -1;
        double cy = window.lo.y + (j + 0.5) * dy;
        auto flush = [&](int end) {
            if (run_start < 0) return;
            double x0 = window.lo.x + run_start * dx;
            svg += "<rect x='" + num(ax.map(x0)) + "' y='" +
                   num(ay.map(cy) - ph / 2) + "' width='" + num(pw * (end - run_start)) +
                   "' height='" + num(ph) + "' fill='#9ecae1'/>\n";
            run_start = -1;
        };
        for (int i = 0; i < resolution; ++i) {
            double cx = window.lo.x + (i + 0.5) * dx;
            if (pred.contains({cx, cy, z})) {
                if (run_start < 0) run_start = i;
            } else {
                flush(i);
            }
        }
        flush(resolution);
    }

    for (const ProbeResult& pr : pred.probes) {
        if (pr.p.x < window.lo.x || pr.p.x > window.hi.x || pr.p.y < window.lo.y ||
            pr.p.y > window.hi.y)
            continue;
        svg += "<circle cx='" + num(ax.map(pr.p.x)) + "' cy='" + num(ay.map(pr.p.y)) +
               "' r='3' fill='none' stroke='#c0392b' stroke-width='1.5'/>\n";
    }
    svg += "<text x='" + num(kWidth - kMarginR - 8) + "' y='" + num(kMarginT + 18) +
           "' font-size='12' text-anchor='end'>slice x3 = " + tick_label(z) + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace wenc
