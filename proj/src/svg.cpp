#include "tfwave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tfwave {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// piecewise-linear ramp through dark blue / teal / green / yellow
void ramp_color(double t, int& r, int& g, int& b) {
    struct Anchor {
        double t;
        int r, g, b;
    };
    static const Anchor anchors[] = {{0.00, 68, 1, 84},
                                     {0.25, 59, 82, 139},
                                     {0.50, 33, 145, 140},
                                     {0.75, 94, 201, 98},
                                     {1.00, 253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    for (int i = 0; i < 4; ++i) {
        if (t <= anchors[i + 1].t) {
            const double s = (t - anchors[i].t) / (anchors[i + 1].t - anchors[i].t);
            r = static_cast<int>(std::lround(anchors[i].r + s * (anchors[i + 1].r - anchors[i].r)));
            g = static_cast<int>(std::lround(anchors[i].g + s * (anchors[i + 1].g - anchors[i].g)));
            b = static_cast<int>(std::lround(anchors[i].b + s * (anchors[i + 1].b - anchors[i].b)));
            return;
        }
    }
    r = 253;
    g = 231;
    b = 37;
}

} // namespace

std::string render_heatmap(const CoefficientGrid& coeffs, const std::string& title) {
    if (coeffs.entries.empty()) throw ShapeError("render_heatmap: empty coefficient grid");

    double x_lo = 0, x_hi = 0, xi_lo = 0, xi_hi = 0, v_max = -1e308;
    bool first = true;
    for (const auto& e : coeffs.entries) {
        if (first) {
            x_lo = x_hi = e.x;
            xi_lo = xi_hi = e.xi;
            first = false;
        }
        x_lo = std::min(x_lo, e.x);
        x_hi = std::max(x_hi, e.x);
        xi_lo = std::min(xi_lo, e.xi);
        xi_hi = std::max(xi_hi, e.xi);
        if (std::abs(e.value) > 0.0) v_max = std::max(v_max, std::log10(std::abs(e.value)));
    }
    if (v_max < -1e307) v_max = 0.0;
    const double v_min = v_max - 12.0;  // fixed 12-decade ramp
    const double pad_x = (x_hi - x_lo) * 0.03 + 1e-9;
    const double pad_xi = (xi_hi - xi_lo) * 0.03 + 1e-9;
    x_lo -= pad_x;
    x_hi += pad_x;
    xi_lo -= pad_xi;
    xi_hi += pad_xi;

    const double W = 900, H = 720, ml = 70, mr = 110, mt = 40, mb = 55;
    const double pw = W - ml - mr, ph = H - mt - mb;
    const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto py = [&](double xi) { return mt + (xi_hi - xi) / (xi_hi - xi_lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    if (!title.empty())
        os << "<text x=\"" << ml << "\" y=\"24\" font-family=\"monospace\" font-size=\"15\">"
           << title << "</text>\n";

    // axes
    os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
       << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / 4.0;
        const double xi = xi_lo + (xi_hi - xi_lo) * i / 4.0;
        os << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(H - mb + 18)
           << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" << fmt(x)
           << "</text>\n";
        os << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py(xi) + 4)
           << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">" << fmt(xi)
           << "</text>\n";
    }
    os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(H - 12)
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">x</text>\n";
    os << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
       << "\" font-family=\"monospace\" font-size=\"13\">xi</text>\n";

    // markers
    const double side = std::max(2.0, std::min(pw, ph) /
                                          std::max(8.0, std::sqrt(double(coeffs.entries.size()))));
    for (const auto& e : coeffs.entries) {
        const double a = std::abs(e.value);
        const double t = a > 0.0 ? (std::log10(a) - v_min) / (v_max - v_min) : 0.0;
        int r, g, b;
        ramp_color(t, r, g, b);
        os << "<rect x=\"" << fmt(px(e.x) - side / 2) << "\" y=\"" << fmt(py(e.xi) - side / 2)
           << "\" width=\"" << fmt(side) << "\" height=\"" << fmt(side) << "\" fill=\"rgb(" << r
           << "," << g << "," << b << ")\"/>\n";
    }

    // colorbar
    const double cb_x = W - mr + 25, cb_w = 18;
    const int steps = 48;
    for (int i = 0; i < steps; ++i) {
        const double t0 = static_cast<double>(i) / steps;
        int r, g, b;
        ramp_color(1.0 - t0 - 0.5 / steps, r, g, b);
        os << "<rect x=\"" << fmt(cb_x) << "\" y=\"" << fmt(mt + ph * t0) << "\" width=\""
           << fmt(cb_w) << "\" height=\"" << fmt(ph / steps + 0.5) << "\" fill=\"rgb(" << r << ","
           << g << "," << b << ")\"/>\n";
    }
    os << "<text x=\"" << fmt(cb_x + cb_w + 6) << "\" y=\"" << fmt(mt + 10)
       << "\" font-family=\"monospace\" font-size=\"12\">" << fmt(v_max) << "</text>\n";
    os << "<text x=\"" << fmt(cb_x + cb_w + 6) << "\" y=\"" << fmt(mt + ph)
       << "\" font-family=\"monospace\" font-size=\"12\">" << fmt(v_min) << "</text>\n";
    os << "<text x=\"" << fmt(cb_x) << "\" y=\"" << fmt(mt - 8)
       << "\" font-family=\"monospace\" font-size=\"12\">log10|c|</text>\n";

    os << "</svg>\n";
    return os.str();
}

} // namespace tfwave
