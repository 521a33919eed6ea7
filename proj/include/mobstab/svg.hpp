#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mobstab/horocycle.hpp"
#include "mobstab/serialize.hpp"
#include "mobstab/sphere.hpp"

namespace mobstab {

// Deterministic SVG 1.1 figures. World coordinates go straight into the
// viewBox (y flipped so the plane reads the usual way up).

namespace svgdet {

struct Box {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;

    void add(double x, double y) {
        if (!any) {
            xmin = xmax = x;
            ymin = ymax = y;
            any = true;
            return;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }

    void margin(double frac) {
        const double mx = std::max(1e-3, (xmax - xmin) * frac);
        const double my = std::max(1e-3, (ymax - ymin) * frac);
        xmin -= mx;
        xmax += mx;
        ymin -= my;
        ymax += my;
    }
};

inline std::string num(double x) { return format_double(x); }

inline std::string header(const Box& b, int pixel_width) {
    const double w = b.xmax - b.xmin;
    const double h = b.ymax - b.ymin;
    const int pixel_height = std::max(1, static_cast<int>(pixel_width * h / w));
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(pixel_width) + "\" height=\"" + std::to_string(pixel_height) +
         "\" viewBox=\"" + num(b.xmin) + " " + num(-b.ymax) + " " + num(w) + " " + num(h) + "\">\n";
    return s;
}

inline std::string line(double x1, double y1, double x2, double y2, const std::string& style) {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(-y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
           num(-y2) + "\" " + style + "/>\n";
}

inline std::string circle(double cx, double cy, double r, const std::string& style) {
    return "<circle cx=\"" + num(cx) + "\" cy=\"" + num(-cy) + "\" r=\"" + num(r) + "\" " + style +
           "/>\n";
}

inline std::string text(double x, double y, double size, const std::string& body) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(-y) + "\" font-size=\"" + num(size) +
           "\" font-family=\"sans-serif\">" + body + "</text>\n";
}

}  // namespace svgdet

// Horocycle family of g: the circles, L_inf, the center line ell, and alpha.
inline std::string render_horocycles_svg(const MobiusMap& g, const std::vector<Horocycle>& circles) {
    using namespace svgdet;
    const Complex alpha = fixed_point(g).value();
    const CenterLine ell = center_line(g);
    const Horocycle linf = extended_line_of(g);

    Box box;
    box.add(alpha.real(), alpha.imag());
    const Complex ac = g.a / g.c, pole = -g.d / g.c;
    box.add(ac.real(), ac.imag());
    box.add(pole.real(), pole.imag());
    for (const Horocycle& hc : circles) {
        if (hc.kind != Horocycle::Kind::Circle) continue;
        box.add(hc.center.real() - hc.radius, hc.center.imag() - hc.radius);
        box.add(hc.center.real() + hc.radius, hc.center.imag() + hc.radius);
    }
    box.margin(0.10);

    const double diag = std::hypot(box.xmax - box.xmin, box.ymax - box.ymin);
    std::string s = header(box, 800);
    const Complex l0 = linf.anchor - 2.0 * diag * linf.direction;
    const Complex l1 = linf.anchor + 2.0 * diag * linf.direction;
    s += line(l0.real(), l0.imag(), l1.real(), l1.imag(),
              "stroke=\"#444444\" stroke-width=\"0.5%\"");
    const Complex e0 = ell.at(-2.0 * diag), e1 = ell.at(2.0 * diag);
    s += line(e0.real(), e0.imag(), e1.real(), e1.imag(),
              "stroke=\"#999999\" stroke-width=\"0.35%\" stroke-dasharray=\"2%\"");
    for (const Horocycle& hc : circles) {
        if (hc.kind != Horocycle::Kind::Circle) continue;
        s += circle(hc.center.real(), hc.center.imag(), hc.radius,
                    "fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"0.5%\"");
    }
    s += circle(alpha.real(), alpha.imag(), 0.01 * diag, "fill=\"#c23b22\"");
    s += text(alpha.real() + 0.015 * diag, alpha.imag() + 0.015 * diag, 0.035 * diag, "alpha");
    s += "</svg>\n";
    return s;
}

// Orbit figure: finite points as dots labeled with their index n; alpha marked.
inline std::string render_orbit_svg(const std::vector<std::pair<int, SpherePoint>>& points,
                                    const SpherePoint& alpha) {
    using namespace svgdet;
    Box box;
    if (alpha.is_finite()) box.add(alpha.value().real(), alpha.value().imag());
    for (const auto& [n, p] : points)
        if (p.is_finite()) box.add(p.value().real(), p.value().imag());
    if (!box.any) box.add(0.0, 0.0);
    box.margin(0.10);
    const double diag = std::hypot(box.xmax - box.xmin, box.ymax - box.ymin);

    std::string s = header(box, 800);
    // Axes through the origin of the box, drawn even for an empty orbit.
    s += line(box.xmin, 0.0, box.xmax, 0.0, "stroke=\"#cccccc\" stroke-width=\"0.3%\"");
    s += line(0.0, box.ymin, 0.0, box.ymax, "stroke=\"#cccccc\" stroke-width=\"0.3%\"");
    for (const auto& [n, p] : points) {
        if (!p.is_finite()) continue;
        s += circle(p.value().real(), p.value().imag(), 0.008 * diag, "fill=\"#1f6fb2\"");
        s += text(p.value().real() + 0.01 * diag, p.value().imag() + 0.01 * diag, 0.025 * diag,
                  std::to_string(n));
    }
    if (alpha.is_finite()) {
        s += circle(alpha.value().real(), alpha.value().imag(), 0.01 * diag, "fill=\"#c23b22\"");
        s += text(alpha.value().real() + 0.015 * diag, alpha.value().imag() + 0.015 * diag,
                  0.03 * diag, "alpha");
    }
    s += "</svg>\n";
    return s;
}

// Separation plot: |a_n - b_n| as a polyline with the threshold rule at y = 1.
// Infinite separations are clamped to the top of the range.
inline std::string render_separation_svg(const std::vector<std::pair<int, double>>& profile,
                                         double threshold) {
    using namespace svgdet;
    const double W = 800, H = 500, ml = 70, mr = 20, mt = 20, mb = 45;
    double ymax = threshold;
    int nmax = 1;
    for (const auto& [n, sep] : profile) {
        nmax = std::max(nmax, n);
        if (std::isfinite(sep)) ymax = std::max(ymax, sep);
    }
    ymax *= 1.05;
    auto px = [&](double n) { return ml + (W - ml - mr) * n / nmax; };
    auto py = [&](double y) { return H - mb - (H - mb - mt) * std::min(y, ymax) / ymax; };

    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n";
    auto raw_line = [&](double x1, double y1, double x2, double y2, const std::string& style) {
        return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
               num(y2) + "\" " + style + "/>\n";
    };
    s += raw_line(ml, H - mb, W - mr, H - mb, "stroke=\"#000000\" stroke-width=\"1\"");
    s += raw_line(ml, H - mb, ml, mt, "stroke=\"#000000\" stroke-width=\"1\"");
    s += raw_line(px(0), py(threshold), px(nmax), py(threshold),
                  "stroke=\"#c23b22\" stroke-width=\"1\" stroke-dasharray=\"6 3\"");
    s += "<text x=\"" + num(px(0) - 8) + "\" y=\"" + num(py(threshold) + 4) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"end\">" +
         format_double(threshold) + "</text>\n";
    s += "<text x=\"" + num(px(0) - 8) + "\" y=\"" + num(py(0) + 4) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"end\">0</text>\n";
    s += "<text x=\"" + num(px(nmax)) + "\" y=\"" + num(H - mb + 16) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"end\">n = " +
         std::to_string(nmax) + "</text>\n";
    if (!profile.empty()) {
        std::string pts;
        for (const auto& [n, sep] : profile) {
            pts += num(px(n));
            pts += ',';
            pts += num(py(std::isfinite(sep) ? sep : ymax));
            pts += ' ';
        }
        if (!pts.empty()) pts.pop_back();
        s += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"" + pts +
             "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace mobstab
