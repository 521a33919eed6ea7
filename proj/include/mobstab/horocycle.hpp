#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mobstab/errors.hpp"
#include "mobstab/mobius.hpp"
#include "mobstab/sphere.hpp"

namespace mobstab {

// The line holding the centers of all horocycles of g:
//   ell = { z : |z + d/c| = |z - a/c| },
// the perpendicular bisector of the segment [-d/c, a/c]. It passes through
// alpha, and points are parametrized as anchor + t * direction for real t.
struct CenterLine {
    Complex anchor;     // alpha
    Complex direction;  // unit vector along ell

    Complex at(double t) const { return anchor + t * direction; }
};

inline CenterLine center_line(const MobiusMap& g) {
    if (!is_parabolic(g)) throw NotParabolic("center_line: map is not parabolic");
    if (std::abs(g.c) < kPoleGuard) throw FixesInfinity("center_line: c = 0");
    const Complex alpha = (g.a - g.d) / (2.0 * g.c);
    const Complex seg = (g.a + g.d) / g.c;  // a/c - (-d/c)
    Complex dir = Complex(0.0, 1.0) * (seg / std::abs(seg));
    // Real segment: canonical direction is +i.
    if (std::abs(seg.imag()) <= 1e-12 * std::abs(seg) && seg.real() < 0.0) dir = -dir;
    return {alpha, dir};
}

// A horocycle at alpha: the extended line L_inf (through a/c, -d/c and inf),
// or a circle tangent to L_inf at alpha, i.e. |z - p| = |alpha - p| with p
// on the center line.
struct Horocycle {
    enum class Kind { ExtendedLine, Circle };

    Kind kind;
    Complex center;     // Circle: p
    double radius = 0;  // Circle: |alpha - p|
    Complex anchor;     // ExtendedLine: a point on L_inf (alpha)
    Complex direction;  // ExtendedLine: unit vector along L_inf

    static Horocycle circle(Complex p, double r) {
        Horocycle h;
        h.kind = Kind::Circle;
        h.center = p;
        h.radius = r;
        return h;
    }

    static Horocycle extended_line(Complex anchor, Complex direction) {
        Horocycle h;
        h.kind = Kind::ExtendedLine;
        h.anchor = anchor;
        h.direction = direction;
        return h;
    }
};

inline bool horocycles_equal(const Horocycle& x, const Horocycle& y, double tol = kDefaultPointTol) {
    if (x.kind != y.kind) return false;
    if (x.kind == Horocycle::Kind::Circle)
        return std::abs(x.center - y.center) < tol && std::abs(x.radius - y.radius) < tol;
    // Same line: anchors on each other's line, parallel directions.
    const double off = std::abs(std::imag((y.anchor - x.anchor) / x.direction));
    const double cross = std::abs(std::imag(y.direction / x.direction));
    return off < tol && cross < tol;
}

// L_inf of g as a Horocycle (the direction runs along the segment [-d/c, a/c]).
inline Horocycle extended_line_of(const MobiusMap& g) {
    if (!is_parabolic(g)) throw NotParabolic("extended_line_of: map is not parabolic");
    if (std::abs(g.c) < kPoleGuard) throw FixesInfinity("extended_line_of: c = 0");
    const Complex alpha = (g.a - g.d) / (2.0 * g.c);
    const Complex seg = (g.a + g.d) / g.c;
    return Horocycle::extended_line(alpha, seg / std::abs(seg));
}

// Signed-free distance from a finite point to the line (anchor, direction).
inline double line_distance(Complex z, Complex anchor, Complex direction) {
    return std::abs(std::imag((z - anchor) / direction));
}

// The horocycle of g through z. Recovers the center from the normal
// coordinate: Im h(z) = 1/(2c(p - alpha)i), hence p = alpha - i/(2c Im h(z)).
// z on L_inf (Im h(z) = 0) yields the extended line. z = alpha is rejected:
// every horocycle passes through alpha.
inline Horocycle horocycle_through(const MobiusMap& g, const SpherePoint& z,
                                   double tol = kDefaultPointTol) {
    const NormalForm nf = normal_form(g);
    if (z.is_finite() && std::abs(z.value() - nf.fixed_point) <= tol)
        throw FixedPointInput("horocycle_through: z is the fixed point");
    if (z.is_infinity()) return extended_line_of(g);
    const SpherePoint w = nf.to_normal(z);
    const double im = w.value().imag();
    if (std::abs(im) <= 1e-12 * std::max(1.0, std::abs(w.value()))) return extended_line_of(g);
    const Complex p = nf.fixed_point - Complex(0.0, 1.0) / (2.0 * nf.c * im);
    const double r = std::abs(nf.fixed_point - p);
    internal_check(std::abs(std::abs(z.value() - p) - r) <= 1e-7 * (1.0 + r),
                   "horocycle_through: reconstructed circle misses z");
    return Horocycle::circle(p, r);
}

inline bool contains(const Horocycle& hc, const SpherePoint& z, double tol = kDefaultPointTol) {
    if (hc.kind == Horocycle::Kind::Circle) {
        if (z.is_infinity()) return false;
        return std::abs(std::abs(z.value() - hc.center) - hc.radius) <= tol;
    }
    if (z.is_infinity()) return true;
    return line_distance(z.value(), hc.anchor, hc.direction) <= tol;
}

struct InvarianceReport {
    int samples = 0;
    double max_residual = 0.0;
};

namespace detail {

inline double circle_residual(const SpherePoint& z, Complex p, double r) {
    if (z.is_infinity()) return std::numeric_limits<double>::infinity();
    return std::abs(std::abs(z.value() - p) - r);
}

}  // namespace detail

// Samples points of hc and measures how far their g- and g^-1-images stray
// from hc. Horocycles of g give residuals at rounding level; other circles
// do not. Sampling skips a 1e-6 radian window around alpha (alpha is fixed,
// nothing to test there).
inline InvarianceReport check_invariance(const MobiusMap& g, const Horocycle& hc, int samples) {
    if (!is_parabolic(g)) throw NotParabolic("check_invariance: map is not parabolic");
    const MobiusMap ginv = inverse(g);
    InvarianceReport report;
    constexpr double kAlphaWindow = 1e-6;

    if (hc.kind == Horocycle::Kind::Circle) {
        const SpherePoint alpha = fixed_point(g);
        double theta_alpha = 0.0;
        bool alpha_on_circle = false;
        if (alpha.is_finite() &&
            std::abs(std::abs(alpha.value() - hc.center) - hc.radius) < 1e-6 * (1.0 + hc.radius)) {
            alpha_on_circle = true;
            theta_alpha = std::arg(alpha.value() - hc.center);
        }
        for (int k = 0; k < samples; ++k) {
            const double theta =
                theta_alpha + 2.0 * std::numbers::pi * (k + 0.5) / static_cast<double>(samples);
            if (alpha_on_circle) {
                const double gap = std::remainder(theta - theta_alpha, 2.0 * std::numbers::pi);
                if (std::abs(gap) < kAlphaWindow) continue;
            }
            const SpherePoint z(hc.center + hc.radius * std::polar(1.0, theta));
            const double res = std::max(detail::circle_residual(apply(g, z), hc.center, hc.radius),
                                        detail::circle_residual(apply(ginv, z), hc.center, hc.radius));
            report.max_residual = std::max(report.max_residual, res);
            ++report.samples;
        }
        return report;
    }

    // Extended line: sample along it, keeping clear of the pole so images
    // stay at moderate magnitude.
    const Complex pole = -g.d / g.c;
    const double t_pole = std::real((pole - hc.anchor) / hc.direction);
    const double span = 4.0 * (1.0 + std::abs(t_pole));
    for (int k = 0; k < samples; ++k) {
        const double t = -span + 2.0 * span * (k + 0.5) / static_cast<double>(samples);
        if (std::abs(t - t_pole) < 0.1 * (1.0 + std::abs(t_pole))) continue;
        if (std::abs(t) < kAlphaWindow) continue;  // anchor is alpha
        const SpherePoint z(hc.anchor + t * hc.direction);
        for (const MobiusMap* m : {&g, &ginv}) {
            const SpherePoint img = apply(*m, z);
            const double res =
                img.is_infinity() ? 0.0 : line_distance(img.value(), hc.anchor, hc.direction);
            report.max_residual = std::max(report.max_residual, res);
        }
        ++report.samples;
    }
    return report;
}

// The argument of z - p lifted into the open window
// (Arg(alpha - p), Arg(alpha - p) + 2pi). The window endpoints correspond to
// z = alpha, which is rejected.
inline double argument_of(Complex z, Complex p, Complex alpha, double tol = kDefaultPointTol) {
    if (std::abs(z - alpha) <= tol)
        throw FixedPointInput("argument_of: z is the fixed point");
    const double base = std::arg(alpha - p);
    const double raw = std::arg(z - p);
    double delta = raw - base;
    const double two_pi = 2.0 * std::numbers::pi;
    delta -= two_pi * std::floor(delta / two_pi);
    if (delta <= 0.0) delta += two_pi;
    return base + delta;
}

// Angles of a point list on one horocycle, all lifted into the window based
// at Arg(alpha - p).
struct ArcOrdering {
    double base;                 // Arg(alpha - p)
    std::vector<double> angles;  // each in (base, base + 2pi)
};

inline ArcOrdering arc_ordering(const std::vector<Complex>& points, Complex p, Complex alpha,
                                double tol = kDefaultPointTol) {
    ArcOrdering out;
    out.base = std::arg(alpha - p);
    out.angles.reserve(points.size());
    for (const Complex& z : points) out.angles.push_back(argument_of(z, p, alpha, tol));
    return out;
}

// The second intersection of the center line with a finite horocycle,
// diametrically opposite alpha: 2p - alpha. Its normal coordinate is purely
// imaginary (Re h = 0 exactly on ell).
inline Complex diametral_point(const MobiusMap& g, const Horocycle& hc) {
    internal_check(hc.kind == Horocycle::Kind::Circle, "diametral_point: needs a finite horocycle");
    const SpherePoint alpha = fixed_point(g);
    return 2.0 * hc.center - alpha.value();
}

}  // namespace mobstab
