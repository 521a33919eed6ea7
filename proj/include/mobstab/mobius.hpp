#pragma once

#include <cmath>
#include <complex>

#include "mobstab/errors.hpp"
#include "mobstab/sphere.hpp"

namespace mobstab {

// Determinants below this are treated as singular (the map degenerates).
inline constexpr double kSingularDetTol = 1e-14;
// |cz + d| below this counts as an exact pole hit; apply() returns infinity.
inline constexpr double kPoleGuard = 1e-14;
// Absolute tolerance on |a+d -+ 2| for the parabolic test (relative 1e-9
// against the target value 2).
inline constexpr double kTraceTol = 2e-9;
// Coefficient comparisons in classification (identity test).
inline constexpr double kCoeffTol = 1e-9;

// z -> (az + b)/(cz + d), stored with ad - bc = 1.
//
// (a,b,c,d) and (-a,-b,-c,-d) are the same map; normalize() picks the
// representative whose scale factor is the principal square root of
// 1/(ad-bc), i.e. nonnegative real part, ties to nonnegative imaginary part.
struct MobiusMap {
    Complex a, b, c, d;

    Complex det() const { return a * d - b * c; }
    Complex trace() const { return a + d; }

    static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

inline MobiusMap normalize(Complex a, Complex b, Complex c, Complex d) {
    const Complex det = a * d - b * c;
    if (std::abs(det) < kSingularDetTol)
        throw SingularMatrix("normalize: ad - bc is (numerically) zero");
    const Complex s = std::sqrt(1.0 / det);
    return {a * s, b * s, c * s, d * s};
}

inline MobiusMap normalize(const MobiusMap& g) { return normalize(g.a, g.b, g.c, g.d); }

inline SpherePoint apply(const MobiusMap& g, const SpherePoint& z) {
    if (z.is_infinity()) {
        if (std::abs(g.c) < kPoleGuard) return SpherePoint::infinity();
        return SpherePoint(g.a / g.c);
    }
    const Complex denom = g.c * z.value() + g.d;
    if (std::abs(denom) < kPoleGuard) return SpherePoint::infinity();
    const Complex w = (g.a * z.value() + g.b) / denom;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return SpherePoint::infinity();
    return SpherePoint(w);
}

inline MobiusMap compose(const MobiusMap& g1, const MobiusMap& g2) {
    return {g1.a * g2.a + g1.b * g2.c, g1.a * g2.b + g1.b * g2.d,
            g1.c * g2.a + g1.d * g2.c, g1.c * g2.b + g1.d * g2.d};
}

// Adjugate; determinant stays 1.
inline MobiusMap inverse(const MobiusMap& g) { return {g.d, -g.b, -g.c, g.a}; }

enum class MapKind { Identity, Parabolic, Elliptic, Hyperbolic, Loxodromic };

struct MapClass {
    MapKind kind;
    int sign = 0;  // +1 or -1 for Parabolic, 0 otherwise
};

inline const char* name(MapKind k) {
    switch (k) {
        case MapKind::Identity: return "identity";
        case MapKind::Parabolic: return "parabolic";
        case MapKind::Elliptic: return "elliptic";
        case MapKind::Hyperbolic: return "hyperbolic";
        case MapKind::Loxodromic: return "loxodromic";
    }
    return "?";
}

// Standard trace taxonomy for determinant-1 maps. Trace +-2 (and not the
// identity) is parabolic; the sign is the sign of a+d.
inline MapClass classify(const MobiusMap& g) {
    const Complex tr = g.trace();
    const bool identity = std::abs(g.b) <= kCoeffTol && std::abs(g.c) <= kCoeffTol &&
                          std::abs(g.a - g.d) <= kCoeffTol;
    if (identity) return {MapKind::Identity, 0};
    if (std::abs(tr - 2.0) <= kTraceTol) return {MapKind::Parabolic, +1};
    if (std::abs(tr + 2.0) <= kTraceTol) return {MapKind::Parabolic, -1};
    if (std::abs(tr.imag()) <= kCoeffTol * std::max(1.0, std::abs(tr.real()))) {
        if (std::abs(tr.real()) < 2.0) return {MapKind::Elliptic, 0};
        return {MapKind::Hyperbolic, 0};
    }
    return {MapKind::Loxodromic, 0};
}

inline bool is_parabolic(const MobiusMap& g) { return classify(g).kind == MapKind::Parabolic; }

// Sign of a+d for a parabolic map: the conjugated translation moves by +1
// when a+d = 2 and by -1 when a+d = -2.
inline int trace_direction(const MobiusMap& g) {
    const MapClass cls = classify(g);
    if (cls.kind != MapKind::Parabolic) throw NotParabolic("trace_direction: map is not parabolic");
    return cls.sign;
}

// The unique fixed point of a parabolic map: (a-d)/(2c), or infinity when c = 0.
inline SpherePoint fixed_point(const MobiusMap& g) {
    if (!is_parabolic(g)) throw NotParabolic("fixed_point: map is not parabolic");
    if (std::abs(g.c) < kPoleGuard) return SpherePoint::infinity();
    return SpherePoint((g.a - g.d) / (2.0 * g.c));
}

// Conjugation data for a parabolic map with c != 0:
//   h(z) = 1/(c(z - alpha)),  h^-1(w) = alpha + 1/(cw),
// and h o g o h^-1 is the translation w -> w + direction.
struct NormalForm {
    MobiusMap conjugator;          // h, normalized
    MobiusMap inverse_conjugator;  // h^-1
    int direction;                 // +1 for trace 2, -1 for trace -2
    Complex fixed_point;           // alpha
    Complex c;                     // the map's own c, kept for the closed forms

    // w = h(z); exact branches: h(alpha) = inf, h(inf) = 0.
    SpherePoint to_normal(const SpherePoint& z) const {
        if (z.is_infinity()) return SpherePoint(Complex(0.0, 0.0));
        const Complex t = c * (z.value() - fixed_point);
        if (std::abs(t) < kPoleGuard) return SpherePoint::infinity();
        return SpherePoint(1.0 / t);
    }

    // z = h^-1(w); h^-1(inf) = alpha, h^-1(0) = inf.
    SpherePoint from_normal(const SpherePoint& w) const {
        if (w.is_infinity()) return SpherePoint(fixed_point);
        const Complex t = c * w.value();
        if (std::abs(t) < kPoleGuard) return SpherePoint::infinity();
        const Complex z = fixed_point + 1.0 / t;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return SpherePoint::infinity();
        return SpherePoint(z);
    }

    SpherePoint from_normal(Complex w) const { return from_normal(SpherePoint(w)); }
};

inline NormalForm normal_form(const MobiusMap& g) {
    const MapClass cls = classify(g);
    if (cls.kind != MapKind::Parabolic) throw NotParabolic("normal_form: map is not parabolic");
    if (std::abs(g.c) < kPoleGuard)
        throw FixesInfinity("normal_form: c = 0, use the translation path");
    const Complex alpha = (g.a - g.d) / (2.0 * g.c);
    // h(z) = 1/(c(z - alpha)) as a matrix (0, 1; c, -c*alpha), det = -c.
    const MobiusMap h = normalize(Complex(0.0), Complex(1.0), g.c, -g.c * alpha);
    return {h, inverse(h), cls.sign, alpha, g.c};
}

}  // namespace mobstab
