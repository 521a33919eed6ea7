#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mobstab/errors.hpp"
#include "mobstab/mobius.hpp"
#include "mobstab/sphere.hpp"

namespace mobstab {

// Interval-label boundary tolerance on the real line.
inline constexpr double kBoundaryTol = 1e-12;
// Iteration cap: converts a hopeless escape search into a typed error.
inline constexpr long kEscapeCap = 1000000;

// x -> (ax + b)/(cx + d) with real coefficients and ad - bc = 1, acting on
// the extended real line (one point at infinity, spherical topology).
struct RealMobiusMap {
    double a, b, c, d;

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
};

inline RealMobiusMap normalize_real(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    if (std::abs(det) < kSingularDetTol)
        throw SingularMatrix("normalize_real: ad - bc is (numerically) zero");
    if (det < 0.0)
        throw SingularMatrix("normalize_real: negative determinant has no real unimodular form");
    const double s = 1.0 / std::sqrt(det);
    return {a * s, b * s, c * s, d * s};
}

inline MobiusMap to_complex(const RealMobiusMap& g) {
    return {Complex(g.a), Complex(g.b), Complex(g.c), Complex(g.d)};
}

inline RealMobiusMap inverse(const RealMobiusMap& g) { return {g.d, -g.b, -g.c, g.a}; }

inline bool is_parabolic(const RealMobiusMap& g) {
    const bool identity = std::abs(g.b) <= kCoeffTol && std::abs(g.c) <= kCoeffTol &&
                          std::abs(g.a - g.d) <= kCoeffTol;
    return !identity && std::abs(std::abs(g.trace()) - 2.0) <= kTraceTol;
}

namespace detail {

inline void require_real_parabolic(const RealMobiusMap& g, const char* who) {
    if (!is_parabolic(g)) throw NotParabolic(std::string(who) + ": map is not parabolic");
    if (std::abs(g.c) < kPoleGuard) throw FixesInfinity(std::string(who) + ": c = 0");
}

}  // namespace detail

inline double real_fixed_point(const RealMobiusMap& g) {
    detail::require_real_parabolic(g, "real_fixed_point");
    return (g.a - g.d) / (2.0 * g.c);
}

inline double pole(const RealMobiusMap& g) { return -g.d / g.c; }
inline double image_of_infinity(const RealMobiusMap& g) { return g.a / g.c; }

// Orientation class: sigma = sign((a+d) c). For sigma = +1 the landmarks
// order as -d/c < alpha < a/c; for sigma = -1 they mirror.
inline int orientation(const RealMobiusMap& g) {
    detail::require_real_parabolic(g, "orientation");
    return g.trace() * g.c > 0.0 ? +1 : -1;
}

// Evaluation on the extended real line. A point within the boundary
// tolerance of -d/c routes to infinity before the division, so pole
// crossings are exact.
inline SpherePoint apply_real(const RealMobiusMap& g, const SpherePoint& x) {
    if (x.is_infinity()) {
        if (std::abs(g.c) < kPoleGuard) return SpherePoint::infinity();
        return SpherePoint(g.a / g.c);
    }
    const double t = x.value().real();
    if (std::abs(g.c) >= kPoleGuard && std::abs(t - pole(g)) <= kBoundaryTol)
        return SpherePoint::infinity();
    const double denom = g.c * t + g.d;
    if (std::abs(denom) < kPoleGuard) return SpherePoint::infinity();
    return SpherePoint((g.a * t + g.b) / denom);
}

inline double apply_real(const RealMobiusMap& g, double x) {
    const SpherePoint y = apply_real(g, SpherePoint(x));
    if (y.is_infinity()) throw std::domain_error("apply_real: hit the pole");
    return y.value().real();
}

// Residuals of the auxiliary constant identities
//   (a+d)/2 = 2/(a+d),  c alpha + d = (a+d)/2,  alpha = a/c - 2/(c(a+d)).
struct AuxIdentityReport {
    double trace_reciprocal;
    double c_alpha_plus_d;
    double alpha_offset;

    double max_residual() const {
        return std::max(trace_reciprocal, std::max(c_alpha_plus_d, alpha_offset));
    }
};

inline AuxIdentityReport aux_identities(const RealMobiusMap& g) {
    detail::require_real_parabolic(g, "aux_identities");
    const double tr = g.trace();
    const double alpha = real_fixed_point(g);
    AuxIdentityReport r{};
    r.trace_reciprocal = std::abs(tr / 2.0 - 2.0 / tr);
    r.c_alpha_plus_d = std::abs(g.c * alpha + g.d - tr / 2.0);
    r.alpha_offset = std::abs(alpha - (g.a / g.c - 2.0 / (g.c * tr)));
    return r;
}

// The extended real line partitioned by the landmarks -d/c, alpha, a/c.
// The first group reads in the sigma = +1 order, the second in the mirrored
// sigma = -1 order; point labels and AtInfinity are shared.
enum class IntervalLabel {
    BelowPole,    // (-inf, -d/c)
    PoleToAlpha,  // (-d/c, alpha)
    AlphaToAC,    // (alpha, a/c)
    AboveAC,      // (a/c, +inf)
    BelowAC,      // (-inf, a/c)
    ACToAlpha,    // (a/c, alpha)
    AlphaToPole,  // (alpha, -d/c)
    AbovePole,    // (-d/c, +inf)
    AtPole,
    AtAlpha,
    AtAC,
    AtInfinity,
};

inline const char* name(IntervalLabel l) {
    switch (l) {
        case IntervalLabel::BelowPole: return "below_pole";
        case IntervalLabel::PoleToAlpha: return "pole_to_alpha";
        case IntervalLabel::AlphaToAC: return "alpha_to_ac";
        case IntervalLabel::AboveAC: return "above_ac";
        case IntervalLabel::BelowAC: return "below_ac";
        case IntervalLabel::ACToAlpha: return "ac_to_alpha";
        case IntervalLabel::AlphaToPole: return "alpha_to_pole";
        case IntervalLabel::AbovePole: return "above_pole";
        case IntervalLabel::AtPole: return "at_pole";
        case IntervalLabel::AtAlpha: return "at_alpha";
        case IntervalLabel::AtAC: return "at_ac";
        case IntervalLabel::AtInfinity: return "at_infinity";
    }
    return "?";
}

inline IntervalLabel locate(const RealMobiusMap& g, const SpherePoint& x) {
    detail::require_real_parabolic(g, "locate");
    if (x.is_infinity()) return IntervalLabel::AtInfinity;
    const double t = x.value().real();
    const double alpha = real_fixed_point(g);
    const double pl = pole(g);
    const double ac = image_of_infinity(g);
    if (std::abs(t - pl) <= kBoundaryTol) return IntervalLabel::AtPole;
    if (std::abs(t - alpha) <= kBoundaryTol) return IntervalLabel::AtAlpha;
    if (std::abs(t - ac) <= kBoundaryTol) return IntervalLabel::AtAC;
    if (orientation(g) > 0) {
        if (t < pl) return IntervalLabel::BelowPole;
        if (t < alpha) return IntervalLabel::PoleToAlpha;
        if (t < ac) return IntervalLabel::AlphaToAC;
        return IntervalLabel::AboveAC;
    }
    if (t < ac) return IntervalLabel::BelowAC;
    if (t < alpha) return IntervalLabel::ACToAlpha;
    if (t < pl) return IntervalLabel::AlphaToPole;
    return IntervalLabel::AbovePole;
}

struct StepImage {
    IntervalLabel before;
    IntervalLabel after;
};

// One application of g with the interval-image statement asserted:
// for sigma = +1,  (alpha, +inf) <-> (alpha, a/c)  and  (-inf, -d/c) <-> (a/c, +inf);
// for sigma = -1,  (-inf, alpha) <-> (a/c, alpha)  and  (-d/c, +inf) <-> (-inf, a/c).
// The remaining source intervals map into unions forced by continuity. A
// violation is an implementation bug, not a user error.
inline StepImage step_image_lemma(const RealMobiusMap& g, const SpherePoint& x) {
    const IntervalLabel before = locate(g, x);
    const IntervalLabel after = locate(g, apply_real(g, x));
    using L = IntervalLabel;
    auto in = [after](std::initializer_list<L> allowed) {
        for (L l : allowed)
            if (l == after) return true;
        return false;
    };
    bool ok = false;
    if (orientation(g) > 0) {
        switch (before) {
            case L::BelowPole: ok = in({L::AboveAC}); break;
            case L::AtPole: ok = in({L::AtInfinity}); break;
            case L::PoleToAlpha: ok = in({L::BelowPole, L::AtPole, L::PoleToAlpha}); break;
            case L::AtAlpha: ok = in({L::AtAlpha, L::PoleToAlpha, L::AlphaToAC}); break;
            case L::AlphaToAC: ok = in({L::AlphaToAC}); break;
            case L::AtAC: ok = in({L::AlphaToAC}); break;
            case L::AboveAC: ok = in({L::AlphaToAC}); break;
            case L::AtInfinity: ok = in({L::AtAC}); break;
            default: ok = false;
        }
    } else {
        switch (before) {
            case L::BelowAC: ok = in({L::ACToAlpha}); break;
            case L::AtAC: ok = in({L::ACToAlpha}); break;
            case L::ACToAlpha: ok = in({L::ACToAlpha}); break;
            case L::AtAlpha: ok = in({L::AtAlpha, L::ACToAlpha, L::AlphaToPole}); break;
            case L::AlphaToPole: ok = in({L::AlphaToPole, L::AtPole, L::AbovePole}); break;
            case L::AtPole: ok = in({L::AtInfinity}); break;
            case L::AbovePole: ok = in({L::BelowAC}); break;
            case L::AtInfinity: ok = in({L::AtAC}); break;
            default: ok = false;
        }
    }
    if (!ok)
        throw LemmaViolation(std::string("step_image_lemma: ") + name(before) + " mapped to " +
                             name(after));
    return {before, after};
}

// Label of the interval on which forward iteration is monotone toward alpha.
inline IntervalLabel convergence_interval_label(const RealMobiusMap& g) {
    return orientation(g) > 0 ? IntervalLabel::AlphaToAC : IntervalLabel::ACToAlpha;
}

struct MonotoneSequence {
    std::vector<double> values;  // x0, g(x0), ..., g^N(x0)
    int direction;               // sign of g(x) - x on the interval: -sigma
};

// Forward orbit on (alpha, a/c) for sigma = +1 (mirrored for sigma = -1):
// strictly monotone, converging to alpha. g(x) - x = -c^2 (x-alpha)^2 / (c(cx+d))
// keeps the constant sign -sigma there.
inline MonotoneSequence monotone_convergence(const RealMobiusMap& g, double x0, int N) {
    detail::require_real_parabolic(g, "monotone_convergence");
    const int sigma = orientation(g);
    const double alpha = real_fixed_point(g);
    const double ac = image_of_infinity(g);
    const double lo = sigma > 0 ? alpha : ac;
    const double hi = sigma > 0 ? ac : alpha;
    if (!(x0 - lo > kBoundaryTol && hi - x0 > kBoundaryTol))
        throw OutOfBasin("monotone_convergence: x0 outside the convergence interval");
    MonotoneSequence seq;
    seq.direction = -sigma;
    seq.values.reserve(static_cast<size_t>(N) + 1);
    double x = x0;
    seq.values.push_back(x);
    for (int k = 0; k < N; ++k) {
        x = apply_real(g, x);
        seq.values.push_back(x);
    }
    return seq;
}

// Backward orbit on (-d/c, alpha) for sigma = +1 (mirrored for sigma = -1):
// strictly monotone toward alpha. Pointwise it equals forward iteration of
// g^-1, whose orientation class is -sigma.
inline std::vector<double> backward_dynamics(const RealMobiusMap& g, double x0, int N) {
    detail::require_real_parabolic(g, "backward_dynamics");
    const int sigma = orientation(g);
    const double alpha = real_fixed_point(g);
    const double pl = pole(g);
    const double lo = sigma > 0 ? pl : alpha;
    const double hi = sigma > 0 ? alpha : pl;
    if (!(x0 - lo > kBoundaryTol && hi - x0 > kBoundaryTol))
        throw OutOfBasin("backward_dynamics: x0 outside the backward interval");
    const RealMobiusMap ginv = inverse(g);
    std::vector<double> values;
    values.reserve(static_cast<size_t>(N) + 1);
    double x = x0;
    values.push_back(x);
    for (int k = 0; k < N; ++k) {
        x = apply_real(ginv, x);
        values.push_back(x);
    }
    return values;
}

// Least N >= 0 with locate(g^N(x0)) = target, found by iteration under the
// cap and cross-checked against the normal-coordinate closed form
// v_n = v_0 + n c s (v = 1/(x - alpha)).
inline int escape_time_to(const RealMobiusMap& g, const SpherePoint& x0, IntervalLabel target) {
    detail::require_real_parabolic(g, "escape_time_to");
    SpherePoint x = x0;
    long n = 0;
    while (locate(g, x) != target) {
        if (++n > kEscapeCap) throw NoEscape("escape_time_to: iteration cap hit");
        x = apply_real(g, x);
    }

    const double alpha = real_fixed_point(g);
    const bool from_alpha = x0.is_finite() && std::abs(x0.value().real() - alpha) <= kBoundaryTol;
    if (n > 0 && !from_alpha) {
        const double v0 = x0.is_infinity() ? 0.0 : 1.0 / (x0.value().real() - alpha);
        const double vn = v0 + static_cast<double>(n) * g.c * (g.trace() / 2.0);
        const SpherePoint closed =
            std::abs(vn) < kPoleGuard ? SpherePoint::infinity() : SpherePoint(alpha + 1.0 / vn);
        // Skip the consistency check when the closed-form point sits on a
        // label boundary; iterated and closed-form rounding may then differ.
        bool near_boundary = false;
        if (closed.is_finite()) {
            const double t = closed.value().real();
            for (double landmark : {pole(g), alpha, image_of_infinity(g)})
                near_boundary = near_boundary || std::abs(t - landmark) < 1e-6;
            near_boundary = near_boundary || std::abs(t) > 1e6;  // grazing infinity
        }
        if (!near_boundary)
            internal_check(locate(g, closed) == target,
                           "escape_time_to: closed form disagrees with iteration");
    }
    return static_cast<int>(n);
}

}  // namespace mobstab
