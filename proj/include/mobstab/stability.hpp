#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "mobstab/errors.hpp"
#include "mobstab/mobius.hpp"
#include "mobstab/orbit.hpp"
#include "mobstab/realline.hpp"
#include "mobstab/sphere.hpp"

namespace mobstab {

// Practical cap on preperiod/period so a bad epsilon cannot allocate the machine.
inline constexpr std::int64_t kWitnessSizeCap = 100000000;

// A finite-horizon sequence a_0..a_H with one-step defect bounded by epsilon
// against the map it witnesses. When period > 0, points at indices k and
// k + period are bit-identical for k >= preperiod: the periodic block is
// stored once and reused, never recomputed.
struct PseudoOrbit {
    double epsilon = 0.0;
    int preperiod = 0;  // N: first periodic index (periodic block starts here)
    int period = 0;     // P: 0 when the tail is not periodic
    std::vector<SpherePoint> points;

    int horizon() const { return static_cast<int>(points.size()) - 1; }
};

enum class Conclusion { NonStabilityWitnessed, Inconclusive };

inline const char* name(Conclusion c) {
    return c == Conclusion::NonStabilityWitnessed ? "NonStabilityWitnessed" : "Inconclusive";
}

// Outcome of comparing a pseudo-orbit against the exact orbit from b0. The
// witness refutes any K(eps) bound below separation_threshold: the defect
// stays <= epsilon while |a_n - b_n| >= separation_threshold keeps recurring.
struct StabilityVerdict {
    double epsilon = 0.0;
    double defect_observed = 0.0;
    double separation_threshold = 1.0;
    int exceed_count = 0;
    std::vector<int> exceed_indices;
    Conclusion conclusion = Conclusion::Inconclusive;
};

namespace detail {

inline double max_defect(const MobiusMap& g, const std::vector<SpherePoint>& pts) {
    double defect = 0.0;
    for (size_t n = 0; n + 1 < pts.size(); ++n)
        defect = std::max(defect, euclid_distance(pts[n + 1], apply(g, pts[n])));
    return defect;
}

inline void fill_periodic_tail(std::vector<SpherePoint>& pts, int preperiod,
                               const std::vector<SpherePoint>& block, int horizon) {
    for (int k = preperiod; k <= horizon; ++k)
        pts.push_back(block[static_cast<size_t>((k - preperiod) % static_cast<int>(block.size()))]);
}

}  // namespace detail

// Pre-periodic witness for a parabolic map with c != 0.
//
// The construction runs in normal coordinates w = h(z), where g is the
// translation w -> w + s:
//   Im w_q = -s / (2|c|(1+2eps))   so the horocycle through q has radius
//                                  exactly 1 + 2 eps;
//   Re w_q = -s N2, N2 = ceil(2/(|c| eps)),
//                                  so q and all its backward iterates stay
//                                  in B(alpha, eps/2), and after N2 forward
//                                  steps Re w = 0: the diametral point on
//                                  the center line, at distance 2 + 4 eps
//                                  from alpha.
// The sequence is b0's exact orbit up to N1 = entry time into B(alpha, eps/2),
// then the periodic block q, g(q), ..., g^{2 N2 - 1}(q) repeated. Every
// claimed inequality is re-verified numerically before returning.
inline PseudoOrbit build_complex_witness(const MobiusMap& g, const SpherePoint& b0, double epsilon,
                                         int horizon) {
    if (!(epsilon > 0.0)) throw InvalidEpsilon("build_complex_witness: epsilon must be > 0");
    if (horizon < 0) throw std::invalid_argument("build_complex_witness: horizon must be >= 0");
    const NormalForm nf = normal_form(g);
    const double s = nf.direction;
    const double ac = std::abs(nf.c);

    // b0 = alpha degenerates gracefully: the exact orbit is constant, the
    // periodic block starts immediately.
    const bool at_alpha = nf.to_normal(b0).is_infinity();
    const int n1 = at_alpha ? 0 : escape_entry_time(g, b0, epsilon / 2.0);

    const std::int64_t n2 =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(2.0 / (ac * epsilon))));
    if (2 * n2 > kWitnessSizeCap || n1 > kWitnessSizeCap)
        throw Error("build_complex_witness: witness period exceeds the size cap");

    const Complex w_q(-s * static_cast<double>(n2), -s / (2.0 * ac * (1.0 + 2.0 * epsilon)));
    const int preperiod = n1 + 1;
    const int period = static_cast<int>(2 * n2);

    PseudoOrbit po;
    po.epsilon = epsilon;
    po.preperiod = preperiod;
    po.period = period;
    po.points.reserve(static_cast<size_t>(horizon) + 1);
    po.points.push_back(b0);
    for (int n = 1; n <= std::min(n1, horizon); ++n)
        po.points.push_back(apply(g, po.points.back()));

    std::vector<SpherePoint> block(static_cast<size_t>(period));
    for (int m = 0; m < period; ++m)
        block[static_cast<size_t>(m)] = nf.from_normal(w_q + static_cast<double>(m) * s);
    if (horizon >= preperiod) detail::fill_periodic_tail(po.points, preperiod, block, horizon);

    // Numeric re-verification of the construction.
    const Complex alpha = nf.fixed_point;
    const double ball = epsilon / 2.0;
    const double radius = 1.0 / (2.0 * ac * std::abs(w_q.imag()));
    internal_check(std::abs(radius - (1.0 + 2.0 * epsilon)) <= 1e-9 * (1.0 + 2.0 * epsilon),
                   "complex witness: horocycle radius");
    internal_check(euclid_distance(block[0], SpherePoint(alpha)) < ball,
                   "complex witness: q outside B(alpha, eps/2)");
    for (int k = 1; k <= 5; ++k) {
        const SpherePoint back = nf.from_normal(w_q - static_cast<double>(k) * s);
        internal_check(euclid_distance(back, SpherePoint(alpha)) < ball,
                       "complex witness: backward iterate escapes the ball");
    }
    const SpherePoint diametral = block[static_cast<size_t>(n2)];
    internal_check(euclid_distance(diametral, SpherePoint(alpha)) >=
                       (2.0 + 4.0 * epsilon) * (1.0 - 1e-9),
                   "complex witness: diametral point too close");
    const SpherePoint wrap = nf.from_normal(w_q + static_cast<double>(period) * s);
    internal_check(euclid_distance(wrap, SpherePoint(alpha)) < ball,
                   "complex witness: wrap point outside the ball");
    internal_check(detail::max_defect(g, po.points) <= epsilon * (1.0 + 1e-9),
                   "complex witness: defect exceeds epsilon");
    return po;
}

// Witness against the translation z -> z + q: the linear sequence
// a_n = a_0 + n (eps + q), whose defect is exactly eps at every step and
// whose separation from b_n = b_0 + n q grows without bound. q = 0 (the
// identity map) uses the same formula against the constant exact orbit.
// eps = 0 degenerates to the exact orbit itself.
inline PseudoOrbit build_translation_witness(Complex q, Complex a0, double epsilon, int horizon) {
    if (epsilon < 0.0) throw InvalidEpsilon("build_translation_witness: epsilon must be >= 0");
    if (horizon < 0) throw std::invalid_argument("build_translation_witness: horizon must be >= 0");
    PseudoOrbit po;
    po.epsilon = epsilon;
    po.preperiod = 0;
    po.period = 0;
    po.points.reserve(static_cast<size_t>(horizon) + 1);
    const Complex step = epsilon + q;
    for (int n = 0; n <= horizon; ++n)
        po.points.push_back(SpherePoint(a0 + static_cast<double>(n) * step));
    return po;
}

// Pre-periodic witness for a real parabolic map with c != 0 on the extended
// real line. The real normal coordinate is v = 1/(x - alpha), stepping by
// cs = c(a+d)/2 each application (|cs| = |c|, sign cs = sigma).
//
// The periodic block starts at q on the alpha-side opposite the convergence
// interval, |q - alpha| < eps/2; after N1 steps the orbit crosses the pole
// region and sits at distance 2 max{1/|c|, 1+eps} from alpha; after N2 more
// it is back inside B(alpha, eps/2) on the convergence side. Block:
// q, g(q), ..., g^{N1+N2}(q); period N1 + N2 + 1.
inline PseudoOrbit build_real_witness(const RealMobiusMap& g, double b0, double epsilon,
                                      int horizon) {
    if (!(epsilon > 0.0)) throw InvalidEpsilon("build_real_witness: epsilon must be > 0");
    if (horizon < 0) throw std::invalid_argument("build_real_witness: horizon must be >= 0");
    detail::require_real_parabolic(g, "build_real_witness");
    const double alpha = real_fixed_point(g);
    const double cs = g.c * (g.trace() / 2.0);
    const double acs = std::abs(cs);
    const double sigma = cs > 0.0 ? 1.0 : -1.0;

    std::int64_t n0 = 0;
    if (std::abs(b0 - alpha) > kBoundaryTol) {
        const double v0 = 1.0 / (b0 - alpha);
        const double u = (2.0 / epsilon - sigma * v0) / acs;
        n0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(u)) + 1);
    }

    const double V = std::min(acs, 1.0 / (1.0 + epsilon));
    const double v_far = -sigma * V / 2.0;
    const std::int64_t n1 = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::floor((2.0 / epsilon - V / 2.0) / acs)) + 1);
    const std::int64_t n2 =
        static_cast<std::int64_t>(std::floor((2.0 / epsilon + V / 2.0) / acs)) + 1;
    if (n0 > kWitnessSizeCap || n1 + n2 + 1 > kWitnessSizeCap)
        throw Error("build_real_witness: witness size exceeds the cap");
    const double v_q = v_far - static_cast<double>(n1) * cs;

    const int preperiod = static_cast<int>(n0) + 1;
    const int period = static_cast<int>(n1 + n2 + 1);

    const MobiusMap gc = to_complex(g);
    PseudoOrbit po;
    po.epsilon = epsilon;
    po.preperiod = preperiod;
    po.period = period;
    po.points.reserve(static_cast<size_t>(horizon) + 1);
    po.points.push_back(SpherePoint(b0));
    for (std::int64_t n = 1; n <= std::min<std::int64_t>(n0, horizon); ++n)
        po.points.push_back(apply(gc, po.points.back()));

    std::vector<SpherePoint> block(static_cast<size_t>(period));
    for (int m = 0; m < period; ++m)
        block[static_cast<size_t>(m)] = SpherePoint(alpha + 1.0 / (v_q + static_cast<double>(m) * cs));
    if (horizon >= preperiod) detail::fill_periodic_tail(po.points, preperiod, block, horizon);

    // Numeric re-verification.
    const double ball = epsilon / 2.0;
    const double q = block[0].value().real();
    internal_check(std::abs(q - alpha) < ball, "real witness: q outside (alpha -+ eps/2)");
    internal_check(locate(g, block[0]) ==
                       (sigma > 0 ? IntervalLabel::PoleToAlpha : IntervalLabel::AlphaToPole),
                   "real witness: q on the wrong side of alpha");
    const double far = block[static_cast<size_t>(n1)].value().real();
    internal_check(std::abs(far - alpha) > 1.0 + epsilon, "real witness: far point too close");
    internal_check(std::abs(far - alpha) > 1.0 / acs * (1.0 - 1e-9),
                   "real witness: far point inside the pole gap");
    const double wrap = alpha + 1.0 / (v_q + static_cast<double>(period) * cs);
    internal_check(std::abs(wrap - alpha) < ball, "real witness: wrap point outside the ball");
    internal_check(detail::max_defect(gc, po.points) <= epsilon * (1.0 + 1e-9),
                   "real witness: defect exceeds epsilon");
    return po;
}

// Compares the pseudo-orbit against the exact orbit from b0, recomputed here
// by direct iteration (independent of the closed forms the builders use).
inline StabilityVerdict verify(const MobiusMap& g, const PseudoOrbit& pseudo, const SpherePoint& b0,
                               int min_exceed, double separation_threshold = 1.0) {
    const std::int64_t needed = static_cast<std::int64_t>(pseudo.preperiod) +
                                static_cast<std::int64_t>(min_exceed) * pseudo.period;
    if (pseudo.horizon() < needed)
        throw HorizonTooShort("verify: horizon < preperiod + min_exceed * period");

    StabilityVerdict verdict;
    verdict.epsilon = pseudo.epsilon;
    verdict.separation_threshold = separation_threshold;

    SpherePoint b = b0;
    for (size_t n = 0; n < pseudo.points.size(); ++n) {
        if (n > 0) b = apply(g, b);
        if (euclid_distance(pseudo.points[n], b) >= separation_threshold)
            verdict.exceed_indices.push_back(static_cast<int>(n));
    }
    verdict.exceed_count = static_cast<int>(verdict.exceed_indices.size());
    verdict.defect_observed = detail::max_defect(g, pseudo.points);
    const bool defect_ok = verdict.defect_observed <= pseudo.epsilon * (1.0 + 1e-9);
    verdict.conclusion = defect_ok && verdict.exceed_count >= min_exceed
                             ? Conclusion::NonStabilityWitnessed
                             : Conclusion::Inconclusive;
    return verdict;
}

// The full sequence n -> |a_n - b_n|; +inf marks indices where exactly one
// of the two points is at infinity.
inline std::vector<std::pair<int, double>> separation_profile(const MobiusMap& g,
                                                              const PseudoOrbit& pseudo,
                                                              const SpherePoint& b0) {
    std::vector<std::pair<int, double>> profile;
    profile.reserve(pseudo.points.size());
    SpherePoint b = b0;
    for (size_t n = 0; n < pseudo.points.size(); ++n) {
        if (n > 0) b = apply(g, b);
        profile.emplace_back(static_cast<int>(n), euclid_distance(pseudo.points[n], b));
    }
    return profile;
}

}  // namespace mobstab
