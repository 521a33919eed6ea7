#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "mobstab/errors.hpp"
#include "mobstab/mobius.hpp"
#include "mobstab/sphere.hpp"

namespace mobstab {

// A two-sided orbit segment z_{-backward} .. z_{forward} with
// z_{k+1} = g(z_k). Built by direct application, so the normal-form closed
// form stays an independent cross-check.
struct Orbit {
    MobiusMap map;
    SpherePoint start;
    int backward = 0;                 // points index offset
    std::vector<SpherePoint> points;  // points[backward + k] = z_k
    int direction = 0;                // trace sign when parabolic, else 0

    int forward() const { return static_cast<int>(points.size()) - 1 - backward; }

    const SpherePoint& at(int k) const { return points.at(static_cast<size_t>(backward + k)); }
};

inline Orbit iterate(const MobiusMap& g, const SpherePoint& z0, int n_forward, int n_backward) {
    if (n_forward < 0 || n_backward < 0)
        throw std::invalid_argument("iterate: step counts must be >= 0");
    Orbit orbit;
    orbit.map = g;
    orbit.start = z0;
    orbit.backward = n_backward;
    const MapClass cls = classify(g);
    orbit.direction = cls.kind == MapKind::Parabolic ? cls.sign : 0;

    std::vector<SpherePoint> back(static_cast<size_t>(n_backward));
    const MobiusMap ginv = inverse(g);
    SpherePoint z = z0;
    for (int k = 0; k < n_backward; ++k) {
        z = apply(ginv, z);
        back[static_cast<size_t>(k)] = z;
    }
    orbit.points.reserve(static_cast<size_t>(n_backward + n_forward + 1));
    for (int k = n_backward - 1; k >= 0; --k) orbit.points.push_back(back[static_cast<size_t>(k)]);
    orbit.points.push_back(z0);
    z = z0;
    for (int k = 0; k < n_forward; ++k) {
        z = apply(g, z);
        orbit.points.push_back(z);
    }
    return orbit;
}

namespace detail {

// h(z0); infinity here means z0 is the fixed point, which these routines reject.
inline Complex normal_start(const NormalForm& nf, const SpherePoint& z0, const char* who) {
    const SpherePoint w0 = nf.to_normal(z0);
    if (w0.is_infinity()) throw FixedPointInput(std::string(who) + ": z0 is the fixed point");
    return w0.value();
}

}  // namespace detail

// The k-th iterate in closed form: h^-1(h(z0) + k * s). Works for any
// integer k, including backward iterates, without accumulating error.
inline SpherePoint iterate_normal(const MobiusMap& g, const SpherePoint& z0, int k) {
    const NormalForm nf = normal_form(g);
    const Complex w0 = detail::normal_start(nf, z0, "iterate_normal");
    return nf.from_normal(w0 + static_cast<double>(k) * static_cast<double>(nf.direction));
}

// Distances |g^n(z0) - alpha| for n = 1..N then n = -1..-N, in closed form:
// 1/(|c| |w0 + n s|). An entry is +inf exactly when the orbit passes through
// the point at infinity.
inline std::vector<std::pair<int, double>> convergence_profile(const MobiusMap& g,
                                                               const SpherePoint& z0, int N) {
    const NormalForm nf = normal_form(g);
    const Complex w0 = detail::normal_start(nf, z0, "convergence_profile");
    const double ac = std::abs(nf.c);
    const double s = nf.direction;
    std::vector<std::pair<int, double>> profile;
    profile.reserve(static_cast<size_t>(2 * N));
    auto dist = [&](int n) {
        const double mod = std::abs(w0 + static_cast<double>(n) * s);
        if (mod < kPoleGuard) return std::numeric_limits<double>::infinity();
        return 1.0 / (ac * mod);
    };
    for (int n = 1; n <= N; ++n) profile.emplace_back(n, dist(n));
    for (int n = -1; n >= -N; --n) profile.emplace_back(n, dist(n));
    return profile;
}

// Least N >= 0 such that |g^n(z0) - alpha| < radius for ALL n >= N.
// In normal coordinates the condition is |w0 + n s| > 1/(|c| radius); the
// failure set is a bounded integer interval, so N is computed exactly and
// then sanity-scanned around the boundary.
inline int escape_entry_time(const MobiusMap& g, const SpherePoint& z0, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("escape_entry_time: radius must be > 0");
    const NormalForm nf = normal_form(g);
    const Complex w0 = detail::normal_start(nf, z0, "escape_entry_time");
    const double ac = std::abs(nf.c);
    const double s = nf.direction;
    const double R = 1.0 / (ac * radius);
    const double x = w0.real();
    const double y = w0.imag();

    std::int64_t N = 0;
    const double m2 = R * R - y * y;
    if (m2 >= 0.0) {
        const double M = std::sqrt(m2);
        // |x + n s| <= M  <=>  n in [lo, hi]
        const double lo_raw = s > 0 ? -M - x : x - M;
        const double hi_raw = s > 0 ? M - x : x + M;
        const std::int64_t lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lo_raw)));
        const std::int64_t hi = static_cast<std::int64_t>(std::floor(hi_raw));
        if (hi >= lo) N = hi + 1;
    }
    if (N > std::numeric_limits<int>::max())
        throw Error("escape_entry_time: entry time out of int range (z0 too close to alpha)");

    // The reported N and the next few steps must all be inside; the step
    // before must fail (up to boundary rounding).
    auto dist = [&](std::int64_t n) {
        const double mod = std::abs(w0 + static_cast<double>(n) * s);
        if (mod < kPoleGuard) return std::numeric_limits<double>::infinity();
        return 1.0 / (ac * mod);
    };
    for (std::int64_t n = N; n <= N + 5; ++n)
        internal_check(dist(n) < radius, "escape_entry_time: reported N not inside");
    if (N > 0) {
        const double d = dist(N - 1);
        internal_check(d >= radius || std::abs(d - radius) <= 1e-9 * radius,
                       "escape_entry_time: N is not minimal");
    }
    return static_cast<int>(N);
}

}  // namespace mobstab
