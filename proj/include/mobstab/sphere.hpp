#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "mobstab/errors.hpp"

namespace mobstab {

using Complex = std::complex<double>;

inline constexpr double kDefaultPointTol = 1e-9;

// A point of the extended complex plane: a finite complex value or the
// point at infinity. Infinity is an explicit variant, never a large float,
// so pole branches stay exact.
class SpherePoint {
  public:
    SpherePoint() : value_(0.0, 0.0), finite_(true) {}

    SpherePoint(Complex z) : value_(z), finite_(true) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("SpherePoint: finite components required");
    }

    SpherePoint(double re, double im = 0.0) : SpherePoint(Complex(re, im)) {}

    static SpherePoint infinity() {
        SpherePoint p;
        p.finite_ = false;
        return p;
    }

    bool is_finite() const { return finite_; }
    bool is_infinity() const { return !finite_; }

    // Precondition: is_finite().
    Complex value() const {
        if (!finite_) throw std::logic_error("SpherePoint::value on infinity");
        return value_;
    }

    friend bool operator==(const SpherePoint& p, const SpherePoint& q) {
        if (p.finite_ != q.finite_) return false;
        return !p.finite_ || p.value_ == q.value_;
    }

  private:
    Complex value_;
    bool finite_;
};

// Tolerance-based point comparison; infinity only matches infinity.
inline bool approx_equal(const SpherePoint& p, const SpherePoint& q,
                         double tol = kDefaultPointTol) {
    if (p.is_infinity() || q.is_infinity()) return p.is_infinity() == q.is_infinity();
    return std::abs(p.value() - q.value()) <= tol;
}

// Chordal metric on the unit sphere, range [0, 2]; infinity is the north pole.
inline double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
    if (p.is_infinity() && q.is_infinity()) return 0.0;
    if (p.is_infinity() || q.is_infinity()) {
        const Complex z = p.is_infinity() ? q.value() : p.value();
        return 2.0 / std::sqrt(1.0 + std::norm(z));
    }
    const double num = 2.0 * std::abs(p.value() - q.value());
    return num / std::sqrt((1.0 + std::norm(p.value())) * (1.0 + std::norm(q.value())));
}

// |p - q| on the plane. Exactly one point at infinity yields an infinite
// separation signal (a value, not a failure); two infinities are coincident.
inline double euclid_distance(const SpherePoint& p, const SpherePoint& q) {
    if (p.is_infinity() && q.is_infinity()) return 0.0;
    if (p.is_infinity() || q.is_infinity()) return std::numeric_limits<double>::infinity();
    return std::abs(p.value() - q.value());
}

}  // namespace mobstab
