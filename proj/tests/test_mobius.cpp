#include <doctest.h>

#include <cmath>
#include <complex>

#include "mobstab/mobius.hpp"
#include "test_helpers.hpp"

using namespace mobstab;

namespace {

bool coeffs_close(const MobiusMap& g, Complex a, Complex b, Complex c, Complex d,
                  double tol = 1e-12) {
    return std::abs(g.a - a) <= tol && std::abs(g.b - b) <= tol && std::abs(g.c - c) <= tol &&
           std::abs(g.d - d) <= tol;
}

}  // namespace

TEST_CASE("normalize: worked values") {
    CHECK(coeffs_close(normalize(2.0, 0.0, 0.0, 2.0), 1, 0, 0, 1));
    CHECK(coeffs_close(normalize(1.0, 1.0, 0.0, 1.0), 1, 1, 0, 1));
    // det(2,0,2,2) = 4, scale by 1/2
    CHECK(coeffs_close(normalize(2.0, 0.0, 2.0, 2.0), 1, 0, 1, 1));
    CHECK_THROWS_AS(normalize(1.0, 1.0, 1.0, 1.0), SingularMatrix);
}

TEST_CASE("normalize: determinant one on random inputs") {
    auto rng = testutil::seeded_rng(201);
    for (int i = 0; i < 200; ++i) {
        const Complex a(testutil::uniform(rng, -3, 3), testutil::uniform(rng, -3, 3));
        const Complex b(testutil::uniform(rng, -3, 3), testutil::uniform(rng, -3, 3));
        const Complex c(testutil::uniform(rng, -3, 3), testutil::uniform(rng, -3, 3));
        const Complex d(testutil::uniform(rng, -3, 3), testutil::uniform(rng, -3, 3));
        if (std::abs(a * d - b * c) < 1e-3) continue;
        const MobiusMap g = normalize(a, b, c, d);
        CHECK(std::abs(g.det() - 1.0) < 1e-12);
    }
}

TEST_CASE("apply: pole, infinity and plain evaluation") {
    const MobiusMap g{1, 0, 1, 1};  // z / (z + 1)
    CHECK(apply(g, SpherePoint(-1.0)).is_infinity());
    CHECK(apply(g, SpherePoint::infinity()) == SpherePoint(1.0));
    const SpherePoint img = apply(g, SpherePoint(0.0, 2.0));
    // 2i/(1+2i) rationalized by hand: (4+2i)/5
    CHECK(std::abs(img.value() - Complex(0.8, 0.4)) < 1e-15);
    const MobiusMap t{1, 5, 0, 1};
    CHECK(apply(t, SpherePoint::infinity()).is_infinity());
}

TEST_CASE("compose and inverse") {
    const MobiusMap g{1, 0, 1, 1};
    CHECK(coeffs_close(inverse(g), 1, 0, -1, 1));
    const MobiusMap id = compose(g, inverse(g));
    CHECK(coeffs_close(id, 1, 0, 0, 1));
    CHECK(coeffs_close(compose(MobiusMap{1, 1, 0, 1}, MobiusMap{1, 1, 0, 1}), 1, 2, 0, 1));

    auto rng = testutil::seeded_rng(202);
    for (int i = 0; i < 100; ++i) {
        const MobiusMap g1 = testutil::random_parabolic(rng);
        const MobiusMap g2 = testutil::random_parabolic(rng);
        const SpherePoint z(testutil::uniform(rng, -2, 2), testutil::uniform(rng, -2, 2));
        CHECK(chordal_distance(apply(compose(g1, g2), z), apply(g1, apply(g2, z))) < 1e-9);
        CHECK(chordal_distance(apply(inverse(g1), apply(g1, z)), z) < 1e-9);
        CHECK(std::abs(compose(g1, g2).det() - 1.0) < 1e-10);
    }
}

TEST_CASE("classify: worked values") {
    CHECK(classify(MobiusMap{1, 0, 1, 1}).kind == MapKind::Parabolic);
    CHECK(classify(MobiusMap{1, 0, 1, 1}).sign == +1);
    CHECK(classify(MobiusMap{0, 1, -1, 0}).kind == MapKind::Elliptic);
    CHECK(classify(MobiusMap{2, 0, 0, 0.5}).kind == MapKind::Hyperbolic);
    CHECK(classify(MobiusMap{1, 0, 0, 1}).kind == MapKind::Identity);
    CHECK(classify(MobiusMap{-1, 0, 0, -1}).kind == MapKind::Identity);
    CHECK(classify(MobiusMap{-1, 0, 1, -1}).sign == -1);
    const Complex u(1.0, 1.0);
    CHECK(classify(normalize(u, 0.0, 0.0, 1.0 / u)).kind == MapKind::Loxodromic);
}

TEST_CASE("fixed point: worked values and residual") {
    CHECK(fixed_point(MobiusMap{1, 0, 1, 1}) == SpherePoint(0.0));
    // (3-(-1))/4 = 1, and g(1) = (3-2)/(2-1) = 1 directly
    CHECK(std::abs(fixed_point(MobiusMap{3, -2, 2, -1}).value() - 1.0) < 1e-15);
    CHECK(fixed_point(MobiusMap{1, 5, 0, 1}).is_infinity());
    CHECK_THROWS_AS(fixed_point(MobiusMap{2, 0, 0, 0.5}), NotParabolic);

    auto rng = testutil::seeded_rng(203);
    for (int i = 0; i < 100; ++i) {
        const MobiusMap g = testutil::random_parabolic(rng);
        const SpherePoint alpha = fixed_point(g);
        CHECK(euclid_distance(apply(g, alpha), alpha) < 1e-10);
    }
}

TEST_CASE("normal form: worked example h(g(2i)) = h(2i) + 1") {
    const MobiusMap g{1, 0, 1, 1};
    const NormalForm nf = normal_form(g);
    CHECK(nf.direction == +1);
    const SpherePoint z(0.0, 2.0);
    const Complex lhs = nf.to_normal(apply(g, z)).value();
    const Complex rhs = nf.to_normal(z).value() + 1.0;
    CHECK(std::abs(lhs - rhs) < 1e-14);
    // h(z) = 1/z here: h(2i) = -i/2
    CHECK(std::abs(nf.to_normal(z).value() - Complex(0.0, -0.5)) < 1e-14);

    CHECK(normal_form(MobiusMap{-1, 0, 1, -1}).direction == -1);
    CHECK(nf.from_normal(SpherePoint::infinity()) == SpherePoint(nf.fixed_point));
    CHECK(nf.to_normal(SpherePoint(nf.fixed_point)).is_infinity());
    CHECK_THROWS_AS(normal_form(MobiusMap{1, 5, 0, 1}), FixesInfinity);
    CHECK_THROWS_AS(normal_form(MobiusMap{2, 0, 0, 0.5}), NotParabolic);
}

TEST_CASE("conjugator maps agree with the closed forms") {
    auto rng = testutil::seeded_rng(204);
    for (int i = 0; i < 50; ++i) {
        const MobiusMap g = testutil::random_parabolic(rng);
        const NormalForm nf = normal_form(g);
        const Complex z = testutil::random_point_off(rng, nf.fixed_point, 0.1);
        const Complex via_map = apply(nf.conjugator, SpherePoint(z)).value();
        const Complex direct = nf.to_normal(SpherePoint(z)).value();
        CHECK(std::abs(via_map - direct) < 1e-9 * (1.0 + std::abs(direct)));
        CHECK(euclid_distance(apply(nf.inverse_conjugator, SpherePoint::infinity()),
                              SpherePoint(nf.fixed_point)) < 1e-12);
    }
}

TEST_CASE("trace direction") {
    CHECK(trace_direction(MobiusMap{1, 0, 1, 1}) == +1);
    CHECK(trace_direction(MobiusMap{-1, 0, 1, -1}) == -1);
    CHECK(trace_direction(MobiusMap{1, 1, 0, 1}) == +1);
    CHECK_THROWS_AS(trace_direction(MobiusMap{2, 0, 0, 0.5}), NotParabolic);
}

TEST_CASE("conjugation identity over random parabolic maps") {
    auto rng = testutil::seeded_rng(205);
    for (int m = 0; m < 200; ++m) {
        const MobiusMap g = testutil::random_parabolic(rng);
        const NormalForm nf = normal_form(g);
        const double s = nf.direction;
        for (int i = 0; i < 50; ++i) {
            const Complex z = testutil::random_point_off(rng, nf.fixed_point, 1e-3);
            const SpherePoint hz = nf.to_normal(SpherePoint(z));
            const SpherePoint hgz = nf.to_normal(apply(g, SpherePoint(z)));
            if (hgz.is_infinity() || hz.is_infinity()) continue;  // landed on the fixed point
            CHECK(std::abs(hgz.value() - (hz.value() + s)) < 1e-8);
        }
    }
}

TEST_CASE("parabolic auxiliary identities, complex and real coefficients") {
    auto rng = testutil::seeded_rng(206);
    for (int m = 0; m < 200; ++m) {
        MobiusMap g;
        if (m % 2 == 0) {
            g = testutil::random_parabolic(rng);
        } else {
            const auto gr = testutil::random_real_parabolic(rng, m % 4 == 1 ? +1 : -1);
            g = to_complex(gr);
        }
        const Complex tr = g.trace();
        const Complex alpha = fixed_point(g).value();
        CHECK(std::abs(g.c * alpha + g.d - tr / 2.0) < 1e-12);
        CHECK(std::abs(alpha - (g.a / g.c - 2.0 / (g.c * tr))) < 1e-12);
        CHECK(std::abs(g.c * alpha - g.a + tr / 2.0) < 1e-12);
    }
}
