#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "implosion/errors.hpp"
#include "implosion/hypgeo.hpp"

using namespace implosion;
using namespace implosion::hypgeo;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson integral of the metric density along the segment [z1, z2].
double segment_length(const SlitPlaneDomain& dom, cplx z1, cplx z2, int n = 20000) {
    const cplx dz = z2 - z1;
    auto f = [&](double s) { return dom.density(z1 + s * dz) * std::abs(dz); };
    double sum = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / n);
    return sum / (3.0 * n);
}

}  // namespace

TEST_CASE("half-plane distance examples") {
    CHECK(hyp_dist_halfplane({0, -1}, {0, -2}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(hyp_dist_halfplane({-1, -1}, {1, -1}) == doctest::Approx(std::acosh(3.0)).epsilon(1e-14));
    CHECK(hyp_dist_halfplane({0.3, -0.7}, {0.3, -0.7}) == 0.0);
    CHECK_THROWS_AS(hyp_dist_halfplane({0, 0}, {0, -1}), DomainError);
    CHECK_THROWS_AS(hyp_dist_halfplane({0, 1}, {0, -1}), DomainError);
}

TEST_CASE("property: half-plane distance is invariant under translation and scaling") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.01, 3.0), s(0.1, 10.0);
    for (int i = 0; i < 500; ++i) {
        const cplx z1{u(rng), -v(rng)}, z2{u(rng), -v(rng)};
        const double d = hyp_dist_halfplane(z1, z2);
        const double t = u(rng), lam = s(rng);
        CHECK(std::abs(hyp_dist_halfplane(z1 + t, z2 + t) - d) <= 1e-12 * (1.0 + d));
        CHECK(std::abs(hyp_dist_halfplane(lam * z1, lam * z2) - d) <= 1e-12 * (1.0 + d));
    }
}

TEST_CASE("slit plane: strip-map oracle and path integral") {
    // sin maps the strip |Re u| < pi/2 onto C minus the rays (-inf,-1], [1,inf),
    // and the strip metric on the imaginary axis is |du|.
    const SlitPlaneDomain dom(-1.0, 1.0);
    for (double y : {0.1, 0.5, 1.3}) {
        const cplx z{0.0, -std::sinh(y)};
        CHECK(hyp_dist_slit(dom, 0.0, z) == doctest::Approx(y).epsilon(1e-12));
    }
    CHECK(std::abs(hyp_dist_slit(dom, 0.0, {0.0, -0.5}) - std::asinh(0.5)) < 1e-12);
    CHECK(std::abs(hyp_dist_slit(dom, 0.0, {0.0, -0.5}) - segment_length(dom, 0.0, {0.0, -0.5})) < 1e-6);
    CHECK_THROWS_AS(hyp_dist_slit(dom, 2.0, 0.0), DomainError);
}

TEST_CASE("property: slit distance symmetry and affine invariance") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(-3.0, 3.0), s(0.2, 5.0);
    for (int i = 0; i < 300; ++i) {
        const double a = u(rng), d = a + s(rng);
        const SlitPlaneDomain dom(a, d);
        const cplx z1{u(rng), u(rng)}, z2{u(rng), u(rng)};
        if (!dom.contains(z1) || !dom.contains(z2)) continue;
        const double dist = hyp_dist_slit(dom, z1, z2);
        CHECK(std::abs(hyp_dist_slit(dom, z2, z1) - dist) < 1e-10);
        const double t = u(rng), lam = s(rng);
        const SlitPlaneDomain moved(lam * a + t, lam * d + t);
        CHECK(std::abs(hyp_dist_slit(moved, lam * z1 + t, lam * z2 + t) - dist) < 1e-10 * (1.0 + dist));
    }
}

TEST_CASE("ball boundary lies at the requested distance") {
    const SlitPlaneDomain dom(-0.7, 1.9);
    const cplx c{0.4, -0.5};
    for (cplx z : ball_boundary(dom, c, 0.8, 64)) CHECK(hyp_dist_slit(dom, c, z) == doctest::Approx(0.8).epsilon(1e-9));
    const Disk d = inscribed_disk(dom, c, 0.8);
    for (cplx z : ball_boundary(dom, c, 0.8, 512)) CHECK(std::abs(z - c) >= d.radius);
}

TEST_CASE("Koebe bounds") {
    CHECK(koebe_bounds(0.0).lower == 1.0);
    CHECK(koebe_bounds(0.0).upper == 1.0);
    CHECK(koebe_bounds(0.5).lower == doctest::Approx(4.0 / 27.0).epsilon(1e-15));
    CHECK(koebe_bounds(0.5).upper == doctest::Approx(12.0).epsilon(1e-15));
    CHECK_THROWS_AS(koebe_bounds(1.0), DomainError);
    CHECK_THROWS_AS(koebe_bounds(-0.1), DomainError);
}

TEST_CASE("property: rotated Koebe functions respect the bounds") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), radius(0.0, 0.999);
    for (int map = 0; map < 10; ++map) {
        const cplx e = std::polar(1.0, angle(rng));
        // k(z) = z / (1 - e z)^2, k'(z) = (1 + e z) / (1 - e z)^3, k'(0) = 1.
        for (int i = 0; i < 1000; ++i) {
            const double r = radius(rng);
            const cplx z = std::polar(r, angle(rng));
            const double dk = std::abs((1.0 + e * z) / std::pow(1.0 - e * z, 3));
            const auto b = koebe_bounds(r);
            CHECK(dk >= b.lower);
            CHECK(dk <= b.upper);
        }
    }
}

TEST_CASE("cone membership") {
    const Cone cone{0.0, -90.0, 30.0};
    CHECK(cone.contains({0.0, -1.0}));
    CHECK(cone.contains({0.2, -1.0}));
    CHECK_FALSE(cone.contains({0.3, -1.0}));
    CHECK_FALSE(cone.contains({0.0, 1.0}));
    CHECK_FALSE(cone.contains(0.0));
}

TEST_CASE("cone search") {
    const auto one = cone_search(1.0);
    CHECK(one.r0 > 0.0);
    CHECK(std::isfinite(one.M0));
    CHECK(one.validated == 1000);
    CHECK_THROWS_AS(cone_search(0.5), DomainError);

    const auto two = cone_search(2.0);
    CHECK(two.r0 > 0.0);
    CHECK(two.r0 <= one.r0);
    CHECK(validate_cone_constants(two, 1000, 0xabcdef) == 0);
    // Constants for K stay valid for K' <= K.
    auto narrower = two;
    narrower.K = 1.5;
    CHECK(validate_cone_constants(narrower, 500, 7) == 0);
}

TEST_CASE("pullback: identity and affine branches") {
    const Disk ball{{0.3, -0.2}, 0.05};
    const Branch id{[](cplx z) { return z; }, [](cplx) { return cplx(1.0); }, INFINITY};
    const Disk same = pullback_ball(id, ball);
    CHECK(same.center == ball.center);
    CHECK(same.radius == ball.radius);

    // The branch of w = 2z is z = w/2.
    const Branch half{[](cplx w) { return 0.5 * w; }, [](cplx) { return cplx(0.5); }, INFINITY};
    const Disk h = pullback_ball(half, ball);
    CHECK(h.center == 0.5 * ball.center);
    CHECK(h.radius == 0.5 * ball.radius);

    const Branch small{[](cplx z) { return z; }, [](cplx) { return cplx(1.0); }, 0.01};
    CHECK_THROWS_AS(pullback_ball(small, ball), DomainError);

    const SlitPlaneDomain dom(-1.0, 1.0);
    const Disk via = pullback_ball(id, dom, {0.0, -0.5}, 0.3);
    CHECK(via.radius == inscribed_disk(dom, {0.0, -0.5}, 0.3).radius);
}

TEST_CASE("property: square-root branch of z^2 contains the returned disk") {
    // sqrt is univalent on D(1, 1); the returned disk must lie in sqrt(D(c, rho)).
    const Branch root{[](cplx w) { return std::sqrt(w); }, [](cplx w) { return 0.5 / std::sqrt(w); }, 1.0};
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(0.0, 0.9);
    for (int i = 0; i < 50; ++i) {
        const Disk ball{1.0, u(rng)};
        const Disk pre = pullback_ball(root, ball);
        for (int k = 0; k < 2000; ++k) {
            const cplx edge = std::sqrt(ball.center + std::polar(ball.radius, 2.0 * kPi * k / 2000));
            CHECK(std::abs(edge - pre.center) >= pre.radius);
        }
    }
}
