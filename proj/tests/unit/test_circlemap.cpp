#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "implosion/cfrac.hpp"
#include "implosion/circlemap.hpp"
#include "implosion/errors.hpp"

using namespace implosion;
using namespace implosion::circlemap;

TEST_CASE("Blaschke model") {
    CHECK(std::abs(blaschke_eval(1.0).value - 1.0) < 1e-15);
    CHECK(std::abs(blaschke_eval(0.0).value) == 0.0);
    CHECK(std::abs(blaschke_eval(1.0).derivative) < 1e-15);
    // Double zero of B' at 1: B'(1 + h) = O(h^2).
    for (double h : {1e-2, 1e-3}) {
        const double ratio = std::abs(blaschke_eval(1.0 + h).derivative) / (h * h);
        CHECK(ratio == doctest::Approx(std::abs(blaschke_eval(1.0 + h / 2).derivative) / (h * h / 4)).epsilon(0.02));
    }
    CHECK_THROWS_AS(blaschke_eval(1.0 / 3.0), DomainError);
}

TEST_CASE("lift agrees with the Blaschke product on the circle") {
    const auto lift = CircleMapLift::blaschke(0.27);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-2.0, 2.0), v(-0.1, 0.1);
    for (int i = 0; i < 100; ++i) {
        const cplx x{u(rng), v(rng)};
        const cplx Z = std::exp(cplx(0.0, 2.0 * M_PI) * x);
        const cplx want = std::exp(cplx(0.0, 2.0 * M_PI * 0.27)) * blaschke_eval(Z).value;
        CHECK(std::abs(std::exp(cplx(0.0, 2.0 * M_PI) * lift(x)) - want) < 1e-12);
        CHECK(std::abs(lift(x + 1.0) - lift(x) - 1.0) < 1e-12);
        const double h = 1e-6;
        const cplx fd = (lift(x + h) - lift(x - h)) / (2.0 * h);
        CHECK(std::abs(fd - lift.derivative(x)) < 1e-6);
        const long double xr = x.real();
        CHECK(std::abs(static_cast<double>(lift.real(xr)) - lift(xr).real()) < 1e-12);
        CHECK(std::abs(static_cast<double>(lift.inverse_real(lift.real(xr)) - xr)) < 1e-13);
    }
}

TEST_CASE("rotation numbers") {
    const auto rigid = CircleMapLift::rigid(0.3);
    CHECK(std::abs(rotation_number(rigid).value - 0.3) < 1e-12);
    const auto& lift = fixtures::golden_lift();
    const auto rho = rotation_number(lift, 20'000'000, 1e-11);
    CHECK(std::abs(rho.value - fixtures::golden()) < 1e-8);
    CHECK_THROWS_AS(tune_rotation(1.5, 1e-8), DomainError);
}

TEST_CASE("critical orbit has rigid order type") {
    const auto& lift = fixtures::golden_lift();
    const auto rigid = CircleMapLift::rigid(fixtures::golden());
    for (int count : {5, 8, 13, 21, 34, 55}) CHECK(order_type(critical_orbit(lift, count)) == order_type(critical_orbit(rigid, count)));
}

TEST_CASE("partition sizes and nesting") {
    const auto& lift = fixtures::golden_lift();
    const auto& q = lift.denominators();
    const PartitionLadder ladder(lift, 10);
    for (int n = 0; n <= 10; ++n) CHECK(ladder.level(n).size() == static_cast<std::size_t>(q[n] + q[n + 1]));
    CHECK(ladder.level(2).size() == 5);
    const auto& p2 = ladder.level(2).points();
    const auto& p3 = ladder.level(3).points();
    for (long double x : p2) CHECK(std::find(p3.begin(), p3.end(), x) != p3.end());
    CHECK_THROWS_AS(ladder.level(11), ResourceError);

    double prev = 1.0;
    for (int n = 0; n <= 10; ++n) {
        const auto len = ladder.level(n).lengths();
        double total = 0.0;
        for (double l : len) total += l;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        const double mx = *std::max_element(len.begin(), len.end());
        CHECK(mx <= prev);
        prev = mx;
    }
}

TEST_CASE("rigid golden rotation obeys the three-gap theorem") {
    // Level n of the rotation by theta has gaps ||q_n theta|| (q_{n+1} times)
    // and ||q_{n+1} theta|| (q_n times).
    const double theta = fixtures::golden();
    auto rigid = CircleMapLift::rigid(theta);
    const PartitionLadder ladder(rigid, 10);
    const auto& q = rigid.denominators();
    auto dist = [&](std::int64_t k) {
        const double x = k * theta;
        return std::abs(x - std::round(x));
    };
    const auto rep = real_bounds_report(ladder);
    for (int n = 1; n <= 10; ++n) {
        std::map<long, int> hist;
        for (double l : ladder.level(n).lengths()) ++hist[std::lround(l * 1e9)];
        REQUIRE(hist.size() == 2);
        CHECK(hist[std::lround(dist(q[n]) * 1e9)] == q[n + 1]);
        CHECK(hist[std::lround(dist(q[n + 1]) * 1e9)] == q[n]);
        CHECK(rep.levels[n].max_adjacent_ratio <= (1.0 + theta) * (1.0 + theta) + 1e-9);
    }
}

TEST_CASE("real bounds report") {
    const auto& lift = fixtures::golden_lift();
    const auto rep = real_bounds_report(lift, 10);
    REQUIRE(rep.levels.size() == 11);
    for (const auto& l : rep.levels) {
        CHECK(l.max_adjacent_ratio >= 1.0);
        CHECK(l.max_adjacent_ratio <= rep.K);
        CHECK(l.max_parent_ratio >= 1.0);
    }
    CHECK(std::isfinite(rep.K));
    CHECK(rep.K_prime >= 1.0);
    CHECK(to_csv(rep).rfind(std::string(kBoundsCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("scale matching") {
    const auto& lift = fixtures::golden_lift();
    const PartitionLadder ladder(lift, 14);
    const auto rep = real_bounds_report(ladder);
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double x = ux(rng);
        const double ell = ladder.level(3).interval_of(x).length();
        const auto sm = scale_match(ladder, x, ell);
        CHECK(sm.level <= 3);
        CHECK(sm.ratio >= 1.0 / rep.K_prime);
        CHECK(sm.ratio <= rep.K_prime);
        CHECK(scale_match(ladder, x, 0.9).level <= 1);
    }
    CHECK_THROWS_AS(scale_match(ladder, 0.3, 1e-9), ResourceError);
}

TEST_CASE("triangle height and partition balls") {
    const auto& lift = fixtures::golden_lift();
    const double h1 = triangle_height(lift);
    CHECK(h1 > 0.0);
    CHECK(h1 <= kStripHalfHeight);
    const PartitionLadder ladder(lift, 5);
    const auto cone = hypgeo::cone_search(real_bounds_report(ladder).K);
    for (int n = 2; n <= 4; ++n) {
        for (int i = 0; i < static_cast<int>(ladder.level(n).size()); ++i) {
            const auto b = partition_ball(ladder, n, i, cone, h1);
            CHECK(b.below_real);
            CHECK(b.image_in_cone);
            CHECK(b.lands_in_upper);
            CHECK(b.ball.center.imag() + b.ball.radius < 0.0);
            CHECK(b.ball.radius > 0.0);
        }
    }
}

TEST_CASE("inverse branch inverts F^m") {
    const auto& lift = fixtures::golden_lift();
    const cplx x0 = 0.2;
    cplx y0 = x0;
    for (int j = 0; j < 5; ++j) y0 = lift(y0);
    const cplx y = y0 + cplx(0.0, -0.01);
    const cplx x = inverse_branch(lift, 5, x0, y0, y, 0.002);
    cplx fx = x;
    for (int j = 0; j < 5; ++j) fx = lift(fx);
    CHECK(std::abs(fx - y) < 1e-10);
}
