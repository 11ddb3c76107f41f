#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "implosion/cfrac.hpp"
#include "implosion/errors.hpp"

using namespace implosion;

namespace {

// Quotients of the exact binary value of x by integer Euclid.
std::vector<std::int64_t> exact_quotients(double x, std::size_t n) {
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m 2^e
    using u128 = unsigned __int128;
    u128 num = static_cast<u128>(std::ldexp(m, 53));
    u128 den = static_cast<u128>(1) << (53 - e);
    std::vector<std::int64_t> out;
    while (num != 0 && out.size() < n) {
        // x = num/den in (0,1): next quotient is floor(den/num).
        out.push_back(static_cast<std::int64_t>(den / num));
        const u128 r = den % num;
        den = num;
        num = r;
    }
    return out;
}

}  // namespace

TEST_CASE("golden mean expands to ones") {
    const auto cf = cfrac::expand(0.5 * (std::sqrt(5.0) - 1.0), 5);
    CHECK(cf.quotients == std::vector<std::int64_t>{1, 1, 1, 1, 1});
    CHECK(cfrac::golden(7).quotients == std::vector<std::int64_t>(7, 1));
}

TEST_CASE("rational input terminates") {
    CHECK(cfrac::expand(1.0 / 3.0, 5).quotients == std::vector<std::int64_t>{3});
}

TEST_CASE("pi - 3 against exact integer arithmetic") {
    const double x = M_PI - 3.0;
    const auto want = exact_quotients(x, 4);
    CHECK(want == std::vector<std::int64_t>{7, 15, 1, 292});
    CHECK(cfrac::expand(x, 4).quotients == want);
    CHECK_FALSE(cfrac::is_bounded_type(cfrac::expand(x, 4), 10));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(cfrac::expand(0.0, 3), DomainError);
    CHECK_THROWS_AS(cfrac::expand(1.5, 3), DomainError);
    CHECK_THROWS_AS(cfrac::convergents(cfrac::ContinuedFraction{}), DomainError);
}

TEST_CASE("convergents") {
    const auto fib = cfrac::denominators(cfrac::golden(5));
    CHECK(std::vector<std::int64_t>(fib.begin() + 1, fib.end()) == std::vector<std::int64_t>{1, 2, 3, 5, 8});

    const auto third = cfrac::convergents(cfrac::from_quotients({3}));
    REQUIRE(third.size() == 1);
    CHECK(third[0].p == 1);
    CHECK(third[0].q == 3);

    // Recurrence oracle p_k = a_k p_{k-1} + p_{k-2}.
    const std::vector<std::int64_t> a{7, 15, 1};
    std::int64_t p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // p_{-1}/q_{-1}, p_0/q_0
    const auto c = cfrac::convergents(cfrac::from_quotients(a));
    REQUIRE(c.size() == a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const std::int64_t p = a[k] * p1 + p0, q = a[k] * q1 + q0;
        CHECK(c[k].p == p);
        CHECK(c[k].q == q);
        p0 = p1, q0 = q1, p1 = p, q1 = q;
    }
    CHECK(c[2].p == 16);
    CHECK(c[2].q == 113);
}

TEST_CASE("bounded type") {
    CHECK(cfrac::is_bounded_type(cfrac::golden(20), 1));
    const auto cf = cfrac::from_quotients({2, 5, 3, 1});
    CHECK(cfrac::is_bounded_type(cf, 5));
    CHECK_FALSE(cfrac::is_bounded_type(cf, 4));
}

TEST_CASE("property: convergent approximation and alternating signs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cf = cfrac::expand(u(rng), 12);
        const auto c = cfrac::convergents(cf);
        for (std::size_t k = 0; k + 1 < c.size(); ++k) {
            const double err = std::abs(cf.value - static_cast<double>(c[k].p) / c[k].q);
            // Slack for the rounding of the double value itself.
            CHECK(err <= 1.0 / (static_cast<double>(c[k].q) * c[k + 1].q) + 1e-15);
            if (k + 2 < c.size()) {
                const double s0 = c[k].q * cf.value - c[k].p;
                const double s1 = c[k + 1].q * cf.value - c[k + 1].p;
                // A zero residual means the convergent is the double value itself.
                if (s0 != 0.0 && s1 != 0.0) CHECK(s0 * s1 < 0.0);
            }
        }
    }
}
