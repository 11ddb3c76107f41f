#pragma once

#include <cstdint>
#include <vector>

#include "implosion/kernels.hpp"
#include "implosion/series.hpp"

namespace implosion::parabolic {

// P(z) = lambda z + z^2 with lambda = exp(2 pi i p/q).
class ParabolicPolynomial {
public:
    ParabolicPolynomial(std::int64_t p, std::int64_t q);

    std::int64_t p() const { return p_; }
    std::int64_t q() const { return q_; }
    int period() const { return static_cast<int>(q_); }
    cplx lambda() const { return lambda_; }

    cplx operator()(cplx z) const { return lambda_ * z + z * z; }
    cplx derivative(cplx z) const { return lambda_ + 2.0 * z; }
    // P^q, evaluated with the same step as the orbit kernels.
    cplx iterate_q(cplx z) const;
    cplx critical_point() const { return -lambda_ / 2.0; }

private:
    std::int64_t p_;
    std::int64_t q_;
    cplx lambda_;
};

// Power series of P^q at 0: z + a z^{q+1} + ...
struct ParabolicGerm {
    cplx a;
    Series coefficients;  // coefficients[k] of z^k, k <= order
    int order = 0;
};

ParabolicGerm germ_coefficients(const ParabolicPolynomial& poly, int order);

enum class EscapeStatus { Escaped, Bounded };

struct EscapeResult {
    EscapeStatus status;
    int iterations;  // n for Escaped, the cutoff for Bounded
    double final_modulus;
};

inline constexpr double kDefaultEscapeRadius = 4.0;

EscapeResult escape_test(const ParabolicPolynomial& poly, cplx z, int maxiter,
                         double radius = kDefaultEscapeRadius);

// Attracting trap in the coordinate w = -1/(q a z^q): the region Re w > c0,
// split into q petals by the argument of z.
class PetalTrap {
public:
    PetalTrap() = default;
    // c0 defaults to 10 (1 + |b|) where b is the coefficient of log(z^q) in
    // the formal Fatou coordinate. The region is checked by sampling and
    // c0 is doubled until every sampled step gains at least 1/2 in Re w.
    PetalTrap(const ParabolicPolynomial& poly, const ParabolicGerm& germ);

    int q() const { return q_; }
    double c0() const { return c0_; }
    cplx leading() const { return c_; }  // -1/(q a)
    cplx w(cplx z) const;                // leading-order attracting coordinate
    bool contains(cplx z) const;
    // Petal k is centred on attracting_direction(k); returns -1 outside the trap.
    int petal_of(cplx z) const;
    cplx attracting_direction(int k) const;
    cplx repelling_direction(int k) const;

    simd::OrbitParams orbit_params(const ParabolicPolynomial& poly, int maxiter,
                                   double radius = kDefaultEscapeRadius) const;

private:
    int q_ = 1;
    cplx a_{};
    cplx c_{};
    double c0_ = 0.0;
};

// True only if the P-orbit of z enters the trap within max_steps and the
// next P^q step increases Re w by at least 1/2. True implies z in int K.
bool petal_certificate(const ParabolicPolynomial& poly, const PetalTrap& trap, cplx z,
                       int max_steps = 100000);
bool petal_certificate(const ParabolicPolynomial& poly, const ParabolicGerm& germ, cplx z,
                       int max_steps = 100000);

}  // namespace implosion::parabolic
