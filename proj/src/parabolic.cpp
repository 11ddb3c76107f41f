#include "implosion/parabolic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "implosion/abel.hpp"
#include "implosion/errors.hpp"

namespace implosion::parabolic {

namespace {

// Same operation order as the orbit kernels.
inline cplx step(cplx lambda, cplx z) {
    const double x = z.real(), y = z.imag();
    const double x2 = x * x, y2 = y * y;
    return {(lambda.real() * x - lambda.imag() * y) + (x2 - y2),
            (lambda.real() * y + lambda.imag() * x) + 2.0 * x * y};
}

cplx root_of_unity(std::int64_t p, std::int64_t q) {
    const std::int64_t r = ((p % q) + q) % q;
    if ((4 * r) % q == 0) {
        switch ((4 * r) / q) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q));
}

}  // namespace

ParabolicPolynomial::ParabolicPolynomial(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
    if (q < 1) throw DomainError("rotation denominator q must be >= 1");
    if (std::gcd(p, q) != 1) throw DomainError("p/q must be irreducible");
    lambda_ = root_of_unity(p, q);
}

cplx ParabolicPolynomial::iterate_q(cplx z) const {
    for (std::int64_t k = 0; k < q_; ++k) z = step(lambda_, z);
    return z;
}

ParabolicGerm germ_coefficients(const ParabolicPolynomial& poly, int order) {
    const int q = poly.period();
    if (order < q + 1) throw DomainError("germ_coefficients: order must be >= q+1");
    const auto n = static_cast<std::size_t>(order);
    Series z(n);
    z[1] = 1.0;
    Series s = z;
    for (int k = 0; k < q; ++k) s = poly.lambda() * s + s * s;
    return {s[static_cast<std::size_t>(q + 1)], std::move(s), order};
}

EscapeResult escape_test(const ParabolicPolynomial& poly, cplx z, int maxiter, double radius) {
    simd::OrbitParams params;
    params.lambda_re = poly.lambda().real();
    params.lambda_im = poly.lambda().imag();
    params.radius_sq = radius * radius;
    params.maxiter = maxiter;
    const auto r = simd::orbit_point(params, z.real(), z.imag());
    const double modulus = std::hypot(r.re, r.im);
    if (r.status == simd::OrbitStatus::Escaped) return {EscapeStatus::Escaped, r.n, modulus};
    return {EscapeStatus::Bounded, maxiter, modulus};
}

PetalTrap::PetalTrap(const ParabolicPolynomial& poly, const ParabolicGerm& germ) : q_(poly.period()) {
    a_ = germ.a;
    if (std::abs(a_) == 0.0) throw DomainError("PetalTrap: degenerate germ");
    c_ = -1.0 / (static_cast<double>(q_) * a_);

    const ParabolicGerm full =
        germ.order >= 2 * q_ + 1 ? germ : germ_coefficients(poly, 2 * q_ + 1);
    const AbelExpansion expansion(full.coefficients, q_, 0);
    const double b = std::abs(expansion.log_coefficient()) / q_;
    c0_ = 10.0 * (1.0 + b);

    // Sample the trap's inner edge; the worst case sits at small Re w.
    for (int attempt = 0; attempt < 12; ++attempt) {
        bool ok = true;
        for (int k = 0; k < q_ && ok; ++k) {
            const cplx dir = attracting_direction(k);
            for (int i = 0; i <= 8 && ok; ++i) {
                for (int j = -40; j <= 40 && ok; ++j) {
                    const cplx w0{c0_ * (1.0 + 0.25 * i / 8.0), c0_ * 0.5 * j};
                    // dir^q = c/|c|, so z^q = c/w0 has the root dir (|c|/w0)^{1/q}
                    const cplx z = dir * std::pow(std::abs(c_) / w0, 1.0 / q_);
                    const cplx fz = poly.iterate_q(z);
                    ok = (w(fz).real() - w(z).real() >= 0.5) && petal_of(fz) == k;
                }
            }
        }
        if (ok) return;
        c0_ *= 2.0;
    }
    throw PrecisionError("PetalTrap: could not validate the trap region", c0_);
}

cplx PetalTrap::w(cplx z) const { return c_ / std::pow(z, q_); }

bool PetalTrap::contains(cplx z) const {
    double zr = z.real(), zi = z.imag();
    const double x = zr, y = zi;
    for (int k = 1; k < q_; ++k) {
        const double t = zr * x - zi * y;
        zi = zr * y + zi * x;
        zr = t;
    }
    const double mag = zr * zr + zi * zi;
    return c_.real() * zr + c_.imag() * zi > c0_ * mag;
}

int PetalTrap::petal_of(cplx z) const {
    if (!contains(z)) return -1;
    const double base = std::arg(c_) / q_;
    const double turns = (std::arg(z) - base) * q_ / (2.0 * std::numbers::pi);
    const auto k = static_cast<long>(std::lround(turns));
    return static_cast<int>(((k % q_) + q_) % q_);
}

cplx PetalTrap::attracting_direction(int k) const {
    return std::polar(1.0, (std::arg(c_) + 2.0 * std::numbers::pi * k) / q_);
}

cplx PetalTrap::repelling_direction(int k) const {
    return std::polar(1.0, (std::arg(c_) + std::numbers::pi + 2.0 * std::numbers::pi * k) / q_);
}

simd::OrbitParams PetalTrap::orbit_params(const ParabolicPolynomial& poly, int maxiter,
                                          double radius) const {
    simd::OrbitParams params;
    params.lambda_re = poly.lambda().real();
    params.lambda_im = poly.lambda().imag();
    params.radius_sq = radius * radius;
    params.maxiter = maxiter;
    params.trap_enabled = true;
    params.trap_q = q_;
    params.trap_c_re = c_.real();
    params.trap_c_im = c_.imag();
    params.trap_c0 = c0_;
    return params;
}

bool petal_certificate(const ParabolicPolynomial& poly, const PetalTrap& trap, cplx z, int max_steps) {
    const auto params = trap.orbit_params(poly, max_steps);
    const auto r = simd::orbit_point(params, z.real(), z.imag());
    if (r.status != simd::OrbitStatus::Trapped) return false;
    const cplx zt{r.re, r.im};
    const cplx next = poly.iterate_q(zt);
    return trap.w(next).real() - trap.w(zt).real() >= 0.5 && trap.petal_of(next) == trap.petal_of(zt);
}

bool petal_certificate(const ParabolicPolynomial& poly, const ParabolicGerm& germ, cplx z, int max_steps) {
    return petal_certificate(poly, PetalTrap(poly, germ), z, max_steps);
}

}  // namespace implosion::parabolic
