#include "implosion/fatou.hpp"

#include <cmath>
#include <numbers>

#include "implosion/errors.hpp"

namespace implosion::fatou {

namespace {

constexpr double kEscapeSq = 16.0;

int expansion_terms(const AtlasOptions& o, int q) {
    return o.expansion_terms > 0 ? o.expansion_terms : 6 * q + 24;
}

}  // namespace

cplx leading_fatou(const parabolic::ParabolicGerm& germ, int q, cplx z) {
    if (z == cplx{}) throw DomainError("leading_fatou: z = 0");
    return -1.0 / (static_cast<double>(q) * germ.a * std::pow(z, q));
}

FatouAtlas::FatouAtlas(parabolic::ParabolicPolynomial poly, AtlasOptions options)
    : poly_(std::move(poly)), options_(options) {
    const int q = poly_.period();
    if (options_.attracting_petal < 0 || options_.attracting_petal >= q ||
        options_.repelling_petal < 0 || options_.repelling_petal >= q)
        throw DomainError("FatouAtlas: petal index out of range");
    if (!(options_.tol > 0.0)) throw DomainError("FatouAtlas: tol must be positive");

    const int J = expansion_terms(options_, q);
    germ_ = parabolic::germ_coefficients(poly_, J + 2 * q + 1);
    expansion_ = AbelExpansion(germ_.coefficients, q, J);
    trap_ = parabolic::PetalTrap(poly_, germ_);

    attract_dir_ = trap_.attracting_direction(options_.attracting_petal);
    attract_log_ = {0.0, std::arg(attract_dir_)};
    repel_dir_ = trap_.repelling_direction(options_.repelling_petal);
    repel_log_ = {0.0, std::arg(repel_dir_)};

    // First point of the critical orbit inside the selected petal's trap.
    cplx z = poly_.critical_point();
    for (long s = 0;; ++s) {
        if (trap_.petal_of(z) == options_.attracting_petal) break;
        if (s > static_cast<long>(options_.max_depth) * q)
            throw NotCertified("FatouAtlas: critical orbit never reached the trap");
        z = poly_(z);
    }
    anchor_ = z;
    offset_ = 0.0;
    offset_ = phi_raw(anchor_);
}

cplx FatouAtlas::approx_fatou(cplx z) const {
    if (z == cplx{}) throw DomainError("approx_fatou: z = 0");
    const int q = poly_.period();
    cplx best = trap_.attracting_direction(0);
    for (int k = 1; k < q; ++k) {
        const cplx d = trap_.attracting_direction(k);
        if (std::abs(std::arg(z / d)) < std::abs(std::arg(z / best))) best = d;
    }
    return expansion_.eval(z, best, {0.0, std::arg(best)});
}

cplx FatouAtlas::phi_raw(cplx z) const {
    const int q = poly_.period();
    const long budget = static_cast<long>(options_.max_depth) * q;
    long s = 0;
    while (trap_.petal_of(z) != options_.attracting_petal) {
        if (std::norm(z) > kEscapeSq) throw NotCertified("phi: orbit escapes");
        if (s >= budget) throw NotCertified("phi: orbit did not reach the attracting trap");
        z = poly_(z);
        ++s;
    }
    const double inv_q = 1.0 / q;
    cplx est = expansion_.eval(z, attract_dir_, attract_log_) - static_cast<double>(s) * inv_q;
    double diff = 0.0;
    for (int depth = 1; depth <= options_.max_depth; ++depth) {
        z = poly_.iterate_q(z);
        s += q;
        const cplx next = expansion_.eval(z, attract_dir_, attract_log_) - static_cast<double>(s) * inv_q;
        diff = std::abs(next - est);
        est = next;
        if (diff < 0.1 * options_.tol) return est - offset_;
    }
    throw PrecisionError("phi: Abel limit did not settle", diff);
}

cplx FatouAtlas::phi(cplx z) const { return phi_raw(z); }

cplx FatouAtlas::inverse_repelling(cplx w) const {
    const int q = poly_.period();
    const cplx c = trap_.leading();
    cplx z = repel_dir_ * std::pow(-std::abs(c) / w, 1.0 / q);
    for (int it = 0; it < 60; ++it) {
        const cplx f = expansion_.eval(z, repel_dir_, repel_log_) - w;
        const cplx dz = f / expansion_.derivative(z);
        z -= dz;
        if (std::abs(dz) <= 4e-16 * std::abs(z)) return z;
    }
    return z;
}

cplx FatouAtlas::psi_at_shift(cplx w, double left) const {
    const double shift = std::ceil(w.real() + left);
    const long n = shift > 0.0 ? static_cast<long>(shift) : 0;
    cplx z = inverse_repelling(w - static_cast<double>(n));
    for (long k = 0; k < n; ++k) {
        z = poly_.iterate_q(z);
        if (!(std::abs(z) < kPsiBailout)) break;
    }
    return z;
}

cplx FatouAtlas::psi(cplx w) const {
    double left = trap_.c0();
    double residual = 0.0;
    for (int attempt = 0; attempt < 16 && left <= options_.max_depth; ++attempt) {
        const cplx a = psi_at_shift(w, left);
        if (!(std::abs(a) < kPsiBailout)) return a;
        const cplx b = psi_at_shift(w, left + 4.0);
        residual = std::abs(a - b);
        if (residual < 0.1 * options_.tol * std::max(1.0, std::abs(a))) return b;
        left *= 2.0;
    }
    throw PrecisionError("psi: left shift did not settle", residual);
}

}  // namespace implosion::fatou
