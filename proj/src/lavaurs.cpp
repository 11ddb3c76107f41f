#include "implosion/lavaurs.hpp"

#include <cmath>
#include <numbers>

#include "implosion/errors.hpp"

namespace implosion::lavaurs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSegmentSamples = 16;
constexpr double kStableTol = 1e-6;
constexpr double kMaxHeight = 40.0;

cplx multiplier(End end, cplx nu) {
    const cplx i2pi{0.0, kTwoPi};
    return end == End::Upper ? std::exp(i2pi * nu) : std::exp(-i2pi * nu);
}

cplx segment_mean(const LavaursSystem& sys, double im) {
    cplx acc{};
    for (int k = 0; k < kSegmentSamples; ++k) {
        const cplx w{static_cast<double>(k) / kSegmentSamples, im};
        acc += sys.horn_map(w) - w;
    }
    return acc / static_cast<double>(kSegmentSamples);
}

}  // namespace

LavaursSystem::LavaursSystem(std::shared_ptr<const fatou::FatouAtlas> atlas, cplx sigma, int depth_limit)
    : atlas_(std::move(atlas)), sigma_(sigma), depth_limit_(depth_limit) {
    if (!atlas_) throw DomainError("LavaursSystem: null atlas");
    if (depth_limit_ < 0) throw DomainError("LavaursSystem: negative depth limit");
}

cplx LavaursSystem::lavaurs_map(cplx z) const { return atlas_->psi(atlas_->phi(z) + sigma_); }

cplx LavaursSystem::horn_map(cplx w) const { return atlas_->phi(atlas_->psi(w)) + sigma_; }

VirtualMultiplier end_translation(const LavaursSystem& sys, End end) {
    const double sign = end == End::Upper ? 1.0 : -1.0;
    double h = 6.0;
    cplx prev = segment_mean(sys, sign * h);
    double change = 0.0;
    while (h < kMaxHeight) {
        h += 2.0;
        const cplx cur = segment_mean(sys, sign * h);
        change = std::abs(cur - prev);
        prev = cur;
        if (change < kStableTol) return {end, cur, multiplier(end, cur), h, change};
    }
    throw PrecisionError("end_translation: translation limit did not stabilize", change);
}

cplx solve_sigma(std::shared_ptr<const fatou::FatouAtlas> atlas, double omega, End end) {
    if (!std::isfinite(omega)) throw DomainError("solve_sigma: omega must be finite");
    const LavaursSystem base(atlas, 0.0);
    const cplx nu0 = end_translation(base, end).nu;
    // nu(sigma) = nu(0) + sigma at both ends; m_+ = e(nu_+), m_- = e(-nu_-).
    cplx sigma = end == End::Upper ? omega - nu0 : -omega - nu0;
    sigma -= std::floor(sigma.real());

    const auto check = end_translation(base.with_sigma(sigma), end);
    const cplx target = std::exp(cplx{0.0, kTwoPi * omega});
    const double err = std::abs(check.m - target);
    if (err >= 1e-4) throw PrecisionError("solve_sigma: verification failed", err);
    return sigma;
}

cplx critical_value_phase(const fatou::FatouAtlas& atlas) {
    return atlas.phi(atlas.poly()(atlas.poly().critical_point()));
}

}  // namespace implosion::lavaurs
