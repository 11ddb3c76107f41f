#pragma once

#include <memory>

#include "implosion/fatou.hpp"

namespace implosion::lavaurs {

using fatou::End;

// g_sigma = psi_+ o T_sigma o phi_div and h_sigma = T_sigma o phi_div o psi_+.
class LavaursSystem {
public:
    LavaursSystem(std::shared_ptr<const fatou::FatouAtlas> atlas, cplx sigma, int depth_limit = 8);

    const fatou::FatouAtlas& atlas() const { return *atlas_; }
    std::shared_ptr<const fatou::FatouAtlas> atlas_ptr() const { return atlas_; }
    cplx sigma() const { return sigma_; }
    int depth_limit() const { return depth_limit_; }

    LavaursSystem with_sigma(cplx sigma) const { return {atlas_, sigma, depth_limit_}; }

    // Throws NotCertified when z is not certified in int K.
    cplx lavaurs_map(cplx z) const;
    // Throws NotCertified when psi_+(w) is not certified in int K.
    cplx horn_map(cplx w) const;

private:
    std::shared_ptr<const fatou::FatouAtlas> atlas_;
    cplx sigma_;
    int depth_limit_;
};

struct VirtualMultiplier {
    End end;
    cplx nu;          // lim h(w) - w at the end
    cplx m;           // exp(2 pi i nu) upper, exp(-2 pi i nu) lower
    double height;    // |Im w| of the accepted sampling segment
    double change;    // difference to the previous segment's estimate
};

// Mean of h(w) - w over 16 points Re w = k/16 on Im w = +-H, H = 6, 8, ...
// until two successive estimates agree to 1e-6. Throws PrecisionError past H = 40.
VirtualMultiplier end_translation(const LavaursSystem& sys, End end);

// sigma (Re sigma in [0,1)) whose virtual multiplier at `end` is exp(2 pi i omega);
// only omega mod 1 matters.
cplx solve_sigma(std::shared_ptr<const fatou::FatouAtlas> atlas, double omega, End end);

// Diagnostic: phi_div of the critical value.
cplx critical_value_phase(const fatou::FatouAtlas& atlas);

}  // namespace implosion::lavaurs
