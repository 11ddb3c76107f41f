#pragma once

#include <memory>
#include <random>

#include "implosion/circlemap.hpp"
#include "implosion/fatou.hpp"
#include "implosion/lavaurs.hpp"

namespace fixtures {

using implosion::cplx;

inline std::shared_ptr<const implosion::fatou::FatouAtlas> atlas(int p, int q) {
    return std::make_shared<const implosion::fatou::FatouAtlas>(implosion::parabolic::ParabolicPolynomial(p, q));
}

inline std::shared_ptr<const implosion::fatou::FatouAtlas> half_atlas() {
    static const auto a = atlas(1, 2);
    return a;
}

inline double golden() { return 0.5 * (std::sqrt(5.0) - 1.0); }

// p/q = 1/2 at the sigma solved for the golden mean, upper end.
inline const implosion::lavaurs::LavaursSystem& golden_system() {
    static const implosion::lavaurs::LavaursSystem sys(
        half_atlas(), implosion::lavaurs::solve_sigma(half_atlas(), golden(), implosion::lavaurs::End::Upper), 8);
    return sys;
}

inline const implosion::circlemap::CircleMapLift& golden_lift() {
    static const auto lift = implosion::circlemap::tune_rotation(golden(), 1e-10);
    return lift;
}

// Random point of the attracting trap, petal k: w = c0 (1 + s) + i c0 t.
inline cplx trap_point(const implosion::fatou::FatouAtlas& a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& trap = a.trap();
    const int q = trap.q();
    const double c0 = trap.c0();
    const cplx w{c0 * (1.0 + u(rng)), c0 * (2.0 * u(rng) - 1.0)};
    const int k = static_cast<int>(u(rng) * q) % q;
    return trap.attracting_direction(k) * std::pow(std::abs(trap.leading()) / w, 1.0 / q);
}

}  // namespace fixtures
