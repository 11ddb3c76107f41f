#pragma once

#include "implosion/abel.hpp"
#include "implosion/parabolic.hpp"

namespace implosion::fatou {

// Ends of the Ecalle-Voronin cylinder in repelling coordinates: Im w -> +inf / -inf.
enum class End { Upper, Lower };

struct AtlasOptions {
    End chosen_end = End::Upper;
    int attracting_petal = 0;
    int repelling_petal = 0;
    double tol = 1e-9;
    int max_depth = 100000;
    int expansion_terms = 0;  // 0 selects 6q + 24
};

// Attracting Fatou coordinate phi_div on int K and the repelling
// parametrization psi_+ : C -> C of P^q, both normalized:
//   phi_div(anchor) = 0 where the anchor is the first point of the critical
//   orbit inside the selected attracting petal's trap;
//   psi_+ has no constant term in its asymptotic expansion at the repelling petal.
//
// Immutable once built; all evaluations are const and thread-safe.
class FatouAtlas {
public:
    explicit FatouAtlas(parabolic::ParabolicPolynomial poly, AtlasOptions options = {});

    const parabolic::ParabolicPolynomial& poly() const { return poly_; }
    const parabolic::ParabolicGerm& germ() const { return germ_; }
    const parabolic::PetalTrap& trap() const { return trap_; }
    const AbelExpansion& expansion() const { return expansion_; }
    const AtlasOptions& options() const { return options_; }
    End chosen_end() const { return options_.chosen_end; }
    double tol() const { return options_.tol; }
    int max_depth() const { return options_.max_depth; }
    cplx anchor() const { return anchor_; }

    // Asymptotic attracting coordinate u(z), log branch of the nearest
    // attracting direction. z != 0.
    cplx approx_fatou(cplx z) const;

    // phi_div(z). Throws NotCertified if the orbit does not reach the trap
    // of the selected petal within max_depth steps of P^q.
    cplx phi(cplx z) const;

    // psi_+(w). Throws PrecisionError if the left shift does not settle.
    cplx psi(cplx w) const;

    // Solves u_rep(z) = w for z in the selected repelling petal, Re w << 0.
    cplx inverse_repelling(cplx w) const;

    // Orbits leaving this disk inside psi are reported at the first iterate outside.
    static constexpr double kPsiBailout = 1e8;

private:
    cplx phi_raw(cplx z) const;
    cplx psi_at_shift(cplx w, double left) const;

    parabolic::ParabolicPolynomial poly_;
    AtlasOptions options_;
    parabolic::ParabolicGerm germ_;
    AbelExpansion expansion_;
    parabolic::PetalTrap trap_;
    cplx attract_dir_;
    cplx attract_log_;
    cplx repel_dir_;
    cplx repel_log_;
    cplx anchor_;
    cplx offset_;
};

// Leading term -1/(q a z^q) of the attracting coordinate.
cplx leading_fatou(const parabolic::ParabolicGerm& germ, int q, cplx z);

}  // namespace implosion::fatou
