#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "implosion/series.hpp"

namespace implosion::hypgeo {

// Distance for |dz|/|Im z| on the lower half-plane.
double hyp_dist_halfplane(cplx z1, cplx z2);

// C_I = C \ (R \ I) for I = (a, d), with the hyperbolic metric of curvature -1.
// zeta = sqrt((z - a)/(d - z)) maps C_I onto the right half-plane Re zeta > 0
// (I goes to the positive reals); (zeta - 1)/(zeta + 1) continues to the unit disk.
class SlitPlaneDomain {
public:
    SlitPlaneDomain(double a, double d);

    double a() const { return a_; }
    double d() const { return d_; }
    bool contains(cplx z) const;

    cplx to_halfplane(cplx z) const;
    cplx from_halfplane(cplx zeta) const;
    cplx to_disk(cplx z) const;
    cplx from_disk(cplx w) const;

    // Metric density at z: |zeta'(z)| / Re zeta(z).
    double density(cplx z) const;
    // Euclidean distance from z to the slits R \ (a, d).
    double boundary_distance(cplx z) const;

private:
    double a_;
    double d_;
};

double hyp_dist_slit(const SlitPlaneDomain& dom, cplx z1, cplx z2);

struct Disk {
    cplx center;
    double radius = 0.0;
};

// Points on the boundary of the hyperbolic ball B_U(center, r).
std::vector<cplx> ball_boundary(const SlitPlaneDomain& dom, cplx center, double r, int samples);

// Largest euclidean disk centred at `center` inside B_U(center, r).
Disk inscribed_disk(const SlitPlaneDomain& dom, cplx center, double r);

struct KoebeBounds {
    double lower;
    double upper;
};

// Bounds on |f'(z)|/|f'(0)| for f univalent on the unit disk and |z| = r.
KoebeBounds koebe_bounds(double r);

struct Cone {
    cplx apex;
    double direction_deg = -90.0;
    double opening_deg = 30.0;

    bool contains(cplx z) const;
};

struct ConeConstants {
    double K = 1.0;
    double M0 = 0.0;
    double r0 = 0.0;
    double depth = 0.5;  // cone ball centre at apex - i depth |b - c|
    double opening_deg = 30.0;
    double direction_deg = -90.0;
    std::uint64_t seed = 0;
    int validated = 0;  // random triples checked
};

struct ConeSearchOptions {
    double depth = 0.5;
    double opening_deg = 30.0;
    int grid_lengths = 9;   // per side length, log-spaced in [1/K, K]
    int grid_base = 17;     // cone base points across [a, d]
    int boundary_samples = 128;
    int validation_triples = 1000;
    std::uint64_t seed = 0x5eed;
    int refinements = 2;
};

// Normalized triple [a,b), [b,c), [c,d) with b = 0, c = 1.
struct Triple {
    double left;   // |b - a|
    double right;  // |d - c|
};

// Largest r with B_U(x - i depth, r) inside the cone at x, U = C_(a,d).
double cone_ball_radius(const Triple& t, double x, const ConeSearchOptions& opt);
// Upper bound on diam_U([b, c] U B_U(x - i depth, r)).
double cone_ball_diameter(const Triple& t, double x, double r, double depth);

// Throws ValidationError naming the offending triple if validation fails
// after all refinements. K >= 1 (K = 1 is the single equal-length triple).
ConeConstants cone_search(double K, const ConeSearchOptions& opt = {});

// Checks constants on `count` fresh random triples; returns the number of failures.
int validate_cone_constants(const ConeConstants& cc, int count, std::uint64_t seed,
                            std::string* counterexample = nullptr);

// An inverse branch g known to be univalent on the disk of radius
// univalence_radius about the centre of the ball it is applied to.
struct Branch {
    std::function<cplx(cplx)> map;
    std::function<cplx(cplx)> derivative;
    double univalence_radius = 0.0;  // +inf for affine branches
};

// Euclidean disk guaranteed inside g(ball), from the Koebe growth bound on
// D(center, R): radius |g'(c)| rho / (1 + rho/R)^2.
Disk pullback_ball(const Branch& g, const Disk& ball);
Disk pullback_ball(const Branch& g, const SlitPlaneDomain& dom, cplx center, double r);

}  // namespace implosion::hypgeo
