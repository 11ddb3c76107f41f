#include "implosion/hypgeo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "implosion/errors.hpp"

namespace implosion::hypgeo {

namespace {

constexpr double kPi = std::numbers::pi;

double halfplane_distance(cplx z1, cplx z2) {
    // Right half-plane, |dz| / Re z.
    return 2.0 * std::asinh(std::abs(z1 - z2) / (2.0 * std::sqrt(z1.real() * z2.real())));
}

double loguniform(std::mt19937_64& rng, double K) {
    if (K <= 1.0) return 1.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return std::pow(K, u(rng));
}

std::vector<double> grid_lengths(double K, int n) {
    if (K <= 1.0 || n < 2) return {1.0};
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(std::pow(K, -1.0 + 2.0 * i / (n - 1)));
    return out;
}

bool ball_in_cone(const SlitPlaneDomain& dom, const Cone& cone, cplx center, double r, int samples) {
    for (cplx z : ball_boundary(dom, center, r, samples))
        if (!cone.contains(z)) return false;
    return true;
}

SlitPlaneDomain triple_domain(const Triple& t) { return {-t.left, 1.0 + t.right}; }

std::string describe(const Triple& t, double x) {
    std::ostringstream os;
    os.precision(17);
    os << "a=" << -t.left << " b=0 c=1 d=" << 1.0 + t.right << " x=" << x;
    return os.str();
}

struct Sweep {
    double r_min = std::numeric_limits<double>::infinity();
};

}  // namespace

double hyp_dist_halfplane(cplx z1, cplx z2) {
    if (!(z1.imag() < 0.0) || !(z2.imag() < 0.0))
        throw DomainError("hyp_dist_halfplane: points must lie strictly below the real axis");
    return 2.0 * std::asinh(std::abs(z1 - z2) / (2.0 * std::sqrt(z1.imag() * z2.imag())));
}

SlitPlaneDomain::SlitPlaneDomain(double a, double d) : a_(a), d_(d) {
    if (!(a < d)) throw DomainError("SlitPlaneDomain: need a < d");
}

bool SlitPlaneDomain::contains(cplx z) const {
    return z.imag() != 0.0 || (z.real() > a_ && z.real() < d_);
}

cplx SlitPlaneDomain::to_halfplane(cplx z) const {
    if (!contains(z)) throw DomainError("SlitPlaneDomain: point on the slits");
    return std::sqrt((z - a_) / (d_ - z));
}

cplx SlitPlaneDomain::from_halfplane(cplx zeta) const {
    const cplx s = zeta * zeta;
    return (a_ + d_ * s) / (1.0 + s);
}

cplx SlitPlaneDomain::to_disk(cplx z) const {
    const cplx zeta = to_halfplane(z);
    return (zeta - 1.0) / (zeta + 1.0);
}

cplx SlitPlaneDomain::from_disk(cplx w) const { return from_halfplane((1.0 + w) / (1.0 - w)); }

double SlitPlaneDomain::density(cplx z) const {
    const cplx zeta = to_halfplane(z);
    const cplx dzeta = (d_ - a_) / (2.0 * zeta * (d_ - z) * (d_ - z));
    return std::abs(dzeta) / zeta.real();
}

double SlitPlaneDomain::boundary_distance(cplx z) const {
    if (z.real() <= a_ || z.real() >= d_) return std::abs(z.imag());
    return std::min(std::abs(z - a_), std::abs(z - d_));
}

double hyp_dist_slit(const SlitPlaneDomain& dom, cplx z1, cplx z2) {
    return halfplane_distance(dom.to_halfplane(z1), dom.to_halfplane(z2));
}

std::vector<cplx> ball_boundary(const SlitPlaneDomain& dom, cplx center, double r, int samples) {
    const cplx zeta = dom.to_halfplane(center);
    const cplx c{zeta.real() * std::cosh(r), zeta.imag()};
    const double rho = zeta.real() * std::sinh(r);
    std::vector<cplx> out;
    out.reserve(samples);
    for (int k = 0; k < samples; ++k)
        out.push_back(dom.from_halfplane(c + std::polar(rho, 2.0 * kPi * k / samples)));
    return out;
}

Disk inscribed_disk(const SlitPlaneDomain& dom, cplx center, double r) {
    const cplx zeta = dom.to_halfplane(center);
    const cplx c{zeta.real() * std::cosh(r), zeta.imag()};
    const double rho = zeta.real() * std::sinh(r);
    auto dist = [&](double theta) { return std::abs(dom.from_halfplane(c + std::polar(rho, theta)) - center); };

    constexpr int kSamples = 720;
    const double h = 2.0 * kPi / kSamples;
    int best = 0;
    double best_d = dist(0.0);
    for (int k = 1; k < kSamples; ++k) {
        const double d = dist(k * h);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    // Golden-section refinement around the best sample.
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = (best - 1) * h, hi = (best + 1) * h;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = dist(x1), f2 = dist(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = dist(x2);
        }
    }
    best_d = std::min({best_d, f1, f2});
    return {center, best_d * (1.0 - 1e-9)};
}

KoebeBounds koebe_bounds(double r) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("koebe_bounds: r must lie in [0,1)");
    return {(1.0 - r) / ((1.0 + r) * (1.0 + r) * (1.0 + r)), (1.0 + r) / ((1.0 - r) * (1.0 - r) * (1.0 - r))};
}

bool Cone::contains(cplx z) const {
    const cplx v = z - apex;
    if (v == cplx{}) return false;
    const double dir = direction_deg * kPi / 180.0;
    const double dev = std::abs(std::arg(v * std::polar(1.0, -dir)));
    return dev <= 0.5 * opening_deg * kPi / 180.0;
}

double cone_ball_radius(const Triple& t, double x, const ConeSearchOptions& opt) {
    const auto dom = triple_domain(t);
    const Cone cone{x, -90.0, opt.opening_deg};
    const cplx center{x, -opt.depth};
    double lo = 0.0, hi = 1.0;
    while (ball_in_cone(dom, cone, center, hi, opt.boundary_samples)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) return lo;
    }
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ball_in_cone(dom, cone, center, mid, opt.boundary_samples) ? lo : hi) = mid;
    }
    return lo;
}

double cone_ball_diameter(const Triple& t, double x, double r, double depth) {
    const auto dom = triple_domain(t);
    const cplx center{x, -depth};
    const double bc = hyp_dist_slit(dom, 0.0, 1.0);
    const double reach = std::max(hyp_dist_slit(dom, 0.0, center), hyp_dist_slit(dom, 1.0, center)) + r;
    return std::max({bc, 2.0 * r, reach});
}

int validate_cone_constants(const ConeConstants& cc, int count, std::uint64_t seed, std::string* counterexample) {
    std::mt19937_64 rng(seed);
    ConeSearchOptions opt;
    opt.depth = cc.depth;
    opt.opening_deg = cc.opening_deg;
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        const Triple t{loguniform(rng, cc.K), loguniform(rng, cc.K)};
        std::uniform_real_distribution<double> ux(-t.left, 1.0 + t.right);
        const double x = ux(rng);
        const auto dom = triple_domain(t);
        const bool fits = ball_in_cone(dom, Cone{x, cc.direction_deg, cc.opening_deg}, {x, -cc.depth}, cc.r0,
                                       opt.boundary_samples);
        const bool close = cone_ball_diameter(t, x, cc.r0, cc.depth) < cc.M0;
        if (!fits || !close) {
            if (failures == 0 && counterexample) *counterexample = describe(t, x);
            ++failures;
        }
    }
    return failures;
}

ConeConstants cone_search(double K, const ConeSearchOptions& opt) {
    if (!(K >= 1.0)) throw DomainError("cone_search: K must be at least 1");
    ConeSearchOptions cur = opt;
    std::string bad;
    for (int round = 0; round <= opt.refinements; ++round) {
        Sweep sweep;
        const auto lengths = grid_lengths(K, cur.grid_lengths);
        for (double l1 : lengths) {
            for (double l2 : lengths) {
                const Triple t{l1, l2};
                for (int j = 0; j < cur.grid_base; ++j) {
                    const double x = -l1 + (1.0 + l1 + l2) * j / (cur.grid_base - 1);
                    sweep.r_min = std::min(sweep.r_min, cone_ball_radius(t, x, cur));
                }
            }
        }
        ConeConstants cc;
        cc.K = K;
        cc.depth = cur.depth;
        cc.opening_deg = cur.opening_deg;
        cc.r0 = 0.9 * sweep.r_min;
        double diam = 0.0;
        for (double l1 : lengths)
            for (double l2 : lengths)
                for (int j = 0; j < cur.grid_base; ++j) {
                    const double x = -l1 + (1.0 + l1 + l2) * j / (cur.grid_base - 1);
                    diam = std::max(diam, cone_ball_diameter({l1, l2}, x, cc.r0, cur.depth));
                }
        cc.M0 = 1.1 * diam;
        cc.seed = opt.seed;
        const int failures = validate_cone_constants(cc, opt.validation_triples, opt.seed, &bad);
        if (failures == 0) {
            cc.validated = opt.validation_triples;
            return cc;
        }
        cur.grid_lengths = 2 * cur.grid_lengths - 1;
        cur.grid_base = 2 * cur.grid_base - 1;
    }
    throw ValidationError("cone_search: constants fail on triple " + bad);
}

Disk pullback_ball(const Branch& g, const Disk& ball) {
    const double R = g.univalence_radius;
    if (!(ball.radius >= 0.0) || !(ball.radius < R))
        throw DomainError("pullback_ball: ball not inside the branch's univalence disk");
    const double s = std::isinf(R) ? 0.0 : ball.radius / R;
    const double radius = std::abs(g.derivative(ball.center)) * ball.radius / ((1.0 + s) * (1.0 + s));
    return {g.map(ball.center), radius};
}

Disk pullback_ball(const Branch& g, const SlitPlaneDomain& dom, cplx center, double r) {
    return pullback_ball(g, inscribed_disk(dom, center, r));
}

}  // namespace implosion::hypgeo
