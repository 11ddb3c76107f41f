#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "implosion/hypgeo.hpp"
#include "implosion/series.hpp"

namespace implosion::circlemap {

struct BlaschkeValue {
    cplx value;
    cplx derivative;
};

// B(z) = z^2 (z - 3)/(1 - 3z). Throws DomainError at the pole z = 1/3.
BlaschkeValue blaschke_eval(cplx z);

// Half-height of the strip on which the lift is used.
inline constexpr double kStripHalfHeight = 0.1;

// Lift F of f_t = R_t o B to C, or of the rigid rotation x + t.
// Blaschke: F(x) = t + x + (Log(3 - Z) - Log(3 - 1/Z)) / (2 pi i), Z = e^{2 pi i x};
// analytic off the vertical slits {k -+ i y : y >= ln 3 / (2 pi)}.
class CircleMapLift {
public:
    enum class Kind { Blaschke, Rigid };

    static CircleMapLift blaschke(double t);
    static CircleMapLift rigid(double t);

    Kind kind() const { return kind_; }
    double t() const { return t_; }
    double critical_point() const { return 0.0; }

    cplx operator()(cplx x) const;
    cplx derivative(cplx x) const;
    long double real(long double x) const;
    long double real_derivative(long double x) const;
    // Monotone inverse on R (bracketed Newton). Throws PrecisionError if it cannot bracket y.
    long double inverse_real(long double y) const;

    // Convergent denominators q_0 = 1, q_1, ... of the rotation number the
    // lift was tuned to; needed for dynamical partitions.
    const std::vector<std::int64_t>& denominators() const { return q_; }
    void set_combinatorics(double omega);

private:
    CircleMapLift(Kind k, double t) : kind_(k), t_(t) {}

    Kind kind_;
    double t_;
    std::vector<std::int64_t> q_;
};

struct RotationEstimate {
    double value = 0.0;
    double error = 0.0;  // |rho - value| <= error
    long iterations = 0;
};

// Intersection of the brackets [floor(F^n(0))/n, (floor(F^n(0)) + 1)/n];
// returns once the half-width is <= tol. An exact return F^n(0) = p is
// reported as p/n. Throws PrecisionError if the budget runs out.
RotationEstimate rotation_number(const CircleMapLift& lift, long budget = 20'000'000, double tol = 1e-12);

// Bisection on t in [0, 1]; the returned lift has |rho - omega| <= tol and
// carries the convergent denominators of omega. Throws DomainError if omega
// is outside (0, 1).
CircleMapLift tune_rotation(double omega, double tol);

// Critical orbit F^j(0) mod 1, j < count.
std::vector<double> critical_orbit(const CircleMapLift& lift, int count);
// Rank of each entry in increasing order.
std::vector<int> order_type(const std::vector<double>& points);

struct Interval {
    int index = 0;      // position in the partition
    long double left = 0;   // lifted endpoints, left < right
    long double right = 0;
    double length() const { return static_cast<double>(right - left); }
};

// Circle partitioned by F^{-k}(0) mod 1, 0 <= k < q_n + q_{n+1}; intervals [p_i, p_{i+1}).
class DynamicalPartition {
public:
    DynamicalPartition(int level, std::vector<long double> points, std::vector<int> order);

    int level() const { return level_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<long double>& points() const { return points_; }
    // Backward-orbit index k of points()[i].
    int order(std::size_t i) const { return order_[i]; }

    Interval interval(std::size_t i) const;
    Interval interval_of(double x) const;  // I_n(x)
    std::vector<double> lengths() const;

private:
    int level_;
    std::vector<long double> points_;
    std::vector<int> order_;
};

DynamicalPartition dynamical_partition(const CircleMapLift& lift, int n);

// Partitions of levels 0..n_max sharing one backward orbit.
class PartitionLadder {
public:
    PartitionLadder(const CircleMapLift& lift, int n_max);

    const CircleMapLift& lift() const { return lift_; }
    int n_max() const { return static_cast<int>(levels_.size()) - 1; }
    const DynamicalPartition& level(int n) const;
    // Backward orbit F^{-k}(0) mod 1.
    const std::vector<long double>& backward_orbit() const { return backward_; }

private:
    CircleMapLift lift_;
    std::vector<long double> backward_;
    std::vector<DynamicalPartition> levels_;
};

struct LevelBounds {
    int level = 0;
    std::size_t num_points = 0;
    double max_adjacent_ratio = 1.0;  // max over neighbours of max(r, 1/r)
    double min_interval = 0.0;
    double max_interval = 0.0;
    double max_parent_ratio = 1.0;    // |I_{n-1}(x)| / |I_n(x)|, level >= 1
};

struct CommensurabilityReport {
    std::vector<LevelBounds> levels;
    double K = 1.0;        // max adjacent ratio over all levels
    double K_prime = 1.0;  // scale-matching constant
};

inline constexpr const char* kBoundsCsvHeader = "level,num_points,max_adjacent_ratio,min_interval,max_interval";

CommensurabilityReport real_bounds_report(const PartitionLadder& ladder);
CommensurabilityReport real_bounds_report(const CircleMapLift& lift, int n_max);
std::string to_csv(const CommensurabilityReport& report);

struct ScaleMatch {
    int level = 0;
    double length = 0.0;
    double ratio = 0.0;  // |I_n(x)| / ell
};

// Smallest n with |I_n(x)| <= ell. Throws ResourceError past the ladder's top level.
ScaleMatch scale_match(const PartitionLadder& ladder, double x, double ell);

// Height h1 <= kStripHalfHeight of the 30 degree triangle hanging below the
// critical point whose image under F lies in the upper half-plane.
double triangle_height(const CircleMapLift& lift);

struct PartitionBall {
    int level = 0;
    int interval = 0;
    int m = 0;                 // least backward-orbit index of a, b, c, d
    double interval_length = 0.0;
    hypgeo::Disk ball;         // in the dynamical plane, below I
    double distance = 0.0;     // d(center, I)
    bool triangle_fallback = false;
    bool below_real = false;
    bool image_in_cone = false;   // F^m(ball) inside the cone at the critical point
    bool lands_in_upper = false;  // F^{m+1}(ball) in the upper half-plane
};

// Ball for interval `index` of the given level (>= 2): map the triple by F^m,
// take the cone ball at the critical point in C_(a',d') (or the incircle of the
// triangle if the ball leaves it), pull back by the branch of F^{-m} through
// ]a', d'[ with the Koebe growth bound. Throws PrecisionError if the branch
// continuation fails.
PartitionBall partition_ball(const PartitionLadder& ladder, int level, int index, const hypgeo::ConeConstants& cone,
                             double h1);

// Inverse branch of F^m taking real y0 to real x0, continued along the
// segment [y0, y]; steps no longer than `step`.
cplx inverse_branch(const CircleMapLift& lift, int m, cplx x0, cplx y0, cplx y, double step);

}  // namespace implosion::circlemap
