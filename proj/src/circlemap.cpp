#include "implosion/circlemap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "implosion/cfrac.hpp"
#include "implosion/errors.hpp"

namespace implosion::circlemap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long double kFloorGuard = 1e-14L;
constexpr long double kExactReturn = 1e-15L;

// Iterates the lift from 0, keeping the fractional part in [0,1) and the
// integer part separately. `decide` sees the current bracket and returns true to stop.
template <class Decide>
long rotation_scan(const CircleMapLift& lift, long budget, Decide&& decide) {
    long double x = 0.0L;
    long double whole = 0.0L;
    long double lo = -std::numeric_limits<long double>::infinity();
    long double hi = std::numeric_limits<long double>::infinity();
    for (long n = 1; n <= budget; ++n) {
        x = lift.real(x);
        const long double fl = std::floor(x);
        x -= fl;
        whole += fl;
        const auto nn = static_cast<long double>(n);
        if (x < kExactReturn || x > 1.0L - kExactReturn) {
            const long double p = whole + (x > 0.5L ? 1.0L : 0.0L);
            if (decide(p / nn, p / nn, true)) return n;
        }
        const long double xn = whole + x;
        lo = std::max(lo, std::floor(xn - kFloorGuard) / nn);
        hi = std::min(hi, (std::floor(xn + kFloorGuard) + 1.0L) / nn);
        if (decide(lo, hi, false)) return n;
    }
    return -1;
}

cplx iterate(const CircleMapLift& lift, int m, cplx x, cplx* deriv) {
    cplx d = 1.0;
    for (int j = 0; j < m; ++j) {
        d *= lift.derivative(x);
        x = lift(x);
    }
    if (deriv) *deriv = d;
    return x;
}

long double iterate_real(const CircleMapLift& lift, int m, long double x) {
    for (int j = 0; j < m; ++j) x = lift.real(x);
    return x;
}

int classify_rotation(const CircleMapLift& lift, double omega, double tol, long budget) {
    int verdict = 2;
    const long double w = omega;
    rotation_scan(lift, budget, [&](long double lo, long double hi, bool) {
        if (hi < w) verdict = -1;
        else if (lo > w) verdict = 1;
        else if (lo >= w - tol && hi <= w + tol) verdict = 0;
        return verdict != 2;
    });
    if (verdict == 2) throw PrecisionError("tune_rotation: rotation number undecided within budget", tol);
    return verdict;
}

}  // namespace

BlaschkeValue blaschke_eval(cplx z) {
    const cplx den = 1.0 - 3.0 * z;
    if (den == cplx{}) throw DomainError("blaschke_eval: pole at z = 1/3");
    const cplx num = z * z * (z - 3.0);
    const cplx dnum = 3.0 * z * z - 6.0 * z;
    return {num / den, (dnum * den + 3.0 * num) / (den * den)};
}

CircleMapLift CircleMapLift::blaschke(double t) { return {Kind::Blaschke, t}; }

CircleMapLift CircleMapLift::rigid(double t) {
    CircleMapLift f{Kind::Rigid, t};
    const double frac = t - std::floor(t);
    if (frac > 0.0) f.set_combinatorics(frac);
    return f;
}

void CircleMapLift::set_combinatorics(double omega) {
    q_ = cfrac::denominators(cfrac::expand(omega, 60));
}

cplx CircleMapLift::operator()(cplx x) const {
    if (kind_ == Kind::Rigid) return x + t_;
    const cplx Z = std::exp(cplx{0.0, 2.0 * kPi} * x);
    return t_ + x + (std::log(3.0 - Z) - std::log(3.0 - 1.0 / Z)) / cplx{0.0, 2.0 * kPi};
}

cplx CircleMapLift::derivative(cplx x) const {
    if (kind_ == Kind::Rigid) return 1.0;
    const cplx Z = std::exp(cplx{0.0, 2.0 * kPi} * x);
    return 1.0 - Z / (3.0 - Z) - 1.0 / (3.0 * Z - 1.0);
}

long double CircleMapLift::real(long double x) const {
    if (kind_ == Kind::Rigid) return x + t_;
    const long double a = 2.0L * kPiL * x;
    return t_ + x + std::atan2(-std::sin(a), 3.0L - std::cos(a)) / kPiL;
}

long double CircleMapLift::real_derivative(long double x) const {
    if (kind_ == Kind::Rigid) return 1.0L;
    const long double c = std::cos(2.0L * kPiL * x);
    return 6.0L * (1.0L - c) / (5.0L - 3.0L * c);
}

long double CircleMapLift::inverse_real(long double y) const {
    if (kind_ == Kind::Rigid) return y - t_;
    // |F(x) - x - t| <= asin(1/3)/pi < 0.11.
    long double lo = y - t_ - 0.5L, hi = y - t_ + 0.5L;
    if (!(real(lo) < y && real(hi) > y)) throw PrecisionError("inverse_real: bracket lost", 0.0);
    // Newton safeguarded by the bracket; bisect when a step leaves it.
    long double x = y - t_;
    for (int it = 0; it < 200; ++it) {
        const long double fx = real(x) - y;
        if (fx == 0.0L) return x;
        (fx < 0.0L ? lo : hi) = x;
        const long double d = real_derivative(x);
        long double next = d > 0.0L ? x - fx / d : lo - 1.0L;
        if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
        if (next == x || hi - lo <= 4.0L * std::numeric_limits<long double>::epsilon() * (1.0L + std::abs(x)))
            return next;
        x = next;
    }
    if (hi - lo > 1e-14L) throw PrecisionError("inverse_real: no convergence", static_cast<double>(hi - lo));
    return x;
}

RotationEstimate rotation_number(const CircleMapLift& lift, long budget, double tol) {
    RotationEstimate est;
    long double width = std::numeric_limits<long double>::infinity();
    const long n = rotation_scan(lift, budget, [&](long double lo, long double hi, bool exact) {
        width = 0.5L * (hi - lo);
        if (exact || width <= tol) {
            est.value = static_cast<double>(0.5L * (lo + hi));
            est.error = static_cast<double>(width);
            return true;
        }
        return false;
    });
    if (n < 0) throw PrecisionError("rotation_number: budget exhausted", static_cast<double>(width));
    est.iterations = n;
    return est;
}

CircleMapLift tune_rotation(double omega, double tol) {
    if (!(omega > 0.0 && omega < 1.0)) throw DomainError("tune_rotation: omega must lie in (0,1)");
    if (!(tol > 0.0)) throw DomainError("tune_rotation: tol must be positive");
    constexpr long kBudget = 50'000'000;
    double lo = 0.0, hi = 1.0;
    if (classify_rotation(CircleMapLift::blaschke(lo), omega, tol, kBudget) >= 0 ||
        classify_rotation(CircleMapLift::blaschke(hi), omega, tol, kBudget) <= 0)
        throw DomainError("tune_rotation: omega not bracketed by t in [0,1]");
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) throw PrecisionError("tune_rotation: parameter interval exhausted", hi - lo);
        auto lift = CircleMapLift::blaschke(mid);
        const int s = classify_rotation(lift, omega, tol, kBudget);
        if (s == 0) {
            lift.set_combinatorics(omega);
            return lift;
        }
        (s < 0 ? lo : hi) = mid;
    }
}

std::vector<double> critical_orbit(const CircleMapLift& lift, int count) {
    std::vector<double> out;
    long double x = lift.critical_point();
    for (int j = 0; j < count; ++j) {
        out.push_back(static_cast<double>(x - std::floor(x)));
        x = lift.real(x);
        x -= std::floor(x);
    }
    return out;
}

std::vector<int> order_type(const std::vector<double>& points) {
    std::vector<int> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return points[i] < points[j]; });
    std::vector<int> rank(points.size());
    for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<int>(r);
    return rank;
}

DynamicalPartition::DynamicalPartition(int level, std::vector<long double> points, std::vector<int> order)
    : level_(level) {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return points[i] < points[j]; });
    for (auto i : idx) {
        points_.push_back(points[i]);
        order_.push_back(order[i]);
    }
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i] - points_[i - 1] > 1e-15L))
            throw PrecisionError("DynamicalPartition: coincident partition points",
                                 static_cast<double>(points_[i] - points_[i - 1]));
}

Interval DynamicalPartition::interval(std::size_t i) const {
    const std::size_t n = points_.size();
    Interval I;
    I.index = static_cast<int>(i);
    I.left = points_[i];
    I.right = i + 1 < n ? points_[i + 1] : points_[0] + 1.0L;
    return I;
}

Interval DynamicalPartition::interval_of(double x) const {
    const long double y = x - std::floor(static_cast<long double>(x));
    auto it = std::upper_bound(points_.begin(), points_.end(), y);
    if (it == points_.begin()) {
        Interval I = interval(points_.size() - 1);
        I.left -= 1.0L;
        I.right -= 1.0L;
        return I;
    }
    return interval(static_cast<std::size_t>(it - points_.begin()) - 1);
}

std::vector<double> DynamicalPartition::lengths() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < points_.size(); ++i) out.push_back(interval(i).length());
    return out;
}

PartitionLadder::PartitionLadder(const CircleMapLift& lift, int n_max) : lift_(lift) {
    const auto& q = lift_.denominators();
    if (n_max < 0) throw DomainError("PartitionLadder: negative level");
    if (static_cast<int>(q.size()) < n_max + 2)
        throw DomainError("PartitionLadder: lift has no rotation combinatorics for this level");
    const std::int64_t total = q[n_max] + q[n_max + 1];
    long double y = lift_.critical_point();
    for (std::int64_t k = 0; k < total; ++k) {
        backward_.push_back(y);
        y = lift_.inverse_real(y);
        y -= std::floor(y);
    }
    for (int n = 0; n <= n_max; ++n) {
        const auto count = static_cast<std::size_t>(q[n] + q[n + 1]);
        std::vector<long double> pts(backward_.begin(), backward_.begin() + count);
        std::vector<int> order(count);
        std::iota(order.begin(), order.end(), 0);
        levels_.emplace_back(n, std::move(pts), std::move(order));
    }
}

const DynamicalPartition& PartitionLadder::level(int n) const {
    if (n < 0 || n > n_max()) throw ResourceError("PartitionLadder: level " + std::to_string(n) + " not computed");
    return levels_[n];
}

DynamicalPartition dynamical_partition(const CircleMapLift& lift, int n) {
    return PartitionLadder(lift, n).level(n);
}

CommensurabilityReport real_bounds_report(const PartitionLadder& ladder) {
    CommensurabilityReport rep;
    double min_top = 1.0;
    for (int n = 0; n <= ladder.n_max(); ++n) {
        const auto& P = ladder.level(n);
        const auto len = P.lengths();
        LevelBounds lb;
        lb.level = n;
        lb.num_points = P.size();
        lb.min_interval = *std::min_element(len.begin(), len.end());
        lb.max_interval = *std::max_element(len.begin(), len.end());
        for (std::size_t i = 0; i < len.size(); ++i) {
            const double r = len[i] / len[(i + 1) % len.size()];
            lb.max_adjacent_ratio = std::max(lb.max_adjacent_ratio, std::max(r, 1.0 / r));
        }
        if (n == 0) min_top = lb.min_interval;
        if (n >= 1) {
            const auto& parent = ladder.level(n - 1);
            for (std::size_t i = 0; i < P.size(); ++i) {
                const auto I = P.interval(i);
                const double mid = static_cast<double>(0.5L * (I.left + I.right));
                lb.max_parent_ratio = std::max(lb.max_parent_ratio, parent.interval_of(mid).length() / I.length());
            }
        }
        rep.K = std::max(rep.K, lb.max_adjacent_ratio);
        rep.K_prime = std::max(rep.K_prime, lb.max_parent_ratio);
        rep.levels.push_back(lb);
    }
    rep.K_prime = std::max(rep.K_prime, 1.0 / min_top);
    return rep;
}

CommensurabilityReport real_bounds_report(const CircleMapLift& lift, int n_max) {
    return real_bounds_report(PartitionLadder(lift, n_max));
}

std::string to_csv(const CommensurabilityReport& report) {
    std::ostringstream os;
    os.precision(12);
    os << kBoundsCsvHeader << '\n';
    for (const auto& l : report.levels)
        os << l.level << ',' << l.num_points << ',' << l.max_adjacent_ratio << ',' << l.min_interval << ','
           << l.max_interval << '\n';
    return os.str();
}

ScaleMatch scale_match(const PartitionLadder& ladder, double x, double ell) {
    if (!(ell > 0.0 && ell < 1.0)) throw DomainError("scale_match: ell must lie in (0,1)");
    for (int n = 0; n <= ladder.n_max(); ++n) {
        const double len = ladder.level(n).interval_of(x).length();
        if (len <= ell) return {n, len, len / ell};
    }
    throw ResourceError("scale_match: scale finer than the computed levels");
}

double triangle_height(const CircleMapLift& lift) {
    const double half = std::tan(15.0 * kPi / 180.0);
    const double u = lift.critical_point();
    auto ok = [&](double h) {
        constexpr int kSamples = 400;
        for (int k = 1; k <= kSamples; ++k) {
            const double s = static_cast<double>(k) / kSamples;
            const cplx left{u - s * h * half, -s * h};
            const cplx right{u + s * h * half, -s * h};
            const cplx base{u + (2.0 * s - 1.0) * h * half, -h};
            for (cplx z : {left, right, base})
                if (!(lift(z).imag() > 0.0)) return false;
        }
        return true;
    };
    if (ok(kStripHalfHeight)) return kStripHalfHeight;
    double lo = 0.0, hi = kStripHalfHeight;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    if (!(lo > 0.0)) throw PrecisionError("triangle_height: no admissible triangle", 0.0);
    return lo;
}

cplx inverse_branch(const CircleMapLift& lift, int m, cplx x0, cplx y0, cplx y, double step) {
    if (m == 0) return y;
    for (int attempt = 0; attempt < 6; ++attempt, step *= 0.5) {
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(y - y0) / step)));
        cplx x = x0;
        bool failed = false;
        for (int s = 1; s <= n && !failed; ++s) {
            const cplx target = y0 + (y - y0) * (static_cast<double>(s) / n);
            bool done = false;
            double prev = std::numeric_limits<double>::infinity();
            for (int it = 0; it < 60; ++it) {
                cplx d;
                const cplx fx = iterate(lift, m, x, &d);
                const cplx dx = (fx - target) / d;
                if (!std::isfinite(dx.real()) || !std::isfinite(dx.imag())) break;
                x -= dx;
                const double a = std::abs(dx), scale = 1.0 + std::abs(x);
                // Converged, or stalled at the roundoff floor.
                if (a <= 1e-15 * scale || (a <= 1e-12 * scale && a >= 0.5 * prev)) {
                    done = true;
                    break;
                }
                prev = a;
            }
            failed = !done;
        }
        if (!failed) return x;
    }
    throw PrecisionError("inverse_branch: continuation failed", step);
}

PartitionBall partition_ball(const PartitionLadder& ladder, int level, int index, const hypgeo::ConeConstants& cone,
                             double h1) {
    if (level < 2) throw DomainError("partition_ball: level must be at least 2");
    const auto& P = ladder.level(level);
    const auto& F = ladder.lift();
    const int N = static_cast<int>(P.size());
    if (index < 0 || index >= N) throw DomainError("partition_ball: interval index out of range");

    const Interval I = P.interval(index);
    Interval prev = P.interval((index + N - 1) % N);
    Interval next = P.interval((index + 1) % N);
    if (index == 0) prev.left -= 1.0L;
    if (index == N - 1) next.right += 1.0L;
    const long double ends[4] = {prev.left, I.left, I.right, next.right};
    const int orders[4] = {P.order((index + N - 1) % N), P.order(index), P.order((index + 1) % N),
                           P.order((index + 2) % N)};
    const int which = static_cast<int>(std::min_element(orders, orders + 4) - orders);
    const int m = orders[which];

    long double img[4];
    for (int j = 0; j < 4; ++j) img[j] = iterate_real(F, m, ends[j]);
    const long double u = std::round(img[which]);
    if (std::abs(img[which] - u) > 1e-9L)
        throw PrecisionError("partition_ball: endpoint does not map to the critical point",
                             static_cast<double>(img[which] - u));
    const double ud = static_cast<double>(u);

    const hypgeo::SlitPlaneDomain U(static_cast<double>(img[0]), static_cast<double>(img[3]));
    const double width = static_cast<double>(img[2] - img[1]);
    const hypgeo::Cone cone_at_u{ud, cone.direction_deg, cone.opening_deg};
    const cplx zc{ud, -cone.depth * width};

    PartitionBall out;
    out.level = level;
    out.interval = index;
    out.m = m;
    out.interval_length = I.length();

    bool in_triangle = true;
    for (cplx z : hypgeo::ball_boundary(U, zc, cone.r0, 256))
        in_triangle = in_triangle && cone_at_u.contains(z) && z.imag() >= -h1;
    hypgeo::Disk D;
    if (in_triangle) {
        D = hypgeo::inscribed_disk(U, zc, cone.r0);
    } else {
        const double s = std::sin(0.5 * cone.opening_deg * kPi / 180.0);
        const double rin = h1 * s / (1.0 + s);
        D = {cplx{ud, -(h1 - rin)}, rin * (1.0 - 1e-9)};
        out.triangle_fallback = true;
    }

    const cplx x0{static_cast<double>(ends[which]), 0.0};
    const double step = width / 8.0;
    hypgeo::Branch g;
    g.map = [&](cplx z) { return inverse_branch(F, m, x0, ud, z, step); };
    g.derivative = [&](cplx z) {
        cplx d;
        iterate(F, m, inverse_branch(F, m, x0, ud, z, step), &d);
        return 1.0 / d;
    };
    g.univalence_radius = U.boundary_distance(D.center);
    out.ball = hypgeo::pullback_ball(g, D);

    const double b = static_cast<double>(I.left), c = static_cast<double>(I.right);
    const cplx z = out.ball.center;
    out.distance = z.real() < b ? std::abs(z - b) : z.real() > c ? std::abs(z - c) : std::abs(z.imag());
    out.below_real = z.imag() + out.ball.radius < 0.0;

    out.image_in_cone = true;
    out.lands_in_upper = true;
    constexpr int kSamples = 64;
    for (int k = 0; k <= kSamples; ++k) {
        const cplx p = k == kSamples ? z : z + std::polar(out.ball.radius, 2.0 * kPi * k / kSamples);
        const cplx fm = iterate(F, m, p, nullptr);
        out.image_in_cone = out.image_in_cone && cone_at_u.contains(fm);
        out.lands_in_upper = out.lands_in_upper && F(fm).imag() > 0.0;
    }
    return out;
}

}  // namespace implosion::circlemap
