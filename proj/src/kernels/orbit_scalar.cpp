#include "implosion/kernels.hpp"

namespace implosion::simd {

namespace {

inline bool in_trap(const OrbitParams& p, double x, double y) {
    double zr = x, zi = y;
    for (std::int32_t k = 1; k < p.trap_q; ++k) {
        const double t = zr * x - zi * y;
        zi = zr * y + zi * x;
        zr = t;
    }
    const double mag = zr * zr + zi * zi;
    const double proj = p.trap_c_re * zr + p.trap_c_im * zi;
    return proj > p.trap_c0 * mag;
}

}  // namespace

OrbitPoint orbit_point(const OrbitParams& p, double x, double y) {
    std::int32_t n = 0;
    for (;;) {
        const double x2 = x * x;
        const double y2 = y * y;
        if (x2 + y2 > p.radius_sq) return {x, y, n, OrbitStatus::Escaped};
        if (p.trap_enabled && in_trap(p, x, y)) return {x, y, n, OrbitStatus::Trapped};
        if (n == p.maxiter) return {x, y, n, OrbitStatus::Bounded};
        const double nx = (p.lambda_re * x - p.lambda_im * y) + (x2 - y2);
        const double ny = (p.lambda_re * y + p.lambda_im * x) + 2.0 * x * y;
        x = nx;
        y = ny;
        ++n;
    }
}

void orbit_scalar(const OrbitParams& params, OrbitBatch batch) {
    for (std::size_t i = 0; i < batch.re.size(); ++i) {
        const OrbitPoint r = orbit_point(params, batch.re[i], batch.im[i]);
        batch.re[i] = r.re;
        batch.im[i] = r.im;
        batch.iterations[i] = r.n;
        batch.status[i] = r.status;
    }
}

}  // namespace implosion::simd
