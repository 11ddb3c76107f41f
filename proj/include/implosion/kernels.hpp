#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace implosion::simd {

// Outcome codes written by the orbit kernels.
enum class OrbitStatus : std::uint8_t { Bounded = 0, Escaped = 1, Trapped = 2 };

// Parameters of the iteration z <- lambda z + z^2 with an escape disk and an
// optional parabolic trap { Re(trap_c / z^q) > trap_c0 }.
struct OrbitParams {
    double lambda_re = 1.0;
    double lambda_im = 0.0;
    double radius_sq = 16.0;
    std::int32_t maxiter = 10000;
    bool trap_enabled = false;
    std::int32_t trap_q = 1;
    double trap_c_re = 0.0;  // trap_c = -1/(q a)
    double trap_c_im = 0.0;
    double trap_c0 = 0.0;
};

// Structure-of-arrays batch. re/im are updated in place to the final iterate.
struct OrbitBatch {
    std::span<double> re;
    std::span<double> im;
    std::span<std::int32_t> iterations;
    std::span<OrbitStatus> status;
};

// Per point: n = 0; loop { escaped if |z|^2 > radius_sq; trapped if in trap;
// bounded if n == maxiter; z = P(z); ++n }. Kernels agree bit for bit.
void orbit_scalar(const OrbitParams& params, OrbitBatch batch);
#if defined(__x86_64__) || defined(_M_X64)
void orbit_avx2(const OrbitParams& params, OrbitBatch batch);
#endif

enum class Isa { Scalar, Avx2 };

Isa detect_isa();
std::string_view isa_name(Isa isa);

// Runs the best kernel available on this CPU unless `forced` is given.
void orbit(const OrbitParams& params, OrbitBatch batch);
void orbit(const OrbitParams& params, OrbitBatch batch, Isa forced);

// Single-point reference step shared by every kernel's scalar tail.
struct OrbitPoint {
    double re;
    double im;
    std::int32_t n;
    OrbitStatus status;
};
OrbitPoint orbit_point(const OrbitParams& params, double re, double im);

}  // namespace implosion::simd
