// Built with -mavx2 and no -mfma: every product and sum rounds exactly as in
// orbit_scalar.cpp, so both kernels produce identical iterates.
#include "implosion/kernels.hpp"

#include <immintrin.h>

namespace implosion::simd {

namespace {

constexpr int kLanes = 4;

inline __m256d trap_mask(const OrbitParams& p, __m256d x, __m256d y, __m256d cr, __m256d ci,
                         __m256d c0) {
    __m256d zr = x, zi = y;
    for (std::int32_t k = 1; k < p.trap_q; ++k) {
        const __m256d t = _mm256_sub_pd(_mm256_mul_pd(zr, x), _mm256_mul_pd(zi, y));
        zi = _mm256_add_pd(_mm256_mul_pd(zr, y), _mm256_mul_pd(zi, x));
        zr = t;
    }
    const __m256d mag = _mm256_add_pd(_mm256_mul_pd(zr, zr), _mm256_mul_pd(zi, zi));
    const __m256d proj = _mm256_add_pd(_mm256_mul_pd(cr, zr), _mm256_mul_pd(ci, zi));
    return _mm256_cmp_pd(proj, _mm256_mul_pd(c0, mag), _CMP_GT_OQ);
}

}  // namespace

void orbit_avx2(const OrbitParams& p, OrbitBatch batch) {
    const std::size_t count = batch.re.size();
    const __m256d lr = _mm256_set1_pd(p.lambda_re);
    const __m256d li = _mm256_set1_pd(p.lambda_im);
    const __m256d rsq = _mm256_set1_pd(p.radius_sq);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d maxn = _mm256_set1_pd(static_cast<double>(p.maxiter));
    const __m256d cr = _mm256_set1_pd(p.trap_c_re);
    const __m256d ci = _mm256_set1_pd(p.trap_c_im);
    const __m256d c0 = _mm256_set1_pd(p.trap_c0);

    alignas(32) double lx[kLanes], ly[kLanes], ln[kLanes];
    std::size_t slot[kLanes];
    bool live[kLanes];
    std::size_t next = 0;
    int n_live = 0;
    for (int l = 0; l < kLanes; ++l) {
        live[l] = next < count;
        if (live[l]) {
            slot[l] = next;
            lx[l] = batch.re[next];
            ly[l] = batch.im[next];
            ++next;
            ++n_live;
        } else {
            lx[l] = 0.0;
            ly[l] = 0.0;
        }
        ln[l] = 0.0;
    }
    __m256d x = _mm256_load_pd(lx);
    __m256d y = _mm256_load_pd(ly);
    __m256d n = _mm256_load_pd(ln);
    alignas(32) double lmask[kLanes];
    auto live_mask = [&] {
        for (int l = 0; l < kLanes; ++l) lmask[l] = live[l] ? -1.0 : 0.0;  // sign bit marks live
        return _mm256_load_pd(lmask);
    };
    __m256d alive = live_mask();

    while (n_live > 0) {
        const __m256d x2 = _mm256_mul_pd(x, x);
        const __m256d y2 = _mm256_mul_pd(y, y);
        const __m256d esc = _mm256_cmp_pd(_mm256_add_pd(x2, y2), rsq, _CMP_GT_OQ);
        __m256d done = _mm256_or_pd(esc, _mm256_cmp_pd(n, maxn, _CMP_EQ_OQ));
        __m256d trap = _mm256_setzero_pd();
        if (p.trap_enabled) {
            trap = trap_mask(p, x, y, cr, ci, c0);
            done = _mm256_or_pd(done, trap);
        }
        const int done_bits = _mm256_movemask_pd(_mm256_and_pd(done, alive));
        if (done_bits != 0) {
            const int esc_bits = _mm256_movemask_pd(esc);
            const int trap_bits = _mm256_movemask_pd(trap);
            _mm256_store_pd(lx, x);
            _mm256_store_pd(ly, y);
            _mm256_store_pd(ln, n);
            for (int l = 0; l < kLanes; ++l) {
                if (!live[l] || !(done_bits & (1 << l))) continue;
                const std::size_t i = slot[l];
                batch.re[i] = lx[l];
                batch.im[i] = ly[l];
                batch.iterations[i] = static_cast<std::int32_t>(ln[l]);
                batch.status[i] = (esc_bits & (1 << l))    ? OrbitStatus::Escaped
                                  : (trap_bits & (1 << l)) ? OrbitStatus::Trapped
                                                           : OrbitStatus::Bounded;
                if (next < count) {
                    slot[l] = next;
                    lx[l] = batch.re[next];
                    ly[l] = batch.im[next];
                    ++next;
                } else {
                    live[l] = false;
                    --n_live;
                    lx[l] = 0.0;
                    ly[l] = 0.0;
                }
                ln[l] = 0.0;
            }
            x = _mm256_load_pd(lx);
            y = _mm256_load_pd(ly);
            n = _mm256_load_pd(ln);
            alive = live_mask();
            continue;  // fresh lanes must be tested before their first step
        }
        const __m256d nx = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(lr, x), _mm256_mul_pd(li, y)),
                                         _mm256_sub_pd(x2, y2));
        const __m256d ny = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(lr, y), _mm256_mul_pd(li, x)),
                                         _mm256_mul_pd(_mm256_mul_pd(two, x), y));
        x = nx;
        y = ny;
        n = _mm256_add_pd(n, one);
    }
}

}  // namespace implosion::simd
