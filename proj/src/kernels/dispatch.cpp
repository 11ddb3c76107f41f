#include "implosion/kernels.hpp"

#include <cstdlib>
#include <string>

namespace implosion::simd {

Isa detect_isa() {
    // IMPLOSION_ISA=scalar pins the reference kernel (used by equivalence runs).
    if (const char* env = std::getenv("IMPLOSION_ISA"); env && std::string(env) == "scalar")
        return Isa::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Scalar: break;
    }
    return "scalar";
}

void orbit(const OrbitParams& params, OrbitBatch batch, Isa forced) {
#if defined(__x86_64__) || defined(_M_X64)
    if (forced == Isa::Avx2) {
        orbit_avx2(params, batch);
        return;
    }
#endif
    orbit_scalar(params, batch);
}

void orbit(const OrbitParams& params, OrbitBatch batch) {
    static const Isa isa = detect_isa();
    orbit(params, batch, isa);
}

}  // namespace implosion::simd
