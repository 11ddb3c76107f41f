#pragma once

#include <vector>

#include "implosion/series.hpp"

namespace implosion {

// Formal solution of the Abel equation u(f(z)) = u(z) + 1 for a parabolic
// germ f(z) = z + a z^{q+1} + ..., truncated after z^J:
//
//   u(z) = sum_{j=-q}^{-1} c_j z^j + b log z + sum_{j=1}^{J} c_j z^j
//
// The log branch is supplied by the caller at evaluation time.
class AbelExpansion {
public:
    AbelExpansion() = default;
    // `germ` holds the coefficients of f (germ[1] = 1). It must reach order J + 2q + 1.
    AbelExpansion(const Series& germ, int q, int J);

    int q() const { return q_; }
    int terms() const { return J_; }
    cplx log_coefficient() const { return b_; }
    // c_{-q} = -1 / (q a)
    cplx leading() const { return neg_[0]; }

    // u(z) with log z := log_base + Log(z / dir), |arg(z/dir)| < pi.
    cplx eval(cplx z, cplx dir, cplx log_base) const;
    cplx derivative(cplx z) const;

private:
    int q_ = 1;
    int J_ = 0;
    std::vector<cplx> neg_;  // c_{-q} .. c_{-1}
    std::vector<cplx> pos_;  // c_1 .. c_J
    cplx b_{};
};

}  // namespace implosion
