#include "implosion/abel.hpp"

#include <map>

#include "implosion/errors.hpp"

namespace implosion {

AbelExpansion::AbelExpansion(const Series& germ, int q, int J) : q_(q), J_(J) {
    if (q < 1 || J < 0) throw DomainError("AbelExpansion: need q >= 1 and J >= 0");
    const std::size_t top = static_cast<std::size_t>(J + 2 * q);
    if (germ.order() < top + 1) throw DomainError("AbelExpansion: germ truncated too early");

    // f(z) = z (1 + g(z))
    Series g(top);
    for (std::size_t k = 1; k <= top; ++k) g[k] = germ[k + 1];
    const cplx a = g[static_cast<std::size_t>(q)];
    if (std::abs(a) == 0.0) throw DomainError("AbelExpansion: degenerate germ (a = 0)");

    const Series L = log1p_series(g);
    std::map<int, Series> S;  // (1+g)^j - 1
    for (int j = -q; j <= J; ++j) {
        if (j == 0) continue;
        Series s = exp_series(static_cast<double>(j) * L);
        s[0] -= 1.0;
        S.emplace(j, std::move(s));
    }

    std::map<int, cplx> c;
    const int M = J + q;
    for (int n = 0; n <= M; ++n) {
        cplx rhs = (n == 0) ? cplx{1.0} : cplx{};
        for (const auto& [j, cj] : c) {
            const int k = n - j;
            if (k >= q) rhs -= cj * S.at(j)[static_cast<std::size_t>(k)];
        }
        if (n > q) rhs -= b_ * L[static_cast<std::size_t>(n)];

        if (n == q) {
            b_ = rhs / a;
        } else {
            const int j = n - q;
            c[j] = rhs / (static_cast<double>(j) * a);
        }
    }

    neg_.resize(static_cast<std::size_t>(q));
    for (int j = 1; j <= q; ++j) neg_[static_cast<std::size_t>(q - j)] = c.at(-j);
    pos_.resize(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j) pos_[static_cast<std::size_t>(j - 1)] = c.at(j);
}

cplx AbelExpansion::eval(cplx z, cplx dir, cplx log_base) const {
    const cplx t = 1.0 / z;
    cplx neg{};
    for (const cplx& cj : neg_) neg = (neg + cj) * t;  // c_{-q} first: ends as sum c_{-j} t^j
    cplx pos{};
    for (auto it = pos_.rbegin(); it != pos_.rend(); ++it) pos = (pos + *it) * z;
    return neg + b_ * (log_base + std::log(z / dir)) + pos;
}

cplx AbelExpansion::derivative(cplx z) const {
    const cplx t = 1.0 / z;
    // d/dz sum_{j=1}^q c_{-j} z^{-j} = -sum j c_{-j} t^{j+1}
    cplx neg{};
    for (int j = q_; j >= 1; --j) neg = neg * t + static_cast<double>(j) * neg_[static_cast<std::size_t>(q_ - j)];
    neg = -neg * t * t;
    cplx pos{};
    for (int j = J_; j >= 1; --j) pos = pos * z + static_cast<double>(j) * pos_[static_cast<std::size_t>(j - 1)];
    return neg + b_ * t + pos;
}

}  // namespace implosion
