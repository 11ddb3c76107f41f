#include "implosion/series.hpp"

#include <algorithm>

#include "implosion/errors.hpp"

namespace implosion {

Series Series::truncated(std::size_t order) const {
    std::vector<cplx> c(order + 1, cplx{});
    for (std::size_t k = 0; k <= order && k < c_.size(); ++k) c[k] = c_[k];
    return Series(std::move(c));
}

Series operator+(const Series& a, const Series& b) {
    const std::size_t n = std::max(a.order(), b.order());
    Series r(n);
    for (std::size_t k = 0; k <= n; ++k) r[k] = a[k] + b[k];
    return r;
}

Series operator-(const Series& a, const Series& b) {
    const std::size_t n = std::max(a.order(), b.order());
    Series r(n);
    for (std::size_t k = 0; k <= n; ++k) r[k] = a[k] - b[k];
    return r;
}

// Product truncated to the smaller of the two orders.
Series operator*(const Series& a, const Series& b) {
    const std::size_t n = std::min(a.order(), b.order());
    Series r(n);
    for (std::size_t i = 0; i <= n; ++i) {
        if (a[i] == cplx{}) continue;
        for (std::size_t j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

Series operator*(cplx s, const Series& a) {
    Series r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) r[k] = s * a[k];
    return r;
}

cplx Series::eval(cplx z) const {
    cplx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Series log1p_series(const Series& g) {
    if (g[0] != cplx{}) throw DomainError("log1p_series: constant term must vanish");
    const std::size_t n = g.order();
    Series h(n);
    // (1 + g) h' = g'
    for (std::size_t k = 1; k <= n; ++k) {
        cplx s = static_cast<double>(k) * g[k];
        for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * h[j] * g[k - j];
        h[k] = s / static_cast<double>(k);
    }
    return h;
}

Series exp_series(const Series& g) {
    if (g[0] != cplx{}) throw DomainError("exp_series: constant term must vanish");
    const std::size_t n = g.order();
    Series e(n);
    e[0] = 1.0;
    // e' = g' e
    for (std::size_t k = 1; k <= n; ++k) {
        cplx s{};
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * g[j] * e[k - j];
        e[k] = s / static_cast<double>(k);
    }
    return e;
}

Series pow1p_series(const Series& g, int j) {
    return exp_series(static_cast<double>(j) * log1p_series(g));
}

}  // namespace implosion
