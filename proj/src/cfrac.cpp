#include "implosion/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "implosion/errors.hpp"

namespace implosion::cfrac {

static_assert(std::numeric_limits<long double>::digits >= 64,
              "continued fraction expansion needs a 64-bit mantissa");

ContinuedFraction expand(double x, int n_terms) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("cf_expand: x must lie in (0,1)");
    if (n_terms < 0) throw DomainError("cf_expand: negative term count");

    ContinuedFraction cf;
    cf.value = x;
    const long double stop = std::ldexp(1.0L, -52);
    long double r = x;
    for (int i = 0; i < n_terms; ++i) {
        const long double inv = 1.0L / r;
        const long double a = std::floor(inv);
        cf.quotients.push_back(static_cast<std::int64_t>(a));
        r = inv - a;
        if (r < stop) break;
    }
    return cf;
}

ContinuedFraction from_quotients(std::vector<std::int64_t> quotients) {
    if (quotients.empty()) throw DomainError("continued fraction needs at least one quotient");
    long double v = 0.0L;
    for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) {
        if (*it < 1) throw DomainError("partial quotients must be >= 1");
        v = 1.0L / (static_cast<long double>(*it) + v);
    }
    return {static_cast<double>(v), std::move(quotients)};
}

ContinuedFraction golden(int n_terms) {
    ContinuedFraction cf;
    cf.value = (std::sqrt(5.0) - 1.0) / 2.0;
    cf.quotients.assign(static_cast<std::size_t>(n_terms), 1);
    return cf;
}

std::vector<Convergent> convergents(const ContinuedFraction& cf) {
    if (cf.quotients.empty()) throw DomainError("convergents: empty quotient list");
    std::vector<Convergent> out;
    out.reserve(cf.quotients.size());
    // p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1
    std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
    int k = 0;
    for (std::int64_t a : cf.quotients) {
        const std::int64_t p_next = a * p + p_prev;
        const std::int64_t q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        out.push_back({p, q, ++k});
    }
    return out;
}

std::vector<std::int64_t> denominators(const ContinuedFraction& cf) {
    std::vector<std::int64_t> qs{1};
    for (const auto& c : convergents(cf)) qs.push_back(c.q);
    return qs;
}

bool is_bounded_type(const ContinuedFraction& cf, std::int64_t bound) {
    return std::all_of(cf.quotients.begin(), cf.quotients.end(),
                       [bound](std::int64_t a) { return a <= bound; });
}

}  // namespace implosion::cfrac
