#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace implosion {

using cplx = std::complex<double>;

// Truncated power series sum_{k<=order} c[k] z^k with complex coefficients.
class Series {
public:
    Series() = default;
    explicit Series(std::size_t order) : c_(order + 1, cplx{}) {}
    Series(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}

    std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }

    cplx& operator[](std::size_t k) { return c_[k]; }
    cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx{}; }

    Series truncated(std::size_t order) const;

    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(cplx s, const Series& a);

    cplx eval(cplx z) const;

private:
    std::vector<cplx> c_;
};

// log(1 + g) and exp(g) for g with g[0] = 0, truncated to g.order().
Series log1p_series(const Series& g);
Series exp_series(const Series& g);

// (1 + g)^j for any integer j, g[0] = 0.
Series pow1p_series(const Series& g, int j);

}  // namespace implosion
