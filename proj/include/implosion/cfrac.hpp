#pragma once

#include <cstdint>
#include <vector>

namespace implosion::cfrac {

// x = [0; a_1, a_2, ..., a_n] for x in (0,1).
struct ContinuedFraction {
    double value = 0.0;
    std::vector<std::int64_t> quotients;
};

// p_k / q_k, the k-th convergent (k >= 1). index 0 is the trivial 0/1.
struct Convergent {
    std::int64_t p = 0;
    std::int64_t q = 1;
    int index = 0;
};

// First n_terms partial quotients of x. The loop runs in extended precision
// and stops early once the residual drops below 2^-52 (x treated as rational).
ContinuedFraction expand(double x, int n_terms);

// Value of a finite quotient list, as the continued fraction it denotes.
ContinuedFraction from_quotients(std::vector<std::int64_t> quotients);

// Golden mean (sqrt(5)-1)/2 with n_terms quotients all equal to 1.
ContinuedFraction golden(int n_terms = 40);

// Convergents p_1/q_1 ... p_n/q_n of the quotient list.
std::vector<Convergent> convergents(const ContinuedFraction& cf);

// Denominators q_0 = 1, q_1, ..., q_n (q_0 included, unlike convergents()).
std::vector<std::int64_t> denominators(const ContinuedFraction& cf);

// Verdict on the computed prefix only: a longer expansion may exceed bound.
bool is_bounded_type(const ContinuedFraction& cf, std::int64_t bound);

}  // namespace implosion::cfrac
