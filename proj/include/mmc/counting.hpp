#pragma once

// Exact counting over F_q: full-rank counts, rank-class sizes, Gaussian
// binomials, the gamma_q constant, completion counts for a fixed left block,
// and subspace/superspace counts. Everything is arbitrary-precision; only
// the final conversion to a base-q logarithm rounds.
//
// q is any integer >= 2 here (the formulas are purely arithmetic in q);
// primality only matters once concrete matrices are involved.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mmc {

using BigCount = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Base-q logarithm of a count or probability ratio, as a plain double.
using LogQValue = double;

namespace detail {
inline void check_q(std::int64_t q) {
    if (q < 2) throw std::invalid_argument("q must be an integer >= 2");
}
} // namespace detail

inline BigCount big_pow(std::int64_t q, std::int64_t e) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    return boost::multiprecision::pow(BigCount(q), static_cast<unsigned>(e));
}

// |T(F_q^{m x r})|: full-rank m x r matrices, prod_{i=0}^{r-1} (q^m - q^i).
inline BigCount count_full_rank(std::int64_t m, std::int64_t r, std::int64_t q) {
    detail::check_q(q);
    if (r < 0 || r > m) throw std::invalid_argument("count_full_rank needs 0 <= r <= m");
    BigCount result = 1;
    const BigCount qm = big_pow(q, m);
    BigCount qi = 1;
    for (std::int64_t i = 0; i < r; ++i) {
        result *= qm - qi;
        qi *= q;
    }
    return result;
}

// Gaussian binomial [n r]_q: the number of r-dimensional subspaces of F_q^n.
// Computed by the q-Pascal recurrence [n r] = [n-1 r-1] + q^r [n-1 r],
// integral throughout; memoized per (n, r, q).
inline BigCount gaussian_binomial(std::int64_t n, std::int64_t r, std::int64_t q) {
    detail::check_q(q);
    if (r < 0 || n < 0 || r > n) return 0;
    if (r == 0 || r == n) return 1;
    thread_local std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, BigCount> memo;
    auto key = std::make_tuple(n, r, q);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    BigCount value = gaussian_binomial(n - 1, r - 1, q)
                   + big_pow(q, r) * gaussian_binomial(n - 1, r, q);
    memo.emplace(key, value);
    return value;
}

// |T_r(F_q^{m x n})|: all m x n matrices of rank exactly r.
inline BigCount count_rank_class(std::int64_t m, std::int64_t n, std::int64_t r, std::int64_t q) {
    detail::check_q(q);
    if (r < 0 || r > m || r > n) return 0;
    return count_full_rank(m, r, q) * gaussian_binomial(n, r, q);
}

// gamma_q = prod_{i>=1} 1/(1 - q^{-i}); the product is truncated once the
// running factor is within 1e-15 of 1 (geometric decay; ~50 terms at q=2).
inline double gamma_q(std::int64_t q) {
    detail::check_q(q);
    double product = 1.0;
    double qi = 1.0;
    for (int i = 1; i <= 10000; ++i) {
        qi /= static_cast<double>(q);
        double factor = 1.0 / (1.0 - qi);
        product *= factor;
        if (factor - 1.0 < 1e-15) break;
    }
    return product;
}

struct GaussianBinomialBounds {
    BigCount lower;   // q^{r(n-r)}, exact
    double upper;     // gamma_q * q^{r(n-r)}
};

// to_double / log_q of big counts.  Conversion goes through the top 53 bits
// plus an exponent so arbitrarily large counts survive; log_q is accurate to
// ~1e-15 relative.
inline double to_double(const BigCount& x) {
    using boost::multiprecision::msb;
    if (x == 0) return 0.0;
    if (x < 0) throw std::invalid_argument("counts are nonnegative");
    std::size_t bits = msb(x);
    if (bits <= 52) return x.convert_to<double>();
    std::int64_t shift = static_cast<std::int64_t>(bits) - 52;
    double top = (x >> shift).convert_to<double>();
    return std::ldexp(top, static_cast<int>(shift));
}

inline double log2_big(const BigCount& x) {
    using boost::multiprecision::msb;
    if (x <= 0) throw std::domain_error("log of nonpositive count");
    std::size_t bits = msb(x);
    if (bits <= 52) return std::log2(x.convert_to<double>());
    std::int64_t shift = static_cast<std::int64_t>(bits) - 52;
    double top = (x >> shift).convert_to<double>();
    return static_cast<double>(shift) + std::log2(top);
}

inline LogQValue log_q_big(const BigCount& x, std::int64_t q) {
    detail::check_q(q);
    return log2_big(x) / std::log2(static_cast<double>(q));
}

inline double to_double(const BigRational& x) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigCount num = numerator(x);
    BigCount den = denominator(x);
    if (num == 0) return 0.0;
    if (num < 0) throw std::invalid_argument("probabilities are nonnegative");
    // Scale the quotient to carry >= 64 significant bits, then rescale.
    using boost::multiprecision::msb;
    std::int64_t e = static_cast<std::int64_t>(msb(num)) - static_cast<std::int64_t>(msb(den));
    std::int64_t s = 64 - e;
    BigCount quot = s >= 0 ? BigCount((num << s) / den) : BigCount(num / (den << -s));
    return std::ldexp(to_double(quot), static_cast<int>(-s));
}

inline GaussianBinomialBounds gaussian_binomial_bounds(std::int64_t n, std::int64_t r,
                                                       std::int64_t q) {
    detail::check_q(q);
    if (r < 0 || r > n) throw std::invalid_argument("bounds need 0 <= r <= n");
    BigCount lower = big_pow(q, r * (n - r));
    return {lower, gamma_q(q) * to_double(lower)};
}

// Completions of a fixed rank-v left block: the number of rank-r matrices in
// F_q^{m x n} whose left m x u sub-matrix is a given element of T_v(F_q^{m x u}).
inline BigCount phi_q(std::int64_t m, std::int64_t n, std::int64_t u, std::int64_t r,
                      std::int64_t v, std::int64_t q) {
    detail::check_q(q);
    if (r < 0 || r > m || r > n) return 0;
    if (v < 0 || v > r) return 0;
    BigCount binom = gaussian_binomial(n - u, r - v, q);
    if (binom == 0) return 0;
    // |T(F_q^{m x r})| / |T(F_q^{m x v})| divides exactly (v <= r <= m here).
    BigCount num = count_full_rank(m, r, q);
    BigCount den = count_full_rank(m, v, q);
    BigCount ratio = num / den;
    if (ratio * den != num) throw std::logic_error("inexact division in phi_q");
    return ratio * binom * big_pow(q, v * (n - u - r + v));
}

// Lemma-style span counts.  For a fixed X in T_u(F_q^{n x l}):
//   #{ Y in T_v(F_q^{m x l}) : <Y> subseteq <X> } = |T_v(F_q^{m x u})|
// and, dually, for a fixed Y in T_v(F_q^{m x l}):
//   #{ X in T_u(F_q^{n x l}) : <Y> subseteq <X> }
//     = |T_v(F_q^{m x u})| |T_u(F_q^{n x l})| / |T_v(F_q^{m x l})|.
inline BigCount count_sub_in_span(std::int64_t u, std::int64_t v, std::int64_t m,
                                  std::int64_t q) {
    detail::check_q(q);
    if (v < 0 || v > m || v > u) return 0;
    return count_rank_class(m, u, v, q);
}

inline BigCount count_super_of_span(std::int64_t u, std::int64_t v, std::int64_t n,
                                    std::int64_t m, std::int64_t l, std::int64_t q) {
    detail::check_q(q);
    BigCount j = count_sub_in_span(u, v, m, q);
    BigCount tu = count_rank_class(n, l, u, q);
    BigCount tv = count_rank_class(m, l, v, q);
    if (j == 0 || tu == 0) return 0;
    if (tv == 0) throw std::invalid_argument("count_super_of_span: no rank-v matrix exists");
    BigCount num = j * tu;
    BigCount result = num / tv;
    if (result * tv != num) throw std::logic_error("inexact division in count_super_of_span");
    return result;
}

} // namespace mmc
