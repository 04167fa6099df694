#pragma once

// Random matrix samplers: entrywise uniform, uniform full-rank square, and
// uniform given rank. All draws go through the caller's generator.

#include "mmc/matrix.hpp"
#include "mmc/rank_distribution.hpp"
#include "mmc/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmc {

inline FqMatrix sample_uniform(int rows, int cols, const Field& f, Rng& rng) {
    FqMatrix a(f, rows, cols);
    for (std::size_t i = 0; i < a.cells(); ++i)
        a.set_linear(i, uniform_residue(rng, f.order()));
    return a;
}

// Uniform over the invertible n x n matrices, by rejection from the uniform
// sampler. Acceptance probability is prod_i (1 - q^{-i}) >= 0.288 at q = 2.
inline FqMatrix sample_invertible(int n, const Field& f, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_invertible needs n >= 1");
    for (;;) {
        FqMatrix a = sample_uniform(n, n, f, rng);
        if (rank(a) == n) return a;
    }
}

namespace detail {
// Uniform over T(F_q^{rows x cols}) (full rank), rejection sampled.
inline FqMatrix sample_full_rank(int rows, int cols, const Field& f, Rng& rng) {
    const int target = std::min(rows, cols);
    for (;;) {
        FqMatrix a = sample_uniform(rows, cols, f, rng);
        if (rank(a) == target) return a;
    }
}
} // namespace detail

// Uniform-given-rank sampler: draws k from rank_dist, then a matrix uniform
// over T_k as B * C with B uniform full-rank rows x k and C uniform full-rank
// k x cols. Every rank-k matrix has exactly |GL(k, q)| such factorizations,
// so the product is uniform over T_k.
inline FqMatrix sample_ugr(int rows, int cols, const Field& f,
                           const RankDistribution& rank_dist, Rng& rng) {
    if (rank_dist.max_rank() > std::min(rows, cols))
        throw std::invalid_argument("rank distribution support exceeds min(rows, cols)");
    const double x = uniform_unit(rng);
    int k = 0;
    double cum = 0.0;
    for (int r = 0; r <= rank_dist.max_rank(); ++r) {
        cum += rank_dist[r];
        if (x < cum) { k = r; break; }
        k = r;  // lands on the top rank if x hits accumulated rounding slack
    }
    if (k == 0) return FqMatrix(f, rows, cols);
    FqMatrix b = detail::sample_full_rank(rows, k, f, rng);
    FqMatrix c = detail::sample_full_rank(k, cols, f, rng);
    return mat_mul(b, c);
}

} // namespace mmc
