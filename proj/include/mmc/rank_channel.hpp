#pragma once

// Rank-level description of the multiplicative matrix channel Y = GX with a
// uniform-given-rank transfer matrix: reference rank distributions, the rank
// transition kernel, output-rank distributions, and the matrix-level
// transition probability.

#include "mmc/counting.hpp"
#include "mmc/matrix.hpp"
#include "mmc/rank_distribution.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mmc {

struct ChannelDims {
    std::int64_t q;   // field size (any integer >= 2 at the rank level)
    int n;            // input rows
    int m;            // output rows
    int l;            // packet length

    ChannelDims(std::int64_t q_, int n_, int m_, int l_) : q(q_), n(n_), m(m_), l(l_) {
        if (q < 2) throw std::invalid_argument("channel needs q >= 2");
        if (n < 1 || m < 1) throw std::invalid_argument("channel needs n, m >= 1");
        if (std::max(n, m) > l)
            throw std::invalid_argument("channel needs max(n, m) <= l");
    }

    int vmax() const { return std::min(n, m); }
};

// p_r for a transfer matrix uniform over the full-rank square matrices:
// a point mass at r = n (requires n = m).
inline RankDistribution rank_dist_silva(const ChannelDims& dims) {
    if (dims.n != dims.m)
        throw std::invalid_argument("full-rank square transfer model needs n = m");
    return RankDistribution::point_mass(dims.n, dims.n);
}

// p_r for a transfer matrix uniform over all of F_q^{m x n}:
// p_r(r) = |T_r(F_q^{m x n})| / q^{nm}, from exact counts.
inline RankDistribution rank_dist_jafari(const ChannelDims& dims) {
    const BigCount total = big_pow(dims.q, std::int64_t(dims.n) * dims.m);
    std::vector<double> p(static_cast<std::size_t>(dims.vmax()) + 1);
    for (int r = 0; r <= dims.vmax(); ++r)
        p[static_cast<std::size_t>(r)] =
            to_double(BigRational(count_rank_class(dims.m, dims.n, r, dims.q), total));
    return RankDistribution(std::move(p));
}

// Exact conditional law of the output rank v given input rank u and transfer
// rank r:
//   p(v|u,r) = [u v]_q [n-u, r-v]_q q^{v(n-u-r+v)} / [n r]_q,
// supported on u + r - n <= v <= min(u, r).
inline std::vector<BigRational> rank_transition_exact(const ChannelDims& dims, int u, int r) {
    if (u < 0 || u > dims.n) throw std::invalid_argument("input rank outside 0..n");
    if (r < 0 || r > dims.vmax()) throw std::invalid_argument("transfer rank outside 0..min(n,m)");
    const BigCount den = gaussian_binomial(dims.n, r, dims.q);
    std::vector<BigRational> p(static_cast<std::size_t>(dims.vmax()) + 1, BigRational(0));
    BigCount check = 0;
    for (int v = 0; v <= dims.vmax(); ++v) {
        BigCount num = gaussian_binomial(u, v, dims.q)
                     * gaussian_binomial(dims.n - u, r - v, dims.q);
        if (num == 0) continue;
        num *= big_pow(dims.q, std::int64_t(v) * (dims.n - u - r + v));
        p[static_cast<std::size_t>(v)] = BigRational(num, den);
        check += num;
    }
    if (check != den) throw std::logic_error("rank transition law does not normalize");
    return p;
}

inline RankDistribution rank_transition(const ChannelDims& dims, int u, int r) {
    auto exact = rank_transition_exact(dims, u, r);
    std::vector<double> p(exact.size());
    double sum = 0.0;
    for (std::size_t v = 0; v < exact.size(); ++v) {
        p[v] = to_double(exact[v]);
        sum += p[v];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::logic_error("rank transition row drifted beyond 1e-12");
    return RankDistribution(std::move(p));
}

// The full kernel: p(v|u) = sum_r p_r(r) p(v|u,r), with the conditional
// table retained for diagnostics. Exact ratios are converted to floats once.
struct RankKernel {
    ChannelDims dims;
    std::vector<double> rank_dist;                            // p_r over 0..vmax
    std::vector<std::vector<double>> table;                   // [u][v] = p(v|u)
    std::vector<std::vector<std::vector<double>>> conditional; // [u][r][v] = p(v|u,r)

    double p(int v, int u) const { return table[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]; }
};

inline RankKernel kernel(const ChannelDims& dims, const RankDistribution& rank_dist) {
    if (rank_dist.max_rank() > dims.vmax())
        throw std::invalid_argument("rank distribution support exceeds min(n, m)");
    RankKernel k{dims, {}, {}, {}};
    k.rank_dist.assign(static_cast<std::size_t>(dims.vmax()) + 1, 0.0);
    for (int r = 0; r <= rank_dist.max_rank(); ++r)
        k.rank_dist[static_cast<std::size_t>(r)] = rank_dist[r];
    k.table.assign(static_cast<std::size_t>(dims.n) + 1,
                   std::vector<double>(static_cast<std::size_t>(dims.vmax()) + 1, 0.0));
    k.conditional.assign(static_cast<std::size_t>(dims.n) + 1, {});
    for (int u = 0; u <= dims.n; ++u) {
        auto& cond_u = k.conditional[static_cast<std::size_t>(u)];
        cond_u.assign(static_cast<std::size_t>(dims.vmax()) + 1, {});
        for (int r = 0; r <= dims.vmax(); ++r) {
            cond_u[static_cast<std::size_t>(r)] = rank_transition(dims, u, r).probs();
            const double pr = k.rank_dist[static_cast<std::size_t>(r)];
            if (pr == 0.0) continue;
            for (int v = 0; v <= dims.vmax(); ++v)
                k.table[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] +=
                    pr * cond_u[static_cast<std::size_t>(r)][static_cast<std::size_t>(v)];
        }
        double row_sum = 0.0;
        for (double x : k.table[static_cast<std::size_t>(u)]) row_sum += x;
        if (std::abs(row_sum - 1.0) > 1e-9)
            throw std::logic_error("kernel row does not sum to 1 within 1e-9");
    }
    return k;
}

// Output-rank law p_v = p_u . kernel.
inline RankDistribution output_rank_dist(const RankKernel& k, const RankDistribution& input) {
    if (input.max_rank() > k.dims.n)
        throw std::invalid_argument("input rank distribution support exceeds n");
    std::vector<double> pv(static_cast<std::size_t>(k.dims.vmax()) + 1, 0.0);
    for (int u = 0; u <= k.dims.n; ++u) {
        const double pu = input[u];
        if (pu == 0.0) continue;
        for (int v = 0; v <= k.dims.vmax(); ++v)
            pv[static_cast<std::size_t>(v)] += pu * k.p(v, u);
    }
    return RankDistribution(std::move(pv));
}

// Matrix-level transition probability of the u.g.r. channel:
//   p(Y|X) = p(v|u) / |T_v(F_q^{m x u})|  when <Y> subseteq <X>, else 0.
inline double matrix_transition_prob(const RankKernel& k, const FqMatrix& x, const FqMatrix& y) {
    if (x.field() != y.field()) throw std::invalid_argument("field mismatch");
    if (x.field().order() != static_cast<std::uint64_t>(k.dims.q))
        throw std::invalid_argument("matrix field disagrees with channel q");
    if (x.rows() != k.dims.n || x.cols() != k.dims.l || y.rows() != k.dims.m ||
        y.cols() != k.dims.l)
        throw std::invalid_argument("matrix shape disagrees with channel dims");
    if (!spans_include(x, y)) return 0.0;
    const int u = rank(x);
    const int v = rank(y);
    return k.p(v, u) / to_double(count_rank_class(k.dims.m, u, v, k.dims.q));
}

} // namespace mmc
