#pragma once

// Capacity and mutual information of the u.g.r. multiplicative matrix
// channel. The n+1 variable convex program over input-rank distributions is
// solved by Blahut-Arimoto with a per-input reward term; constant-rank
// capacities give the sandwich bounds, and both asymptotic regimes (packet
// length, field size) have closed forms.
//
// All informations are in base-q units (q-ary symbols per channel use).

#include "mmc/rank_channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mmc {

namespace detail {
inline double log_q(double x, double q) { return std::log(x) / std::log(q); }
} // namespace detail

// Conditional output entropy given any fixed rank-u input matrix:
//   h_u = sum_v p(v|u) log_q(|T_v(F_q^{m x u})| / p(v|u)).
inline LogQValue h_u(const RankKernel& k, int u) {
    if (u < 0 || u > k.dims.n) throw std::invalid_argument("input rank outside 0..n");
    const double q = static_cast<double>(k.dims.q);
    double h = 0.0;
    for (int v = 0; v <= k.dims.vmax(); ++v) {
        const double pvu = k.p(v, u);
        if (pvu <= 0.0) continue;
        h += pvu * (log_q_big(count_rank_class(k.dims.m, u, v, k.dims.q), k.dims.q)
                    - detail::log_q(pvu, q));
    }
    return h;
}

struct MutualInformation {
    double value;               // I*(p_u), direct formula
    double constant_rank_part;  // sum_u p(u) C_u
    double rank_information;    // I(u; v)
    double decomposition() const { return constant_rank_part + rank_information; }
};

// Rank-u capacity: C_u = sum_v p(v|u) log_q([l v]_q / [u v]_q), achieved by
// the uniform distribution over T_u(F_q^{n x l}).
inline LogQValue constant_rank_capacity(const RankKernel& k, int u) {
    if (u < 0 || u > k.dims.n) throw std::invalid_argument("input rank outside 0..n");
    double c = 0.0;
    for (int v = 0; v <= k.dims.vmax(); ++v) {
        const double pvu = k.p(v, u);
        if (pvu <= 0.0) continue;
        c += pvu * (log_q_big(gaussian_binomial(k.dims.l, v, k.dims.q), k.dims.q)
                    - log_q_big(gaussian_binomial(u, v, k.dims.q), k.dims.q));
    }
    return c;
}

// Best mutual information over inputs with rank law p_u (achieved by u.g.r.
// input):
//   I*(p_u) = sum_v p(v) log_q(|T_v(F_q^{m x l})| / p(v)) - sum_u h_u p(u),
// together with the diagnostic decomposition sum_u p(u) C_u + I(u; v).
inline MutualInformation mutual_information(const RankKernel& k, const RankDistribution& pu) {
    if (pu.max_rank() > k.dims.n)
        throw std::invalid_argument("input rank distribution support exceeds n");
    const double q = static_cast<double>(k.dims.q);
    const RankDistribution pv = output_rank_dist(k, pu);

    double out_entropy = 0.0;
    for (int v = 0; v <= k.dims.vmax(); ++v) {
        const double p = pv[v];
        if (p <= 0.0) continue;
        out_entropy += p * (log_q_big(count_rank_class(k.dims.m, k.dims.l, v, k.dims.q), k.dims.q)
                            - detail::log_q(p, q));
    }
    double cond = 0.0, crp = 0.0, rank_mi = 0.0;
    for (int u = 0; u <= k.dims.n; ++u) {
        const double p = pu[u];
        if (p <= 0.0) continue;
        cond += p * h_u(k, u);
        crp += p * constant_rank_capacity(k, u);
        for (int v = 0; v <= k.dims.vmax(); ++v) {
            const double pvu = k.p(v, u);
            if (pvu <= 0.0) continue;
            rank_mi += p * pvu * (detail::log_q(pvu, q) - detail::log_q(pv[v], q));
        }
    }
    return {out_entropy - cond, crp, rank_mi};
}

struct ConstantRankSummary {
    std::vector<double> per_rank_capacity;  // C_u for u = 0..n
    int u_star;                             // smallest maximizer
    double c_u_star;
    double lower;                           // C_{u*}
    double upper;                           // C_{u*} + log_q(min(n,m)+1)
};

inline ConstantRankSummary constant_rank_summary(const RankKernel& k) {
    ConstantRankSummary s;
    s.per_rank_capacity.resize(static_cast<std::size_t>(k.dims.n) + 1);
    s.u_star = 0;
    for (int u = 0; u <= k.dims.n; ++u) {
        s.per_rank_capacity[static_cast<std::size_t>(u)] = constant_rank_capacity(k, u);
        if (s.per_rank_capacity[static_cast<std::size_t>(u)] >
            s.per_rank_capacity[static_cast<std::size_t>(s.u_star)])
            s.u_star = u;
    }
    s.c_u_star = s.per_rank_capacity[static_cast<std::size_t>(s.u_star)];
    s.lower = s.c_u_star;
    s.upper = s.c_u_star +
              detail::log_q(static_cast<double>(k.dims.vmax() + 1), static_cast<double>(k.dims.q));
    return s;
}

struct CapacityResult {
    double capacity = 0.0;                 // q-ary symbols per channel use
    std::vector<double> optimal_pu;        // over ranks 0..n
    std::uint64_t iterations = 0;
    double convergence_gap = 0.0;          // final bracket width
    std::vector<double> h;                 // h_u
    std::vector<double> per_rank_capacity; // C_u
    int u_star = 0;
    double lower_bound = 0.0;              // C_{u*}
    double upper_bound = 0.0;              // C_{u*} + log_q(min(n,m)+1)
    bool converged = false;
};

// Maximize I*(p_u) over the simplex. Through the decomposition
// I* = sum_u p(u) C_u + I(u;v), this is a DMC capacity problem with
// per-input reward C_u, so the multiplicative Blahut-Arimoto step applies:
//   p'(u) proportional to p(u) q^{t_u},  t_u = C_u + D_q(p(v|u) || p_v).
// Certificate per iteration: max_u t_u >= C >= log_q sum_u p(u) q^{t_u};
// the iteration stops when the bracket is narrower than tol.
inline CapacityResult optimize_capacity(const RankKernel& k, double tol = 1e-9,
                                        std::uint64_t max_iter = 100000) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const int n = k.dims.n;
    const int vmax = k.dims.vmax();
    const double q = static_cast<double>(k.dims.q);
    const double lnq = std::log(q);

    std::vector<double> cu(static_cast<std::size_t>(n) + 1);
    for (int u = 0; u <= n; ++u) cu[static_cast<std::size_t>(u)] = constant_rank_capacity(k, u);

    std::vector<double> p(static_cast<std::size_t>(n) + 1, 1.0 / (n + 1));
    std::vector<double> pv(static_cast<std::size_t>(vmax) + 1);
    std::vector<double> t(static_cast<std::size_t>(n) + 1);

    double gap = std::numeric_limits<double>::infinity();
    double final_upper = std::numeric_limits<double>::infinity();
    std::uint64_t it = 0;
    bool converged = false;
    while (it < max_iter) {
        ++it;
        std::fill(pv.begin(), pv.end(), 0.0);
        for (int u = 0; u <= n; ++u) {
            if (p[static_cast<std::size_t>(u)] == 0.0) continue;
            for (int v = 0; v <= vmax; ++v)
                pv[static_cast<std::size_t>(v)] += p[static_cast<std::size_t>(u)] * k.p(v, u);
        }
        double upper = -std::numeric_limits<double>::infinity();
        for (int u = 0; u <= n; ++u) {
            double d = 0.0;
            for (int v = 0; v <= vmax; ++v) {
                const double pvu = k.p(v, u);
                if (pvu <= 0.0) continue;
                // A vanished output cell only happens when every input
                // reaching it has underflowed; keep the divergence finite so
                // the iteration can pull such inputs back.
                const double den = std::max(pv[static_cast<std::size_t>(v)],
                                            std::numeric_limits<double>::min());
                d += pvu * (std::log(pvu) - std::log(den)) / lnq;
            }
            t[static_cast<std::size_t>(u)] = cu[static_cast<std::size_t>(u)] + d;
            upper = std::max(upper, t[static_cast<std::size_t>(u)]);
        }
        double z = 0.0;
        for (int u = 0; u <= n; ++u)
            z += p[static_cast<std::size_t>(u)] *
                 std::exp((t[static_cast<std::size_t>(u)] - upper) * lnq);
        const double lower = upper + std::log(z) / lnq;
        gap = upper - lower;
        final_upper = upper;
        // update (the z terms above are exactly the unnormalized weights)
        double norm = 0.0;
        for (int u = 0; u <= n; ++u) {
            p[static_cast<std::size_t>(u)] *=
                std::exp((t[static_cast<std::size_t>(u)] - upper) * lnq);
            norm += p[static_cast<std::size_t>(u)];
        }
        for (double& x : p) x /= norm;
        if (gap < tol) { converged = true; break; }
    }

    CapacityResult res;
    res.iterations = it;
    res.convergence_gap = gap;
    res.converged = converged;
    ConstantRankSummary s = constant_rank_summary(k);
    res.per_rank_capacity = s.per_rank_capacity;
    res.u_star = s.u_star;
    res.lower_bound = s.lower;
    res.upper_bound = s.upper;
    res.h.resize(static_cast<std::size_t>(n) + 1);
    for (int u = 0; u <= n; ++u) res.h[static_cast<std::size_t>(u)] = h_u(k, u);

    if (converged && final_upper <= tol) {
        // Degenerate channel: nothing beats tol, so report the canonical
        // zero-rate input.
        res.optimal_pu.assign(static_cast<std::size_t>(n) + 1, 0.0);
        res.optimal_pu[0] = 1.0;
        res.capacity = 0.0;
        return res;
    }

    res.optimal_pu = p;
    res.capacity = mutual_information(k, RankDistribution(p)).value;
    if (res.capacity < 0.0 && res.capacity > -1e-9) res.capacity = 0.0;
    const double hard_cap = static_cast<double>(k.dims.l) * k.dims.vmax();
    if (res.capacity < 0.0 || res.capacity > hard_cap + 1e-9)
        throw std::logic_error("capacity outside [0, l*min(n,m)]");
    return res;
}

struct AsymptoticResult {
    enum class Regime { PacketLength, FieldSize };
    Regime regime;
    double value;
    int optimal_u;
};

// Large packet length: normalized capacity tends to E[r], packets per
// channel use, with full-rank input optimal.
inline AsymptoticResult asymptotic_packet_length(const ChannelDims& dims,
                                                 const RankDistribution& rank_dist) {
    if (rank_dist.max_rank() > dims.vmax())
        throw std::invalid_argument("rank distribution support exceeds min(n, m)");
    return {AsymptoticResult::Regime::PacketLength, rank_dist.mean(), dims.n};
}

// Large field size: capacity tends to max_u (l-u) sum_r p_inf(r) min(u, r),
// in q-ary units; the smallest maximizer is reported.
inline AsymptoticResult asymptotic_field_size(const ChannelDims& dims,
                                              const RankDistribution& limit_rank_dist) {
    if (limit_rank_dist.max_rank() > dims.vmax())
        throw std::invalid_argument("rank distribution support exceeds min(n, m)");
    double best = -1.0;
    int best_u = 0;
    for (int u = 0; u <= dims.n; ++u) {
        double s = 0.0;
        for (int r = 0; r <= limit_rank_dist.max_rank(); ++r)
            s += limit_rank_dist[r] * std::min(u, r);
        const double value = static_cast<double>(dims.l - u) * s;
        if (value > best + 1e-15) { best = value; best_u = u; }
    }
    return {AsymptoticResult::Regime::FieldSize, best, best_u};
}

} // namespace mmc
