#pragma once

// Monte Carlo simulator of the layered relay network: the transfer matrix is
// composed layer by layer from per-relay random coding blocks and diagonal
// 0/1 erasure matrices (erased packets arrive as all-zero rows, they are not
// deleted). The accumulated product stays MN x MN throughout; the MN^2-row
// intermediates are never materialized.
//
// Draw order per sample (fixed, so runs replay exactly): for each layer
// i = 1..L, the M x MN coding blocks A_{i,1}..A_{i,N} row-major, then the MN
// erasure bits of E_{i,1}..E_{i,N}; after all layers, the MN bits of the
// sink-side erasure diagonal.

#include "mmc/capacity.hpp"
#include "mmc/matrix.hpp"
#include "mmc/rank_channel.hpp"
#include "mmc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mmc {

struct NetworkConfig {
    std::uint32_t q = 2;
    int layers = 1;        // L
    int relays = 2;        // N per layer
    int repetitions = 1;   // M source repetitions
    double erasure_prob = 0.0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;

    int mn() const { return repetitions * relays; }

    void validate() const {
        if (!Field::is_prime(q)) throw std::invalid_argument("network field size must be prime");
        if (layers < 1 || relays < 1 || repetitions < 1)
            throw std::invalid_argument("network needs L, N, M >= 1");
        if (!(erasure_prob >= 0.0 && erasure_prob <= 1.0))
            throw std::invalid_argument("erasure probability outside [0, 1]");
        if (trials < 1) throw std::invalid_argument("at least one trial");
    }
};

// One draw of G = E' A_L E_L ... A_1 E_1; the returned matrix is MN x MN.
inline FqMatrix sample_transfer_matrix(const NetworkConfig& cfg, Rng& rng) {
    cfg.validate();
    const Field f(cfg.q);
    const int mn = cfg.mn();
    const int m = cfg.repetitions, n = cfg.relays;

    FqMatrix acc(f, 0, 0);
    for (int layer = 0; layer < cfg.layers; ++layer) {
        // step = A_i E_i: relay j contributes rows j*M..j*M+M-1 as its coding
        // block with erased columns zeroed
        FqMatrix step(f, mn, mn);
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < m; ++a)
                for (int c = 0; c < mn; ++c)
                    step.set(j * m + a, c, uniform_residue(rng, cfg.q));
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < mn; ++c)
                if (uniform_unit(rng) < cfg.erasure_prob)
                    for (int a = 0; a < m; ++a) step.set(j * m + a, c, 0);
        acc = layer == 0 ? std::move(step) : mat_mul(step, acc);
    }
    for (int r = 0; r < mn; ++r)
        if (uniform_unit(rng) < cfg.erasure_prob)
            for (int c = 0; c < mn; ++c) acc.set(r, c, 0);
    return acc;
}

struct EmpiricalRankDistribution {
    std::vector<std::uint64_t> counts;  // by rank 0..MN
    std::uint64_t trials = 0;
    std::vector<double> std_err;        // sqrt(p(1-p)/trials)

    RankDistribution distribution() const {
        std::vector<double> p(counts.size());
        for (std::size_t r = 0; r < counts.size(); ++r)
            p[r] = static_cast<double>(counts[r]) / static_cast<double>(trials);
        return RankDistribution(std::move(p));
    }
};

// Rank histogram over cfg.trials independent transfer matrices. Trial t uses
// the derived stream (seed, t), so the histogram does not depend on how
// trials are partitioned across workers.
inline EmpiricalRankDistribution estimate_rank_distribution(const NetworkConfig& cfg) {
    cfg.validate();
    EmpiricalRankDistribution emp;
    emp.counts.assign(static_cast<std::size_t>(cfg.mn()) + 1, 0);
    emp.trials = cfg.trials;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        Rng rng = derive_rng(cfg.seed, t);
        ++emp.counts[static_cast<std::size_t>(rank(sample_transfer_matrix(cfg, rng)))];
    }
    emp.std_err.resize(emp.counts.size());
    for (std::size_t r = 0; r < emp.counts.size(); ++r) {
        const double p = static_cast<double>(emp.counts[r]) / static_cast<double>(cfg.trials);
        emp.std_err[r] = std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.trials));
    }
    return emp;
}

enum class SweepVariable { ErasureProb, Layers };

struct SweepPoint {
    double sweep_value;
    NetworkConfig config;               // with the varied parameter and derived seed
    EmpiricalRankDistribution empirical;
    CapacityResult capacity;            // u.g.r. capacity of the estimated channel
    ConstantRankSummary constant_rank;
    double coherent_upper_bound;        // l * E[r_hat], q-ary units per use
    double asymptotic_packets;          // E[r_hat], packets per use
};

// One grid point per value: estimate the rank distribution, then feed it to
// the capacity machinery at packet length l. Point k runs on the derived
// seed (root, k), recorded in its config.
inline std::vector<SweepPoint> capacity_sweep(const NetworkConfig& base, SweepVariable var,
                                              const std::vector<double>& values, int packet_len,
                                              double tol = 1e-9,
                                              std::uint64_t max_iter = 100000) {
    if (values.empty()) throw std::invalid_argument("empty sweep grid");
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        NetworkConfig cfg = base;
        if (var == SweepVariable::ErasureProb) {
            cfg.erasure_prob = values[k];
        } else {
            if (values[k] < 1.0 || values[k] != std::floor(values[k]))
                throw std::invalid_argument("layer counts must be positive integers");
            cfg.layers = static_cast<int>(values[k]);
        }
        cfg.seed = derive_stream_seed(base.seed, k);
        cfg.validate();

        SweepPoint pt{values[k], cfg, estimate_rank_distribution(cfg), {}, {}, 0.0, 0.0};
        const ChannelDims dims(cfg.q, cfg.mn(), cfg.mn(), packet_len);
        const RankKernel k_ugr = kernel(dims, pt.empirical.distribution());
        pt.capacity = optimize_capacity(k_ugr, tol, max_iter);
        pt.constant_rank = constant_rank_summary(k_ugr);
        pt.asymptotic_packets = pt.empirical.distribution().mean();
        pt.coherent_upper_bound = pt.asymptotic_packets * static_cast<double>(packet_len);
        points.push_back(std::move(pt));
    }
    return points;
}

} // namespace mmc
