#pragma once

// Brute-force ground truth for tiny instances. Distributions over matrix
// spaces are exact rationals; floats enter only in entropy and capacity
// evaluation. Matrix spaces are indexed by the mixed-radix encoding of
// matrix.hpp, so fixtures are portable.

#include "mmc/capacity.hpp"
#include "mmc/counting.hpp"
#include "mmc/matrix.hpp"
#include "mmc/rank_channel.hpp"
#include "mmc/rng.hpp"
#include "mmc/sampling.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mmc {

// ---------------------------------------------------------------------------
// Exact distributions over a full matrix space F_q^{rows x cols}.

struct MatrixDist {
    Field field;
    int rows, cols;
    std::vector<BigRational> p;  // indexed by encode_matrix

    MatrixDist(const Field& f, int rows_, int cols_)
        : field(f), rows(rows_), cols(cols_),
          p(matrix_space_size(f.order(), rows_, cols_), BigRational(0)) {}

    void validate() const {
        BigRational sum(0);
        for (const auto& x : p) {
            if (x < 0) throw std::invalid_argument("negative matrix probability");
            sum += x;
        }
        if (sum != 1) throw std::invalid_argument("matrix distribution must sum to 1 exactly");
    }
};

inline MatrixDist point_mass_dist(const FqMatrix& g) {
    MatrixDist d(g.field(), g.rows(), g.cols());
    d.p[encode_matrix(g)] = 1;
    return d;
}

inline std::vector<std::uint8_t> rank_table(const Field& f, int rows, int cols) {
    const std::uint64_t total = matrix_space_size(f.order(), rows, cols);
    std::vector<std::uint8_t> t(total);
    for (std::uint64_t i = 0; i < total; ++i)
        t[i] = static_cast<std::uint8_t>(rank(decode_matrix(f, rows, cols, i)));
    return t;
}

inline std::vector<BigRational> rank_marginal(const MatrixDist& d) {
    const int rmax = std::min(d.rows, d.cols);
    std::vector<BigRational> marg(static_cast<std::size_t>(rmax) + 1, BigRational(0));
    auto ranks = rank_table(d.field, d.rows, d.cols);
    for (std::uint64_t i = 0; i < d.p.size(); ++i) marg[ranks[i]] += d.p[i];
    return marg;
}

inline bool is_ugr_exact(const MatrixDist& d) {
    auto ranks = rank_table(d.field, d.rows, d.cols);
    const int rmax = std::min(d.rows, d.cols);
    std::vector<BigRational> ref(static_cast<std::size_t>(rmax) + 1);
    std::vector<bool> seen(static_cast<std::size_t>(rmax) + 1, false);
    for (std::uint64_t i = 0; i < d.p.size(); ++i) {
        const std::uint8_t r = ranks[i];
        if (!seen[r]) { ref[r] = d.p[i]; seen[r] = true; }
        else if (d.p[i] != ref[r]) return false;
    }
    return true;
}

// u.g.r. distribution with the given exact rank marginal:
// p(A) = p_k(rank A) / |T_{rank A}|.
inline MatrixDist ugr_matrix_dist(const Field& f, int rows, int cols,
                                  const std::vector<BigRational>& rank_probs) {
    const int rmax = std::min(rows, cols);
    if (static_cast<int>(rank_probs.size()) - 1 > rmax)
        throw std::invalid_argument("rank marginal support exceeds min(rows, cols)");
    MatrixDist d(f, rows, cols);
    auto ranks = rank_table(f, rows, cols);
    std::vector<BigRational> per_matrix(rank_probs.size());
    for (std::size_t r = 0; r < rank_probs.size(); ++r) {
        if (rank_probs[r] < 0) throw std::invalid_argument("negative rank probability");
        if (rank_probs[r] == 0) continue;
        per_matrix[r] = rank_probs[r] /
            BigRational(count_rank_class(rows, cols, static_cast<std::int64_t>(r), f.order()));
    }
    for (std::uint64_t i = 0; i < d.p.size(); ++i) {
        const std::uint8_t r = ranks[i];
        if (r < rank_probs.size()) d.p[i] = per_matrix[r];
    }
    d.validate();
    return d;
}

// Nearest double approximation of an exact rank marginal.
inline RankDistribution to_rank_distribution(const std::vector<BigRational>& marg) {
    std::vector<double> p(marg.size());
    for (std::size_t i = 0; i < marg.size(); ++i) p[i] = to_double(marg[i]);
    return RankDistribution(std::move(p));
}

// ---------------------------------------------------------------------------
// Explicit matrix-level channel p(Y|X) = sum_G p_G(G) 1[Y = GX].

struct ExplicitChannel {
    ChannelDims dims;
    MatrixDist transfer;
    std::uint64_t input_count = 0;
    std::vector<std::uint64_t> out_ids;  // sorted distinct reachable Y indices
    // rows[x]: (position into out_ids, probability), sorted by position
    std::vector<std::vector<std::pair<std::uint32_t, BigRational>>> rows;
};

inline ExplicitChannel build_explicit_channel(const ChannelDims& dims,
                                              const MatrixDist& transfer,
                                              std::uint64_t cap = std::uint64_t(1) << 16) {
    Field f(static_cast<std::uint32_t>(dims.q));
    if (transfer.field != f || transfer.rows != dims.m || transfer.cols != dims.n)
        throw std::invalid_argument("transfer distribution shape disagrees with channel dims");
    transfer.validate();
    const std::uint64_t in_size = matrix_space_size(f.order(), dims.n, dims.l);
    const std::uint64_t out_size = matrix_space_size(f.order(), dims.m, dims.l);
    if (in_size > cap || out_size > cap)
        throw std::invalid_argument("matrix alphabet exceeds the enumeration cap");

    std::vector<std::pair<FqMatrix, BigRational>> support;
    for (std::uint64_t g = 0; g < transfer.p.size(); ++g)
        if (transfer.p[g] != 0)
            support.emplace_back(decode_matrix(f, dims.m, dims.n, g), transfer.p[g]);

    ExplicitChannel ch{dims, transfer, in_size, {}, {}};
    ch.rows.resize(in_size);
    std::map<std::uint64_t, std::uint32_t> out_index;
    std::vector<std::map<std::uint64_t, BigRational>> sparse(in_size);
    for (std::uint64_t x = 0; x < in_size; ++x) {
        FqMatrix xm = decode_matrix(f, dims.n, dims.l, x);
        auto& row = sparse[x];
        for (const auto& [g, pg] : support) row[encode_matrix(mat_mul(g, xm))] += pg;
        BigRational sum(0);
        for (const auto& [y, p] : row) sum += p;
        if (sum != 1) throw std::logic_error("channel row does not sum to 1");
        for (const auto& [y, p] : row) out_index.emplace(y, 0);
    }
    ch.out_ids.reserve(out_index.size());
    for (auto& [y, pos] : out_index) {
        pos = static_cast<std::uint32_t>(ch.out_ids.size());
        ch.out_ids.push_back(y);
    }
    for (std::uint64_t x = 0; x < in_size; ++x) {
        ch.rows[x].reserve(sparse[x].size());
        for (const auto& [y, p] : sparse[x])
            ch.rows[x].emplace_back(out_index.at(y), p);
    }
    return ch;
}

// Exact output distribution of an exact input distribution, aligned with
// out_ids.
inline std::vector<BigRational> output_dist_exact(const ExplicitChannel& ch,
                                                  const std::vector<BigRational>& px) {
    if (px.size() != ch.input_count) throw std::invalid_argument("input distribution size");
    std::vector<BigRational> py(ch.out_ids.size(), BigRational(0));
    for (std::uint64_t x = 0; x < ch.input_count; ++x) {
        if (px[x] == 0) continue;
        for (const auto& [pos, p] : ch.rows[x]) py[pos] += px[x] * p;
    }
    return py;
}

inline double mutual_information_explicit(const ExplicitChannel& ch,
                                          const std::vector<double>& px) {
    if (px.size() != ch.input_count) throw std::invalid_argument("input distribution size");
    const double lnq = std::log(static_cast<double>(ch.dims.q));
    std::vector<double> py(ch.out_ids.size(), 0.0);
    for (std::uint64_t x = 0; x < ch.input_count; ++x) {
        if (px[x] == 0.0) continue;
        for (const auto& [pos, p] : ch.rows[x]) py[pos] += px[x] * to_double(p);
    }
    double mi = 0.0;
    for (std::uint64_t x = 0; x < ch.input_count; ++x) {
        if (px[x] == 0.0) continue;
        for (const auto& [pos, pr] : ch.rows[x]) {
            const double w = to_double(pr);
            if (w <= 0.0) continue;
            mi += px[x] * w * (std::log(w) - std::log(py[pos])) / lnq;
        }
    }
    return mi;
}

struct ExactCapacityResult {
    double capacity = 0.0;  // base-q units
    std::vector<double> input_dist;
    std::uint64_t iterations = 0;
    double gap = 0.0;
    bool converged = false;
};

// Classical Blahut-Arimoto over the full matrix alphabet.
inline ExactCapacityResult exact_capacity(const ExplicitChannel& ch, double tol = 1e-9,
                                          std::uint64_t max_iter = 200000) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const std::uint64_t nx = ch.input_count;
    const std::size_t ny = ch.out_ids.size();
    const double lnq = std::log(static_cast<double>(ch.dims.q));

    // cache double rows and per-row sum W log W
    std::vector<std::vector<std::pair<std::uint32_t, double>>> w(nx);
    std::vector<double> row_wlogw(nx, 0.0);
    for (std::uint64_t x = 0; x < nx; ++x) {
        w[x].reserve(ch.rows[x].size());
        for (const auto& [pos, p] : ch.rows[x]) {
            const double v = to_double(p);
            w[x].emplace_back(pos, v);
            if (v > 0.0) row_wlogw[x] += v * std::log(v);
        }
    }

    std::vector<double> p(nx, 1.0 / static_cast<double>(nx));
    std::vector<double> qy(ny), logqy(ny), d(nx);
    double gap = std::numeric_limits<double>::infinity();
    std::uint64_t it = 0;
    bool converged = false;
    while (it < max_iter) {
        ++it;
        std::fill(qy.begin(), qy.end(), 0.0);
        for (std::uint64_t x = 0; x < nx; ++x) {
            if (p[x] == 0.0) continue;
            for (const auto& [pos, v] : w[x]) qy[pos] += p[x] * v;
        }
        for (std::size_t j = 0; j < ny; ++j)
            logqy[j] = std::log(std::max(qy[j], std::numeric_limits<double>::min()));
        double upper = -std::numeric_limits<double>::infinity();
        for (std::uint64_t x = 0; x < nx; ++x) {
            double s = row_wlogw[x];
            for (const auto& [pos, v] : w[x]) s -= v * logqy[pos];
            d[x] = s / lnq;
            upper = std::max(upper, d[x]);
        }
        double z = 0.0;
        for (std::uint64_t x = 0; x < nx; ++x)
            z += p[x] * std::exp((d[x] - upper) * lnq);
        const double lower = upper + std::log(z) / lnq;
        gap = upper - lower;
        double norm = 0.0;
        for (std::uint64_t x = 0; x < nx; ++x) {
            p[x] *= std::exp((d[x] - upper) * lnq);
            norm += p[x];
        }
        for (double& v : p) v /= norm;
        if (gap < tol) { converged = true; break; }
    }
    ExactCapacityResult res;
    res.input_dist = p;
    res.iterations = it;
    res.gap = gap;
    res.converged = converged;
    res.capacity = std::max(0.0, mutual_information_explicit(ch, p));
    return res;
}

// ---------------------------------------------------------------------------
// The two-relay single-layer 2x2 example network, exactly enumerated:
//   G = [[e5 a1 e1, e5 a2 e2], [e6 a3 e3, e6 a4 e4]]
// with erasure bits e_i Bernoulli(p(0) = eps) and coefficients a_i uniform
// over F_2. All 2^10 assignments are accumulated with rational weights.
inline MatrixDist example2_transfer_dist(const BigRational& eps) {
    if (eps < 0 || eps > 1) throw std::invalid_argument("erasure probability outside [0, 1]");
    Field f2(2);
    MatrixDist d(f2, 2, 2);
    const BigRational keep = BigRational(1) - eps;
    const BigRational half(1, 2);
    for (unsigned bits = 0; bits < 1024; ++bits) {
        unsigned e[6], a[4];
        for (int i = 0; i < 6; ++i) e[i] = (bits >> i) & 1u;
        for (int i = 0; i < 4; ++i) a[i] = (bits >> (6 + i)) & 1u;
        BigRational weight(1);
        for (int i = 0; i < 6; ++i) weight *= e[i] ? keep : eps;
        for (int i = 0; i < 4; ++i) weight *= half;
        if (weight == 0) continue;
        FqMatrix g(f2, 2, 2);
        g.set(0, 0, e[4] & a[0] & e[0]);
        g.set(0, 1, e[4] & a[1] & e[1]);
        g.set(1, 0, e[5] & a[2] & e[2]);
        g.set(1, 1, e[5] & a[3] & e[3]);
        d.p[encode_matrix(g)] += weight;
    }
    d.validate();
    return d;
}

// Exact law of G' = T1 G T2 with T1, T2 uniform invertible, by exhaustive
// averaging over GL(m, q) x GL(n, q). The result is u.g.r. with the same
// rank marginal as the input.
inline MatrixDist randomize_channel(const MatrixDist& d, std::uint64_t gl_cap = 10000) {
    const Field& f = d.field;
    auto enumerate_gl = [&](int n) {
        const BigCount order = count_full_rank(n, n, f.order());
        if (order > gl_cap)
            throw std::invalid_argument("GL enumeration exceeds the cap");
        std::vector<FqMatrix> gl;
        gl.reserve(order.convert_to<std::size_t>());
        const std::uint64_t total = matrix_space_size(f.order(), n, n);
        for (std::uint64_t i = 0; i < total; ++i) {
            FqMatrix t = decode_matrix(f, n, n, i);
            if (rank(t) == n) gl.push_back(std::move(t));
        }
        return gl;
    };
    auto gl_left = enumerate_gl(d.rows);
    auto gl_right = enumerate_gl(d.cols);
    const BigRational pair_weight(BigCount(1),
                                  BigCount(gl_left.size()) * BigCount(gl_right.size()));
    MatrixDist out(f, d.rows, d.cols);
    for (std::uint64_t g = 0; g < d.p.size(); ++g) {
        if (d.p[g] == 0) continue;
        FqMatrix gm = decode_matrix(f, d.rows, d.cols, g);
        const BigRational w = d.p[g] * pair_weight;
        for (const auto& t1 : gl_left) {
            FqMatrix t1g = mat_mul(t1, gm);
            for (const auto& t2 : gl_right)
                out.p[encode_matrix(mat_mul(t1g, t2))] += w;
        }
    }
    out.validate();
    return out;
}

struct EntropyBoundReport {
    double entropy;  // H(A), base q
    double bound;    // sum_k p_k log_q(|T_k| / p_k)
    bool is_ugr;     // exact
};

inline EntropyBoundReport entropy_bound_check(const MatrixDist& d) {
    d.validate();
    const double lnq = std::log(static_cast<double>(d.field.order()));
    double h = 0.0;
    for (const auto& pr : d.p) {
        const double p = to_double(pr);
        if (p > 0.0) h -= p * std::log(p) / lnq;
    }
    auto marg = rank_marginal(d);
    double bound = 0.0;
    for (std::size_t r = 0; r < marg.size(); ++r) {
        const double p = to_double(marg[r]);
        if (p <= 0.0) continue;
        bound += p * (log_q_big(count_rank_class(d.rows, d.cols, static_cast<std::int64_t>(r),
                                                 d.field.order()),
                                d.field.order())
                      - std::log(p) / lnq);
    }
    return {h, bound, is_ugr_exact(d)};
}

// ---------------------------------------------------------------------------
// Grouping a u.g.r. explicit channel into the subspace channel.

struct SubspaceChannel {
    ChannelDims dims;
    std::vector<Subspace> inputs;                 // row-space classes of X
    std::vector<Subspace> outputs;                // row-space classes of Y
    std::vector<std::vector<BigRational>> p;      // [U][V]
    std::vector<std::uint32_t> input_class_of;    // by X index
    std::vector<std::uint32_t> output_class_of;   // by full Y index
};

namespace detail {
// Canonical integer key of a row space: its RREF basis written into a
// zero-padded max_rows x cols matrix.
inline std::uint64_t subspace_key(const Subspace& s, int max_rows) {
    FqMatrix padded(s.field(), max_rows, s.ambient_dim());
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.ambient_dim(); ++j)
            padded.set(i, j, s.basis()(i, j));
    return encode_matrix(padded);
}
} // namespace detail

inline SubspaceChannel build_subspace_channel(const ExplicitChannel& ch) {
    Field f(static_cast<std::uint32_t>(ch.dims.q));
    SubspaceChannel sc{ch.dims, {}, {}, {}, {}, {}};

    // group inputs by row space
    std::map<std::uint64_t, std::uint32_t> in_key;
    sc.input_class_of.resize(ch.input_count);
    std::vector<std::uint64_t> in_rep;  // representative X index per class
    for (std::uint64_t x = 0; x < ch.input_count; ++x) {
        Subspace s = row_space(decode_matrix(f, ch.dims.n, ch.dims.l, x));
        const std::uint64_t key = detail::subspace_key(s, ch.dims.n);
        auto [it, inserted] = in_key.emplace(key, static_cast<std::uint32_t>(sc.inputs.size()));
        if (inserted) {
            sc.inputs.push_back(std::move(s));
            in_rep.push_back(x);
        }
        sc.input_class_of[x] = it->second;
    }
    // all members of an input class must share an identical row (exactly);
    // anything else means the transfer distribution was not u.g.r.
    for (std::uint64_t x = 0; x < ch.input_count; ++x) {
        const std::uint64_t rep = in_rep[sc.input_class_of[x]];
        if (rep != x && ch.rows[x] != ch.rows[rep])
            throw std::invalid_argument(
                "input grouping inconsistency: channel is not u.g.r.");
    }

    // group every output matrix by row space
    const std::uint64_t out_total = matrix_space_size(f.order(), ch.dims.m, ch.dims.l);
    std::map<std::uint64_t, std::uint32_t> out_key;
    sc.output_class_of.resize(out_total);
    for (std::uint64_t y = 0; y < out_total; ++y) {
        Subspace s = row_space(decode_matrix(f, ch.dims.m, ch.dims.l, y));
        const std::uint64_t key = detail::subspace_key(s, ch.dims.m);
        auto [it, inserted] = out_key.emplace(key, static_cast<std::uint32_t>(sc.outputs.size()));
        if (inserted) sc.outputs.push_back(std::move(s));
        sc.output_class_of[y] = it->second;
    }

    sc.p.assign(sc.inputs.size(), std::vector<BigRational>(sc.outputs.size(), BigRational(0)));
    for (std::size_t ci = 0; ci < sc.inputs.size(); ++ci) {
        for (const auto& [pos, pr] : ch.rows[in_rep[ci]])
            sc.p[ci][sc.output_class_of[ch.out_ids[pos]]] += pr;
        BigRational sum(0);
        for (const auto& v : sc.p[ci]) sum += v;
        if (sum != 1) throw std::logic_error("grouped row does not sum to 1");
    }

    // closed form: p(V|U) = |T(F_q^{m x dim V})| p(Y|X) for any representatives
    for (std::size_t ci = 0; ci < sc.inputs.size(); ++ci) {
        std::map<std::uint32_t, BigRational> seen;  // V class -> p(Y|X0)
        std::vector<bool> checked(sc.outputs.size(), false);
        for (const auto& [pos, pr] : ch.rows[in_rep[ci]]) {
            const std::uint32_t cv = sc.output_class_of[ch.out_ids[pos]];
            auto [it, inserted] = seen.emplace(cv, pr);
            if (!inserted && it->second != pr)
                throw std::invalid_argument(
                    "output grouping inconsistency: channel is not u.g.r.");
            checked[cv] = true;
        }
        for (const auto& [cv, per_matrix] : seen) {
            const BigCount full = count_full_rank(ch.dims.m, sc.outputs[cv].dim(), ch.dims.q);
            if (sc.p[ci][cv] != BigRational(full) * per_matrix)
                throw std::logic_error("grouped table disagrees with the closed form");
        }
        (void)checked;
    }
    return sc;
}

inline double subspace_mutual_information(const SubspaceChannel& sc,
                                          const std::vector<double>& pu) {
    if (pu.size() != sc.inputs.size()) throw std::invalid_argument("input class distribution size");
    const double lnq = std::log(static_cast<double>(sc.dims.q));
    std::vector<double> pv(sc.outputs.size(), 0.0);
    for (std::size_t u = 0; u < sc.inputs.size(); ++u) {
        if (pu[u] == 0.0) continue;
        for (std::size_t v = 0; v < sc.outputs.size(); ++v)
            pv[v] += pu[u] * to_double(sc.p[u][v]);
    }
    double mi = 0.0;
    for (std::size_t u = 0; u < sc.inputs.size(); ++u) {
        if (pu[u] == 0.0) continue;
        for (std::size_t v = 0; v < sc.outputs.size(); ++v) {
            const double w = to_double(sc.p[u][v]);
            if (w <= 0.0) continue;
            mi += pu[u] * w * (std::log(w) - std::log(pv[v])) / lnq;
        }
    }
    return mi;
}

// ---------------------------------------------------------------------------
// Exhaustive verification reports.

struct CheckReport {
    std::uint64_t checks = 0;
    std::vector<std::string> failures;

    bool pass() const { return failures.empty(); }
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
};

namespace detail {

inline FqMatrix canonical_rank_matrix(const Field& f, int rows, int cols, int r) {
    FqMatrix a(f, rows, cols);
    for (int i = 0; i < r; ++i) a.set(i, i, 1);
    return a;
}

inline FqMatrix random_rank_matrix(const Field& f, int rows, int cols, int r, Rng& rng) {
    if (r == 0) return FqMatrix(f, rows, cols);
    FqMatrix b = sample_full_rank(rows, r, f, rng);
    FqMatrix c = sample_full_rank(r, cols, f, rng);
    return mat_mul(b, c);
}

inline std::string tuple_tag(std::initializer_list<std::int64_t> xs) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (auto x : xs) { os << (first ? "" : ",") << x; first = false; }
    os << ")";
    return os.str();
}

} // namespace detail

// Exhaustive counts behind the span/completion formulas, plus the rank
// census partition and the Gaussian-binomial sandwich.
inline CheckReport verify_lemma_counts(std::int64_t q, int max_dim = 3, int max_len = 4) {
    CheckReport rep;
    Field f(static_cast<std::uint32_t>(q));
    Rng rng = derive_rng(0x1e37aULL + static_cast<std::uint64_t>(q), 0);

    // span counts, both directions
    for (int m = 1; m <= max_dim; ++m) {
        for (int l = 1; l <= max_len; ++l) {
            auto rank_y = rank_table(f, m, l);
            const std::uint64_t y_total = rank_y.size();
            const int n = max_dim;
            for (int u = 0; u <= std::min(n, l); ++u) {
                for (int xcase = 0; xcase < 2; ++xcase) {
                    FqMatrix x = xcase == 0 ? detail::canonical_rank_matrix(f, n, l, u)
                                            : detail::random_rank_matrix(f, n, l, u, rng);
                    const int rx = rank(x);
                    std::vector<std::uint64_t> by_rank(static_cast<std::size_t>(std::min(m, l)) + 1, 0);
                    for (std::uint64_t y = 0; y < y_total; ++y) {
                        FqMatrix ym = decode_matrix(f, m, l, y);
                        if (rank(vstack(x, ym)) == rx) ++by_rank[rank_y[y]];
                    }
                    for (int v = 0; v <= std::min(m, l); ++v)
                        rep.expect(BigCount(by_rank[static_cast<std::size_t>(v)]) ==
                                       count_sub_in_span(u, v, m, q),
                                   "sub-span count mismatch at " +
                                       detail::tuple_tag({q, m, l, u, v, xcase}));
                }
            }
        }
    }
    for (int n = 1; n <= max_dim; ++n) {
        for (int m = 1; m <= max_dim; ++m) {
            for (int l = 1; l <= max_len; ++l) {
                auto rank_x = rank_table(f, n, l);
                const std::uint64_t x_total = rank_x.size();
                for (int v = 0; v <= std::min(m, l); ++v) {
                    for (int ycase = 0; ycase < 2; ++ycase) {
                        FqMatrix y = ycase == 0 ? detail::canonical_rank_matrix(f, m, l, v)
                                                : detail::random_rank_matrix(f, m, l, v, rng);
                        std::vector<std::uint64_t> by_rank(static_cast<std::size_t>(std::min(n, l)) + 1, 0);
                        for (std::uint64_t x = 0; x < x_total; ++x) {
                            FqMatrix xm = decode_matrix(f, n, l, x);
                            if (rank(vstack(xm, y)) == rank_x[x]) ++by_rank[rank_x[x]];
                        }
                        for (int u = 0; u <= std::min(n, l); ++u)
                            rep.expect(BigCount(by_rank[static_cast<std::size_t>(u)]) ==
                                           count_super_of_span(u, v, n, m, l, q),
                                       "super-span count mismatch at " +
                                           detail::tuple_tag({q, n, m, l, u, v, ycase}));
                    }
                }
            }
        }
    }

    // completion counts for a fixed left block
    for (int m = 1; m <= max_dim; ++m) {
        for (int n = 1; n <= max_dim; ++n) {
            for (int u = 0; u <= n; ++u) {
                for (int v = 0; v <= std::min(m, u); ++v) {
                    for (int gcase = 0; gcase < 2; ++gcase) {
                        FqMatrix g0 = gcase == 0 ? detail::canonical_rank_matrix(f, m, u, v)
                                                 : detail::random_rank_matrix(f, m, u, v, rng);
                        std::vector<std::uint64_t> by_rank(static_cast<std::size_t>(std::min(m, n)) + 1, 0);
                        const std::uint64_t ext_total = matrix_space_size(f.order(), m, n - u);
                        for (std::uint64_t w = 0; w < ext_total; ++w) {
                            FqMatrix ext = decode_matrix(f, m, n - u, w);
                            FqMatrix full = u == 0 ? ext : (n - u == 0 ? g0 : hstack(g0, ext));
                            ++by_rank[rank(full)];
                        }
                        for (int r = 0; r <= std::min(m, n); ++r)
                            rep.expect(BigCount(by_rank[static_cast<std::size_t>(r)]) ==
                                           phi_q(m, n, u, r, v, q),
                                       "completion count mismatch at " +
                                           detail::tuple_tag({q, m, n, u, r, v, gcase}));
                    }
                }
            }
        }
    }

    // transfer-matrix solution counts: #{G in T_r : GX = Y}
    for (int n = 1; n <= max_dim; ++n) {
        for (int m = 1; m <= max_dim; ++m) {
            for (int l = std::max(n, m); l <= max_len; ++l) {
                const std::uint64_t g_total = matrix_space_size(f.order(), m, n);
                for (int u = 0; u <= std::min(n, l); ++u) {
                    FqMatrix x = detail::canonical_rank_matrix(f, n, l, u);
                    for (int v = 0; v <= std::min(m, l); ++v) {
                        std::vector<FqMatrix> ys;
                        if (v <= u) {
                            // reachable: rank-v pattern inside the left u columns
                            FqMatrix y(f, m, l);
                            for (int i = 0; i < v; ++i) y.set(i, i, 1);
                            ys.push_back(std::move(y));
                        }
                        if (v >= 1 && u < l) {
                            // unreachable: a row sticking out of <X>
                            FqMatrix y(f, m, l);
                            for (int i = 0; i < v - 1; ++i) y.set(i, i, 1);
                            y.set(v - 1, u, 1);
                            ys.push_back(std::move(y));
                        }
                        for (const auto& y : ys) {
                            if (rank(y) != v) continue;
                            const bool incl = spans_include(x, y);
                            std::vector<std::uint64_t> by_rank(
                                static_cast<std::size_t>(std::min(m, n)) + 1, 0);
                            for (std::uint64_t g = 0; g < g_total; ++g) {
                                FqMatrix gm = decode_matrix(f, m, n, g);
                                if (mat_mul(gm, x) == y) ++by_rank[rank(gm)];
                            }
                            for (int r = 0; r <= std::min(m, n); ++r) {
                                BigCount expected = incl ? phi_q(m, n, u, r, v, q) : BigCount(0);
                                rep.expect(BigCount(by_rank[static_cast<std::size_t>(r)]) == expected,
                                           "GX = Y count mismatch at " +
                                               detail::tuple_tag({q, n, m, l, u, v, r, incl}));
                            }
                        }
                    }
                }
            }
        }
    }

    // rank census partitions the matrix space
    for (std::int64_t qq : {std::int64_t(2), std::int64_t(3), std::int64_t(4), std::int64_t(5)})
        for (int m = 1; m <= 6; ++m)
            for (int n = 1; n <= 6; ++n) {
                BigCount sum = 0;
                for (int r = 0; r <= std::min(m, n); ++r)
                    sum += count_rank_class(m, n, r, qq);
                rep.expect(sum == big_pow(qq, std::int64_t(m) * n),
                           "rank census does not partition at " + detail::tuple_tag({qq, m, n}));
            }

    // Gaussian binomial sandwich
    for (std::int64_t qq : {std::int64_t(2), std::int64_t(3), std::int64_t(5)})
        for (int n = 0; n <= 8; ++n)
            for (int r = 0; r <= n; ++r) {
                auto bounds = gaussian_binomial_bounds(n, r, qq);
                const BigCount value = gaussian_binomial(n, r, qq);
                rep.expect(bounds.lower <= value &&
                               to_double(value) <= bounds.upper * (1.0 + 1e-12),
                           "binomial sandwich violated at " + detail::tuple_tag({qq, n, r}));
            }

    return rep;
}

// Exhaustive verification of the rank transition law at l = max(n, m):
// for EVERY X, the tally of rank(GX) over each whole rank class T_r matches
// the closed form exactly. Indices run over row-encoded matrices so the
// inner loop is two table lookups per (G, X) pair.
inline CheckReport verify_rank_kernel_exhaustive(std::int64_t q, int n, int m) {
    CheckReport rep;
    Field f(static_cast<std::uint32_t>(q));
    const int l = std::max(n, m);
    if (l > 8) throw std::invalid_argument("exhaustive kernel check is limited to l <= 8");
    ChannelDims dims(q, n, m, l);
    const int vmax = dims.vmax();

    const std::uint64_t x_total = matrix_space_size(f.order(), n, l);
    const std::uint64_t g_total = matrix_space_size(f.order(), m, n);
    const std::uint64_t row_in = matrix_space_size(f.order(), 1, n);   // q^n
    const std::uint64_t row_out = matrix_space_size(f.order(), 1, l);  // q^l

    auto rank_x = rank_table(f, n, l);
    auto rank_g = rank_table(f, m, n);
    auto rank_p = rank_table(f, m, l);

    // expected per-X tallies: #{G in T_r : rank(GX) = v} = |T_v(F_q^{m x u})| phi_q(...)
    // which also pins the closed-form law once per (u, r, v).
    std::vector<std::vector<std::vector<std::uint64_t>>> expected(
        static_cast<std::size_t>(n) + 1,
        std::vector<std::vector<std::uint64_t>>(static_cast<std::size_t>(vmax) + 1,
                                                std::vector<std::uint64_t>(static_cast<std::size_t>(vmax) + 1, 0)));
    for (int u = 0; u <= n; ++u) {
        for (int r = 0; r <= vmax; ++r) {
            auto law = rank_transition_exact(dims, u, r);
            const BigCount class_size = count_rank_class(m, n, r, q);
            for (int v = 0; v <= vmax; ++v) {
                BigCount cnt = count_sub_in_span(u, v, m, q) * phi_q(m, n, u, r, v, q);
                expected[u][r][v] = cnt.convert_to<std::uint64_t>();
                rep.expect(BigRational(cnt, class_size) == law[static_cast<std::size_t>(v)],
                           "transition law disagrees with count form at " +
                               detail::tuple_tag({q, n, m, u, r, v}));
            }
        }
    }

    // per-G row digits (base q^n) computed once
    std::vector<std::uint32_t> digits(static_cast<std::size_t>(g_total) * m);
    for (std::uint64_t g = 0; g < g_total; ++g) {
        std::uint64_t rest = g;
        for (int i = 0; i < m; ++i) {
            digits[static_cast<std::size_t>(g) * m + i] = static_cast<std::uint32_t>(rest % row_in);
            rest /= row_in;
        }
    }

    std::vector<std::uint64_t> row_image(row_in);
    std::vector<std::uint64_t> tally(static_cast<std::size_t>(vmax + 1) * (vmax + 1));
    std::vector<std::uint32_t> xm(static_cast<std::size_t>(n) * l);
    for (std::uint64_t x = 0; x < x_total; ++x) {
        const int u = rank_x[x];
        {
            std::uint64_t rest = x;
            for (std::size_t i = 0; i < xm.size(); ++i) {
                xm[i] = static_cast<std::uint32_t>(rest % f.order());
                rest /= f.order();
            }
        }
        // image (as a row index) of every possible G-row against this X
        for (std::uint64_t rv = 0; rv < row_in; ++rv) {
            std::uint64_t rest = rv;
            std::uint32_t out[8] = {0};
            for (int i = 0; i < n; ++i) {
                const std::uint32_t c = static_cast<std::uint32_t>(rest % f.order());
                rest /= f.order();
                if (c == 0) continue;
                for (int j = 0; j < l; ++j)
                    out[j] = static_cast<std::uint32_t>(
                        (out[j] + std::uint64_t(c) * xm[static_cast<std::size_t>(i) * l + j]) %
                        f.order());
            }
            std::uint64_t img = 0;
            for (int j = l; j-- > 0;) img = img * f.order() + out[j];
            row_image[rv] = img;
        }
        std::fill(tally.begin(), tally.end(), 0);
        for (std::uint64_t g = 0; g < g_total; ++g) {
            std::uint64_t prod = 0, base = 1;
            const std::uint32_t* dg = &digits[static_cast<std::size_t>(g) * m];
            for (int i = 0; i < m; ++i) {
                prod += row_image[dg[i]] * base;
                base *= row_out;
            }
            ++tally[static_cast<std::size_t>(rank_g[g]) * (vmax + 1) + rank_p[prod]];
        }
        bool ok = true;
        for (int r = 0; r <= vmax && ok; ++r)
            for (int v = 0; v <= vmax && ok; ++v)
                if (tally[static_cast<std::size_t>(r) * (vmax + 1) + v] != expected[u][r][v])
                    ok = false;
        rep.expect(ok, "exhaustive transition tally mismatch at X index " + std::to_string(x) +
                           " " + detail::tuple_tag({q, n, m, u}));
    }
    return rep;
}

} // namespace mmc
