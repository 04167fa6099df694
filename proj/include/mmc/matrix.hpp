#pragma once

// Dense matrices over a prime field with exact arithmetic: product, rank,
// reduced row echelon form, row spaces, and a mixed-radix integer encoding.
//
// Encoding convention (used by every exhaustive enumeration and by test
// fixtures): a rows x cols matrix maps to
//     index = sum_i entry[i] * q^i
// where i runs over entries in row-major order, i.e. entry (0,0) is the
// least significant digit.

#include "mmc/prime_field.hpp"

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mmc {

class FqMatrix {
public:
    FqMatrix(const Field& f, int rows, int cols)
        : field_(f), rows_(rows), cols_(cols),
          e_(static_cast<std::size_t>(check_dims(rows, cols)) , 0u) {}

    static FqMatrix identity(const Field& f, int n) {
        FqMatrix a(f, n, n);
        for (int i = 0; i < n; ++i) a.set(i, i, 1);
        return a;
    }

    static FqMatrix from_rows(const Field& f,
                              std::initializer_list<std::initializer_list<std::uint32_t>> rows) {
        int nr = static_cast<int>(rows.size());
        int nc = nr == 0 ? 0 : static_cast<int>(rows.begin()->size());
        FqMatrix a(f, nr, nc);
        int r = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != nc)
                throw std::invalid_argument("ragged matrix rows");
            int c = 0;
            for (std::uint32_t v : row) a.set(r, c++, v);
            ++r;
        }
        return a;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Field& field() const { return field_; }

    std::uint32_t operator()(int r, int c) const { return e_[idx(r, c)]; }
    std::uint32_t linear(std::size_t i) const { return e_[i]; }
    std::size_t cells() const { return e_.size(); }

    void set(int r, int c, std::uint32_t v) {
        if (v >= field_.order()) throw std::invalid_argument("entry out of field range");
        e_[idx(r, c)] = v;
    }
    void set_linear(std::size_t i, std::uint32_t v) {
        if (v >= field_.order()) throw std::invalid_argument("entry out of field range");
        e_[i] = v;
    }

    bool is_zero() const {
        for (auto v : e_) if (v != 0) return false;
        return true;
    }

    bool operator==(const FqMatrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const FqMatrix& o) const { return !(*this == o); }

private:
    static std::size_t check_dims(int rows, int cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    std::size_t idx(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("matrix index");
        return static_cast<std::size_t>(r) * cols_ + c;
    }

    Field field_;
    int rows_, cols_;
    std::vector<std::uint32_t> e_;
};

inline FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b) {
    if (a.field() != b.field()) throw std::invalid_argument("field mismatch in product");
    if (a.cols() != b.rows()) throw std::invalid_argument("inner dimension mismatch in product");
    const std::uint64_t q = a.field().order();
    FqMatrix c(a.field(), a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            std::uint64_t aik = a(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) {
                std::uint64_t acc = c(i, j) + aik * b(k, j);
                c.set(i, j, static_cast<std::uint32_t>(acc % q));
            }
        }
    }
    return c;
}

// In-place Gaussian elimination; returns rank. Shared by rank() and rref().
namespace detail {
inline int eliminate(FqMatrix& a, bool reduced) {
    const Field& f = a.field();
    int pivot_row = 0;
    for (int col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
        int sel = -1;
        for (int r = pivot_row; r < a.rows(); ++r)
            if (a(r, col) != 0) { sel = r; break; }
        if (sel < 0) continue;
        if (sel != pivot_row)
            for (int c = 0; c < a.cols(); ++c) {
                std::uint32_t t = a(sel, c);
                a.set(sel, c, a(pivot_row, c));
                a.set(pivot_row, c, t);
            }
        if (reduced) {
            std::uint32_t piv_inv = f.inv(a(pivot_row, col));
            if (piv_inv != 1)
                for (int c = col; c < a.cols(); ++c)
                    a.set(pivot_row, c, f.mul(a(pivot_row, c), piv_inv));
        }
        int first = reduced ? 0 : pivot_row + 1;
        for (int r = first; r < a.rows(); ++r) {
            if (r == pivot_row) continue;
            std::uint32_t factor = a(r, col);
            if (factor == 0) continue;
            if (!reduced) factor = f.mul(factor, f.inv(a(pivot_row, col)));
            for (int c = col; c < a.cols(); ++c)
                a.set(r, c, f.sub(a(r, c), f.mul(factor, a(pivot_row, c))));
        }
        ++pivot_row;
    }
    return pivot_row;
}
} // namespace detail

inline int rank(const FqMatrix& a) {
    FqMatrix w = a;
    return detail::eliminate(w, /*reduced=*/false);
}

inline FqMatrix rref(const FqMatrix& a) {
    FqMatrix w = a;
    detail::eliminate(w, /*reduced=*/true);
    return w;
}

// Row space as its canonical representative: the RREF basis with zero rows
// dropped. Two subspaces are equal iff their representatives are equal.
class Subspace {
public:
    Subspace(const Field& f, int ambient_dim, FqMatrix rref_basis)
        : field_(f), ambient_(ambient_dim), basis_(std::move(rref_basis)) {
        if (basis_.cols() != ambient_)
            throw std::invalid_argument("basis width disagrees with ambient dimension");
    }

    const Field& field() const { return field_; }
    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const FqMatrix& basis() const { return basis_; }

    bool operator==(const Subspace& o) const {
        return field_ == o.field_ && ambient_ == o.ambient_ && basis_ == o.basis_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

private:
    Field field_;
    int ambient_;
    FqMatrix basis_;
};

inline Subspace row_space(const FqMatrix& a) {
    FqMatrix r = rref(a);
    int d = 0;
    while (d < r.rows()) {
        bool zero = true;
        for (int c = 0; c < r.cols(); ++c)
            if (r(d, c) != 0) { zero = false; break; }
        if (zero) break;
        ++d;
    }
    FqMatrix basis(a.field(), d, a.cols());
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < a.cols(); ++c)
            basis.set(i, c, r(i, c));
    return Subspace(a.field(), a.cols(), std::move(basis));
}

inline FqMatrix vstack(const FqMatrix& a, const FqMatrix& b) {
    if (a.field() != b.field() || a.cols() != b.cols())
        throw std::invalid_argument("vstack shape mismatch");
    FqMatrix c(a.field(), a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.set(i, j, a(i, j));
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) c.set(a.rows() + i, j, b(i, j));
    return c;
}

inline FqMatrix hstack(const FqMatrix& a, const FqMatrix& b) {
    if (a.field() != b.field() || a.rows() != b.rows())
        throw std::invalid_argument("hstack shape mismatch");
    FqMatrix c(a.field(), a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) c.set(i, j, a(i, j));
        for (int j = 0; j < b.cols(); ++j) c.set(i, a.cols() + j, b(i, j));
    }
    return c;
}

// <Y> subseteq <X>, decided exactly via rank([X; Y]) == rank(X).
inline bool spans_include(const FqMatrix& x, const FqMatrix& y) {
    return rank(vstack(x, y)) == rank(x);
}

inline std::uint64_t matrix_space_size(std::uint32_t q, int rows, int cols) {
    std::uint64_t total = 1;
    for (int i = 0; i < rows * cols; ++i) {
        if (total > UINT64_MAX / q)
            throw std::overflow_error("matrix space too large to index");
        total *= q;
    }
    return total;
}

inline std::uint64_t encode_matrix(const FqMatrix& a) {
    const std::uint64_t q = a.field().order();
    std::uint64_t idx = 0;
    for (std::size_t i = a.cells(); i-- > 0;) idx = idx * q + a.linear(i);
    return idx;
}

inline FqMatrix decode_matrix(const Field& f, int rows, int cols, std::uint64_t index) {
    const std::uint64_t q = f.order();
    FqMatrix a(f, rows, cols);
    for (std::size_t i = 0; i < a.cells(); ++i) {
        a.set_linear(i, static_cast<std::uint32_t>(index % q));
        index /= q;
    }
    return a;
}

} // namespace mmc
