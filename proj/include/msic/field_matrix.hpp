#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msic/errors.hpp"

namespace msic {

namespace gf {

inline int mod(long long v, int q) {
    long long r = v % q;
    return static_cast<int>(r < 0 ? r + q : r);
}

/// Multiplicative inverse in a prime field, via Fermat.
inline int inverse(int a, int q) {
    int r = 1, b = a % q, e = q - 2;
    while (e > 0) {
        if (e & 1) r = r * b % q;
        b = b * b % q;
        e >>= 1;
    }
    return r;
}

inline bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

} // namespace gf

/// Dense matrix over a prime field. Entries live in [0, q).
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(int rows, int cols, int q)
        : rows_(rows), cols_(cols), q_(q), a_(static_cast<size_t>(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int q() const { return q_; }

    std::uint8_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, int v) {
        a_[static_cast<size_t>(r) * cols_ + c] = static_cast<std::uint8_t>(gf::mod(v, q_));
    }

    std::vector<std::uint8_t> column(int c) const {
        std::vector<std::uint8_t> out(rows_);
        for (int r = 0; r < rows_; ++r) out[r] = at(r, c);
        return out;
    }

    void append_column(std::span<const std::uint8_t> col) {
        std::vector<std::uint8_t> b(static_cast<size_t>(rows_) * (cols_ + 1));
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) b[static_cast<size_t>(r) * (cols_ + 1) + c] = at(r, c);
            b[static_cast<size_t>(r) * (cols_ + 1) + cols_] = col[r];
        }
        a_ = std::move(b);
        ++cols_;
    }

    static FieldMatrix hcat(const FieldMatrix& l, const FieldMatrix& r) {
        FieldMatrix out(l.rows(), l.cols() + r.cols(), l.q());
        for (int i = 0; i < l.rows(); ++i) {
            for (int c = 0; c < l.cols(); ++c) out.set(i, c, l.at(i, c));
            for (int c = 0; c < r.cols(); ++c) out.set(i, l.cols() + c, r.at(i, c));
        }
        return out;
    }

    FieldMatrix transposed() const {
        FieldMatrix out(cols_, rows_, q_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) out.set(c, r, at(r, c));
        return out;
    }

    bool operator==(const FieldMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && q_ == o.q_ && a_ == o.a_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    int q_ = 2;
    std::vector<std::uint8_t> a_;
};

/// Incremental reduced column basis: add one column, learn the new rank.
/// GF(2) columns with <= 64 rows are kept as packed words; everything else
/// takes the generic modular elimination path.
class RankAccumulator {
public:
    RankAccumulator() = default;
    RankAccumulator(int rows, int q)
        : rows_(rows), q_(q), packed_(q == 2 && rows <= 64) {}

    int rank() const { return packed_ ? static_cast<int>(bits_.size())
                                      : static_cast<int>(basis_.size()); }

    /// Returns true if the column was independent of the basis so far.
    bool add(std::span<const std::uint8_t> col) {
        if (packed_) {
            std::uint64_t w = pack(col);
            w = reduce_bits(w);
            if (!w) return false;
            insert_bits(w);
            return true;
        }
        std::vector<std::uint8_t> v(col.begin(), col.end());
        if (!reduce(v)) return false;
        insert(std::move(v));
        return true;
    }

    bool would_grow(std::span<const std::uint8_t> col) const {
        if (packed_) return reduce_bits(pack(col)) != 0;
        std::vector<std::uint8_t> v(col.begin(), col.end());
        return reduce(v);
    }

private:
    std::uint64_t pack(std::span<const std::uint8_t> col) const {
        std::uint64_t w = 0;
        for (int r = 0; r < rows_; ++r)
            if (col[r] & 1) w |= std::uint64_t{1} << r;
        return w;
    }

    std::uint64_t reduce_bits(std::uint64_t w) const {
        for (size_t i = 0; i < bits_.size() && w; ++i)
            if (w & lead_[i]) w ^= bits_[i];
        return w;
    }

    void insert_bits(std::uint64_t w) {
        std::uint64_t lead = std::uint64_t{1} << (63 - __builtin_clzll(w));
        bits_.push_back(w);
        lead_.push_back(lead);
    }

    // Generic path: basis rows are pivot-normalized, pivot = first nonzero index.
    bool reduce(std::vector<std::uint8_t>& v) const {
        for (size_t i = 0; i < basis_.size(); ++i) {
            int coeff = v[pivot_[i]];
            if (!coeff) continue;
            for (int r = 0; r < rows_; ++r)
                v[r] = static_cast<std::uint8_t>(gf::mod(v[r] - coeff * basis_[i][r], q_));
        }
        for (int r = 0; r < rows_; ++r)
            if (v[r]) return true;
        return false;
    }

    void insert(std::vector<std::uint8_t> v) {
        int p = 0;
        while (!v[p]) ++p;
        int inv = gf::inverse(v[p], q_);
        for (int r = 0; r < rows_; ++r)
            v[r] = static_cast<std::uint8_t>(v[r] * inv % q_);
        basis_.push_back(std::move(v));
        pivot_.push_back(p);
    }

    int rows_ = 0;
    int q_ = 2;
    bool packed_ = false;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> lead_;
    std::vector<std::vector<std::uint8_t>> basis_;
    std::vector<int> pivot_;
};

inline int rank(const FieldMatrix& m) {
    RankAccumulator acc(m.rows(), m.q());
    for (int c = 0; c < m.cols(); ++c) acc.add(m.column(c));
    return acc.rank();
}

/// True iff v is a field-linear combination of the columns of `basis_cols`.
inline bool in_span(std::span<const std::uint8_t> v, const FieldMatrix& basis_cols) {
    if (static_cast<int>(v.size()) != basis_cols.rows())
        throw Error("in_span: vector length does not match matrix rows");
    RankAccumulator acc(basis_cols.rows(), basis_cols.q());
    for (int c = 0; c < basis_cols.cols(); ++c) acc.add(basis_cols.column(c));
    return !acc.would_grow(v);
}

/// Leftmost-greedy maximal independent column set; size equals rank.
inline std::vector<int> independent_columns(const FieldMatrix& m) {
    RankAccumulator acc(m.rows(), m.q());
    std::vector<int> keep;
    for (int c = 0; c < m.cols(); ++c)
        if (acc.add(m.column(c))) keep.push_back(c);
    return keep;
}

/// Dimension bookkeeping for three column blocks sharing a row space.
struct SubspaceDims {
    int d1 = 0, d2 = 0, d3 = 0;
    int d12 = 0, d123 = 0;
    int dint12 = 0;   // dim(V1 ∩ V2)
    int dint3_12 = 0; // dim(V3 ∩ (V1 + V2))
};

inline SubspaceDims subspace_dims(const FieldMatrix& c1, const FieldMatrix& c2,
                                  const FieldMatrix& c3) {
    if (c1.rows() != c2.rows() || c2.rows() != c3.rows())
        throw Error("subspace_dims: row counts differ");
    SubspaceDims d;
    d.d1 = rank(c1);
    d.d2 = rank(c2);
    d.d3 = rank(c3);
    FieldMatrix m12 = FieldMatrix::hcat(c1, c2);
    d.d12 = rank(m12);
    d.d123 = rank(FieldMatrix::hcat(m12, c3));
    d.dint12 = d.d1 + d.d2 - d.d12;
    d.dint3_12 = d.d3 + d.d12 - d.d123;
    return d;
}

} // namespace msic
