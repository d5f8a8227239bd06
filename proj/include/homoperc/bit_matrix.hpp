#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace homoperc {

// Dense GF(2) matrix, rows packed 64 bits per word.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * wpr_ + c / 64] >> (c % 64)) & 1ULL;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t& w = data_[r * wpr_ + c / 64];
        std::uint64_t mask = 1ULL << (c % 64);
        if (v) w |= mask; else w &= ~mask;
    }
    void flip(std::size_t r, std::size_t c) {
        data_[r * wpr_ + c / 64] ^= 1ULL << (c % 64);
    }

    const std::uint64_t* row(std::size_t r) const { return data_.data() + r * wpr_; }
    std::uint64_t* row(std::size_t r) { return data_.data() + r * wpr_; }

    void row_xor(std::size_t dst, std::size_t src) {
        std::uint64_t* d = row(dst);
        const std::uint64_t* s = row(src);
        for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::uint64_t* ra = row(a);
        std::uint64_t* rb = row(b);
        for (std::size_t w = 0; w < wpr_; ++w) std::swap(ra[w], rb[w]);
    }

    bool row_is_zero(std::size_t r) const;
    std::size_t row_weight(std::size_t r) const;

    // New matrix keeping only the listed columns, in the given order.
    BitMatrix select_columns(const std::vector<std::size_t>& keep) const;

    BitMatrix transposed() const;

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> data_;
};

// Rank by elimination on a working copy.
std::size_t gf2_rank(BitMatrix m);

// True iff A * B^T == 0, i.e. every row of A is orthogonal to every row of B.
bool rows_orthogonal(const BitMatrix& a, const BitMatrix& b);

// Incremental echelon basis over GF(2); supports rank queries and
// membership tests against the span of the absorbed rows.
class RowBasis {
public:
    explicit RowBasis(std::size_t cols) : cols_(cols), wpr_((cols + 63) / 64) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    // Absorbs the row if independent; returns false if it was in the span.
    bool add(const std::uint64_t* row_words);
    bool add_from(const BitMatrix& m, std::size_t r) { return add(m.row(r)); }
    void add_all(const BitMatrix& m) {
        for (std::size_t r = 0; r < m.rows(); ++r) add(m.row(r));
    }

    bool contains(const std::uint64_t* row_words) const;

private:
    // Reduce buf in place by the basis; returns pivot column or cols_ if zero.
    std::size_t reduce(std::vector<std::uint64_t>& buf) const;

    std::size_t cols_;
    std::size_t wpr_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace homoperc
