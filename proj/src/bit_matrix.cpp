#include "homoperc/bit_matrix.hpp"

#include <algorithm>
#include <bit>

namespace homoperc {

bool BitMatrix::row_is_zero(std::size_t r) const {
    const std::uint64_t* p = row(r);
    for (std::size_t w = 0; w < wpr_; ++w)
        if (p[w]) return false;
    return true;
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
    const std::uint64_t* p = row(r);
    std::size_t n = 0;
    for (std::size_t w = 0; w < wpr_; ++w) n += std::popcount(p[w]);
    return n;
}

BitMatrix BitMatrix::select_columns(const std::vector<std::size_t>& keep) const {
    BitMatrix out(rows_, keep.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (get(r, keep[j])) out.set(r, j, true);
    return out;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::uint64_t* p = row(r);
        for (std::size_t w = 0; w < wpr_; ++w) {
            std::uint64_t bits = p[w];
            while (bits) {
                int b = std::countr_zero(bits);
                bits &= bits - 1;
                out.set(w * 64 + b, r, true);
            }
        }
    }
    return out;
}

std::size_t gf2_rank(BitMatrix m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t r = rank; r < rows; ++r) {
            if (m.get(r, c)) { pivot = r; break; }
        }
        if (pivot == rows) continue;
        m.swap_rows(rank, pivot);
        for (std::size_t r = pivot + 1; r < rows; ++r)
            if (m.get(r, c)) m.row_xor(r, rank);
        ++rank;
    }
    return rank;
}

bool rows_orthogonal(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.cols()) return false;
    const std::size_t wpr = a.words_per_row();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const std::uint64_t* ra = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const std::uint64_t* rb = b.row(j);
            std::uint64_t acc = 0;
            for (std::size_t w = 0; w < wpr; ++w) acc ^= ra[w] & rb[w];
            if (std::popcount(acc) & 1) return false;
        }
    }
    return true;
}

// Basis rows are kept sorted by pivot (leftmost set bit). Sweeping them in
// that order guarantees a cleared pivot column is never set again, since a
// later row only carries bits at or beyond its own, larger pivot.
std::size_t RowBasis::reduce(std::vector<std::uint64_t>& buf) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        std::size_t p = pivots_[i];
        if ((buf[p / 64] >> (p % 64)) & 1ULL) {
            const std::uint64_t* src = rows_[i].data();
            for (std::size_t w = 0; w < wpr_; ++w) buf[w] ^= src[w];
        }
    }
    for (std::size_t w = 0; w < wpr_; ++w) {
        if (buf[w]) return w * 64 + std::countr_zero(buf[w]);
    }
    return cols_;
}

bool RowBasis::add(const std::uint64_t* row_words) {
    std::vector<std::uint64_t> buf(row_words, row_words + wpr_);
    std::size_t p = reduce(buf);
    if (p == cols_) return false;
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    std::size_t idx = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, p);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(buf));
    return true;
}

bool RowBasis::contains(const std::uint64_t* row_words) const {
    std::vector<std::uint64_t> buf(row_words, row_words + wpr_);
    return reduce(buf) == cols_;
}

}  // namespace homoperc
