#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "homoperc/bit_matrix.hpp"
#include "homoperc/rng.hpp"

using namespace homoperc;

namespace {

BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                        double density = 0.5) {
    CounterRng rng(derive_stream(seed, 7));
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.next_double() < density) m.set(r, c, true);
    return m;
}

}  // namespace

TEST_CASE("identity and zero ranks") {
    CHECK(gf2_rank(BitMatrix::identity(17)) == 17);
    CHECK(gf2_rank(BitMatrix(9, 40)) == 0);
}

TEST_CASE("rank of a hand-built matrix") {
    // rows: 1100, 0110, 1010 (= row0+row1), 0001
    BitMatrix m(4, 4);
    m.set(0, 0, true); m.set(0, 1, true);
    m.set(1, 1, true); m.set(1, 2, true);
    m.set(2, 0, true); m.set(2, 2, true);
    m.set(3, 3, true);
    CHECK(gf2_rank(m) == 3);
}

TEST_CASE("rank is invariant under transpose") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        BitMatrix m = random_matrix(23, 71, seed, 0.3);
        CHECK(gf2_rank(m) == gf2_rank(m.transposed()));
        CHECK(m.transposed().transposed() == m);
    }
}

TEST_CASE("select_columns keeps the expected entries") {
    BitMatrix m = random_matrix(10, 30, 42);
    std::vector<std::size_t> keep{0, 3, 29, 7, 7};
    BitMatrix s = m.select_columns(keep);
    REQUIRE(s.cols() == keep.size());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t j = 0; j < keep.size(); ++j)
            CHECK(s.get(r, j) == m.get(r, keep[j]));
}

TEST_CASE("row basis agrees with elimination rank") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        BitMatrix m = random_matrix(40, 65, seed, 0.2);
        RowBasis basis(m.cols());
        basis.add_all(m);
        CHECK(basis.rank() == gf2_rank(m));
    }
}

TEST_CASE("row basis membership: sums of rows are inside, fresh bits are not") {
    BitMatrix m = random_matrix(20, 50, 5, 0.3);
    RowBasis basis(m.cols());
    basis.add_all(m);

    CounterRng rng(derive_stream(99, 1));
    for (int t = 0; t < 50; ++t) {
        std::vector<std::uint64_t> combo(m.words_per_row(), 0);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (rng.next() & 1)
                for (std::size_t w = 0; w < m.words_per_row(); ++w)
                    combo[w] ^= m.row(r)[w];
        CHECK(basis.contains(combo.data()));
    }

    // a column untouched by any row cannot be spanned
    BitMatrix probe(1, 50);
    std::size_t free_col = 50;
    for (std::size_t c = 0; c < 50 && free_col == 50; ++c) {
        bool used = false;
        for (std::size_t r = 0; r < m.rows(); ++r) used = used || m.get(r, c);
        if (!used) free_col = c;
    }
    if (free_col < 50) {
        probe.set(0, free_col, true);
        CHECK(!basis.contains(probe.row(0)));
    }
    CHECK(basis.rank() <= 20);
}

TEST_CASE("row basis add is independent of insertion order") {
    BitMatrix m = random_matrix(30, 40, 11, 0.25);
    RowBasis fwd(m.cols()), rev(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) fwd.add_from(m, r);
    for (std::size_t r = m.rows(); r-- > 0;) rev.add_from(m, r);
    CHECK(fwd.rank() == rev.rank());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        CHECK(fwd.contains(m.row(r)));
        CHECK(rev.contains(m.row(r)));
    }
}

TEST_CASE("puncture/shorten rank split against exhaustive rowspace count") {
    // rank G = rank of G punctured to columns I, plus the dimension of the
    // subcode of rows vanishing on I. The latter is counted here by walking
    // every row combination with a Gray code.
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const std::size_t rows = 14, cols = 30;
        BitMatrix g = random_matrix(rows, cols, seed + 100, 0.3);
        CounterRng rng(derive_stream(seed, 3));
        std::vector<std::size_t> inside;
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.next() & 1) inside.push_back(c);

        std::size_t rank_full = gf2_rank(g);
        std::size_t rank_punct = gf2_rank(g.select_columns(inside));

        std::vector<std::uint64_t> acc(g.words_per_row(), 0);
        auto vanishes = [&]() {
            for (std::size_t c : inside)
                if ((acc[c / 64] >> (c % 64)) & 1ULL) return false;
            return true;
        };
        std::uint64_t vanish_count = vanishes() ? 1 : 0;  // empty combination
        for (std::uint64_t x = 1; x < (1ULL << rows); ++x) {
            std::size_t flip = static_cast<std::size_t>(std::countr_zero(x));
            for (std::size_t w = 0; w < g.words_per_row(); ++w)
                acc[w] ^= g.row(flip)[w];
            if (vanishes()) ++vanish_count;
        }
        // each codeword appears 2^(rows - rank_full) times
        REQUIRE((vanish_count & (vanish_count - 1)) == 0);
        std::size_t shortened_dim =
            static_cast<std::size_t>(std::countr_zero(vanish_count)) - (rows - rank_full);
        CHECK(rank_punct + shortened_dim == rank_full);
    }
}

TEST_CASE("orthogonality detector") {
    BitMatrix a(2, 4), b(2, 4);
    a.set(0, 0, true); a.set(0, 1, true);  // 1100
    b.set(0, 2, true); b.set(0, 3, true);  // 0011
    b.set(1, 0, true); b.set(1, 1, true);  // 1100 (even overlap with a row 0)
    CHECK(rows_orthogonal(a, b));
    b.set(1, 1, false);                    // 1000: odd overlap
    CHECK(!rows_orthogonal(a, b));
}
