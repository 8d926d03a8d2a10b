#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include <rectifier/bounds.hpp>
#include <rectifier/constructions.hpp>

namespace rectifier {
namespace {

BooleanMatrix from_mask(std::size_t rows, std::size_t cols, std::uint64_t mask) {
    BooleanMatrix a(rows, cols);
    for (std::size_t b = 0; b < rows * cols; ++b)
        if ((mask >> b) & 1) a.set(b / cols, b % cols);
    return a;
}

// Oracle: DP over subsets of one-entries, trying every all-ones S x T
// (any sizes, a 1 x 1 block priced as a wire) for the lowest uncovered cell.
std::uint64_t brute_or2(const BooleanMatrix& a) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.get(i, j)) cells.push_back({i, j});
    const std::size_t n = cells.size();
    struct Block {
        std::uint32_t mask;
        std::uint64_t cost;
    };
    std::vector<Block> blocks;
    for (std::uint32_t s = 1; s < (1u << a.rows()); ++s) {
        for (std::uint32_t t = 1; t < (1u << a.cols()); ++t) {
            std::uint32_t mask = 0;
            for (std::size_t x = 0; x < n; ++x) {
                const auto [i, j] = cells[x];
                if (((s >> i) & 1) && ((t >> j) & 1)) mask |= 1u << x;
            }
            const auto rs = std::popcount(s), ts = std::popcount(t);
            if (std::popcount(mask) == rs * ts) blocks.push_back({mask, rs * ts == 1 ? 1u : static_cast<std::uint64_t>(rs + ts)});
        }
    }
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::uint64_t> best(full + 1, std::numeric_limits<std::uint64_t>::max());
    best[full] = 0;
    for (std::uint32_t mask = full; mask-- > 0;) {
        const int low = std::countr_zero(~mask);
        for (const auto& b : blocks)
            if ((b.mask >> low) & 1) best[mask] = std::min(best[mask], best[mask | b.mask] + b.cost);
    }
    return best[0];
}

TEST(Nechiporuk, IdentityIsTwoFree) {
    const auto cert = nechiporuk_lower(BooleanMatrix::identity(4), 2);
    EXPECT_EQ(cert.bound, 1u);
    EXPECT_TRUE(cert.freeness_verified);
    EXPECT_TRUE(cert.exact_for_2free);
    EXPECT_EQ(cert.exact_or, 4u);
}

TEST(Nechiporuk, PairTransformOfBrownIsExact) {
    const auto b = pair_transform(brown_matrix(3).matrix);
    const auto cert = nechiporuk_lower(b, 2);
    ASSERT_TRUE(cert.exact_or);
    EXPECT_EQ(*cert.exact_or, b.weight());
    EXPECT_EQ(cert.weight, b.weight());
}

TEST(Nechiporuk, GeneralK) {
    const auto a = norm_matrix(3, 2);
    const auto cert = nechiporuk_lower(a, 3);
    EXPECT_EQ(cert.bound, (a.weight() + 8) / 9);
    EXPECT_FALSE(cert.exact_or);
    EXPECT_FALSE(cert.exact_for_2free);
}

TEST(Nechiporuk, RejectsNonFreeWithWitness) {
    const auto a = BooleanMatrix::ones(3, 3);
    try {
        nechiporuk_lower(a, 2);
        FAIL();
    } catch (const NotKFreeError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotKFree);
        EXPECT_TRUE(witness_holds(a, e.witness()));
        EXPECT_EQ(e.witness().rows.size(), 2u);
    }
    EXPECT_THROW(nechiporuk_lower(a, 1), Error);
}

TEST(ExactOr2, Examples) {
    EXPECT_EQ(exact_or2(BooleanMatrix::ones(2, 2)).cost, 4u);
    EXPECT_EQ(exact_or2(BooleanMatrix::ones(3, 3)).cost, 6u);
    EXPECT_EQ(exact_or2(BooleanMatrix::identity(3)).cost, 3u);
    EXPECT_EQ(exact_or2(BooleanMatrix::zeros(3, 3)).cost, 0u);
    EXPECT_EQ(exact_or2(BooleanMatrix::ones(4, 4)).cost, 8u);
}

TEST(ExactOr2, OracleOnEveryThreeByThree) {
    for (std::uint64_t mask = 0; mask < 512; ++mask) {
        const auto a = from_mask(3, 3, mask);
        const auto r = exact_or2(a);
        ASSERT_TRUE(r.optimal);
        ASSERT_EQ(r.cost, brute_or2(a)) << a.to_text();
        ASSERT_TRUE(cover_is_valid(a, r.cover));
        ASSERT_EQ(r.cover.cost(), r.cost);
        ASSERT_LE(r.cost, a.weight());
    }
}

TEST(ExactOr2, OracleOnRandomFourByFour) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto a = random_matrix(4, 4, 0.3 + 0.1 * static_cast<double>(seed % 6), seed);
        const auto r = exact_or2(a);
        EXPECT_EQ(r.cost, brute_or2(a)) << a.to_text();
        EXPECT_TRUE(cover_is_valid(a, r.cover));
    }
}

// A 2-free matrix admits no rectangle with both sides >= 2, so wires are optimal.
TEST(ExactOr2, TwoFreeFourByFourEqualsWeight) {
    std::uint64_t checked = 0;
    for (std::uint64_t mask = 0; mask < (1u << 16); ++mask) {
        const auto a = from_mask(4, 4, mask);
        if (!is_k_free(a, 2).free) continue;
        ++checked;
        const auto r = exact_or2(a);
        ASSERT_EQ(r.cost, a.weight());
        ASSERT_TRUE(r.cover.rectangles.empty());
    }
    EXPECT_GT(checked, 1000u);
}

TEST(ExactOr2, DominatesNechiporuk) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto a = random_k_free(6, 6, 0.6, 3, seed);
        const auto r = exact_or2(a);
        EXPECT_GE(r.cost, nechiporuk_lower(a, 3).bound);
        EXPECT_LE(r.cost, a.weight());
    }
}

TEST(ExactOr2, BudgetAndLimits) {
    const auto a = BooleanMatrix::ones(5, 5);
    const auto r = exact_or2(a, 3);
    EXPECT_FALSE(r.optimal);
    EXPECT_TRUE(cover_is_valid(a, r.cover));
    EXPECT_EQ(r.cost, r.cover.cost());
    EXPECT_THROW(exact_or2(BooleanMatrix::ones(9, 9)), Error); // 81 one-entries
}

TEST(CoverIsValid, RejectsBadCovers) {
    const auto a = BooleanMatrix::identity(2);
    EXPECT_FALSE(cover_is_valid(a, Depth2Cover{}));
    EXPECT_TRUE(cover_is_valid(a, Depth2Cover{{}, {{0, 0}, {1, 1}}}));
    EXPECT_FALSE(cover_is_valid(a, Depth2Cover{{{{0, 1}, {0, 1}}}, {}}));
    EXPECT_FALSE(cover_is_valid(a, Depth2Cover{{}, {{0, 0}, {1, 1}, {0, 1}}}));
}

TEST(RectangleChain, AllOnesFourByFour) {
    const auto c = lemma1_certificate(BooleanMatrix::ones(4, 4));
    EXPECT_EQ(c.sigma, 24u);
    EXPECT_EQ(c.two_rectangles, 36u);
    EXPECT_TRUE(c.precondition);
    EXPECT_EQ(c.sigma_quarter, true);
    EXPECT_EQ(c.count_half, true);
    EXPECT_TRUE(c.all_hold());
}

TEST(RectangleChain, IdentityBelowPrecondition) {
    const auto c = lemma1_certificate(BooleanMatrix::identity(4));
    EXPECT_FALSE(c.precondition);
    EXPECT_FALSE(c.sigma_quarter);
    EXPECT_FALSE(c.count_half);
    EXPECT_TRUE(c.sigma_convexity);
    EXPECT_TRUE(c.count_convexity);
    EXPECT_THROW(lemma1_certificate(BooleanMatrix::ones(2, 3)), Error);
}

TEST(RectangleChain, BrownSeven) {
    const auto c = lemma1_certificate(brown_matrix(7).matrix);
    EXPECT_TRUE(c.precondition);
    EXPECT_TRUE(c.all_hold());
}

TEST(RectangleChain, DetectsViolations) {
    EXPECT_FALSE(lemma1_from_counts(4, 16, 0, 0).sigma_convexity);
    EXPECT_FALSE(lemma1_from_counts(4, 16, 24, 0).count_convexity);
}

// Exact comparisons against floating-point versions with a margin on random inputs.
TEST(RectangleChain, HoldsOnRandomMatrices) {
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const std::size_t n = 3 + seed % 30;
        const auto a = random_matrix(n, n, 0.05 + 0.9 * static_cast<double>(seed % 10) / 9.0, seed);
        const auto c = lemma1_certificate(a);
        EXPECT_TRUE(c.all_hold()) << "seed " << seed;
        const double W = static_cast<double>(c.weight), N = static_cast<double>(n), S = static_cast<double>(c.sigma);
        EXPECT_GE(S + 1e-9, W * W / (2 * N) - W / 2);
        EXPECT_EQ(c.precondition, W * W >= 4 * N * N * N);
    }
}

} // namespace
} // namespace rectifier
