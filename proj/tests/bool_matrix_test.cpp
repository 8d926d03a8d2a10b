#include <gtest/gtest.h>

#include <rectifier/bool_matrix.hpp>

namespace rectifier {
namespace {

TEST(BooleanMatrix, Weight) {
    EXPECT_EQ(BooleanMatrix::identity(3).weight(), 3u);
    EXPECT_EQ(BooleanMatrix::ones(2, 2).weight(), 4u);
    EXPECT_EQ(BooleanMatrix::ones(3, 130).weight(), 390u);
}

TEST(BooleanMatrix, Complement) {
    const auto c = BooleanMatrix::identity(2).complement();
    EXPECT_EQ(c.to_text(), "2 2\n01\n10\n");
    EXPECT_EQ(BooleanMatrix::ones(3, 70).complement(), BooleanMatrix::zeros(3, 70));
}

TEST(BooleanMatrix, ComplementIsInvolutionAndPreservesPadding) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = random_matrix(1 + seed % 7, 1 + seed * 13 % 150, 0.4, seed);
        const auto c = a.complement();
        EXPECT_EQ(c.complement(), a);
        EXPECT_EQ(a.weight() + c.weight(), a.rows() * a.cols());
    }
}

TEST(BooleanMatrix, RandomDensityExtremes) {
    EXPECT_EQ(random_matrix(4, 4, 0.0, 7), BooleanMatrix::zeros(4, 4));
    EXPECT_EQ(random_matrix(5, 67, 1.0, 7), BooleanMatrix::ones(5, 67));
    EXPECT_EQ(random_matrix(9, 9, 0.5, 42), random_matrix(9, 9, 0.5, 42));
    EXPECT_NE(random_matrix(9, 9, 0.5, 42), random_matrix(9, 9, 0.5, 43));
    EXPECT_THROW(random_matrix(2, 2, 1.5, 0), Error);
}

TEST(BooleanMatrix, TextRoundTrip) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = random_matrix(1 + seed, 1 + 11 * seed, 0.3, seed);
        const auto text = a.to_text();
        EXPECT_EQ(BooleanMatrix::from_text(text), a);
        EXPECT_EQ(BooleanMatrix::from_text(text).to_text(), text);
    }
}

TEST(BooleanMatrix, ParseErrors) {
    for (const char* bad : {"", "2 2\n01\n", "2 2\n01\n1x\n", "2 2\n011\n10\n", "0 3\n", "2 2\n01\n10\n11\n", "2 2 2\n01\n10\n",
                            "2 2\n01 \n10\n"}) {
        try {
            BooleanMatrix::from_text(bad);
            ADD_FAILURE() << "accepted: " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
        }
    }
    // Missing final newline is tolerated.
    EXPECT_EQ(BooleanMatrix::from_text("1 2\n10"), BooleanMatrix::from_text("1 2\n10\n"));
}

TEST(BooleanMatrix, Transpose) {
    const auto a = random_matrix(13, 71, 0.3, 5);
    const auto t = a.transpose();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) ASSERT_EQ(a.get(i, j), t.get(j, i));
}

TEST(PairIndexer, BijectionAndMonotone) {
    for (std::uint64_t m = 2; m <= 100; ++m) {
        const PairIndexer idx(m);
        ASSERT_EQ(idx.size(), m * (m - 1) / 2);
        std::uint64_t expected = 0;
        for (std::uint64_t i = 0; i < m; ++i) {
            for (std::uint64_t j = i + 1; j < m; ++j) {
                ASSERT_EQ(idx.rank(i, j), expected);
                ASSERT_EQ(idx.unrank(expected), std::make_pair(i, j));
                ++expected;
            }
        }
    }
}

TEST(PairIndexer, LargeGroundSet) {
    const PairIndexer idx(1331);
    EXPECT_EQ(idx.size(), 885'115u);
    EXPECT_EQ(idx.unrank(idx.size() - 1), (std::pair<std::uint64_t, std::uint64_t>{1329, 1330}));
    EXPECT_EQ(idx.rank(1330, 7), idx.rank(7, 1330));
    EXPECT_THROW(idx.rank(3, 3), Error);
    EXPECT_THROW(idx.unrank(idx.size()), Error);
}

} // namespace
} // namespace rectifier
