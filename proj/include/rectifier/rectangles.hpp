#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bool_matrix.hpp"
#include "error.hpp"
#include "random.hpp"

namespace rectifier {

namespace detail {

inline constexpr std::uint64_t kCountLimit = std::uint64_t{1} << 63;

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r) || r >= kCountLimit) fail(ErrorCode::CountOverflow, "count exceeds 2^63");
    return r;
}

inline std::uint64_t checked_choose2(std::uint64_t n) {
    if (n < 2) return 0;
    const unsigned __int128 r = static_cast<unsigned __int128>(n) * (n - 1) / 2;
    if (r >= kCountLimit) fail(ErrorCode::CountOverflow, "binomial exceeds 2^63");
    return static_cast<std::uint64_t>(r);
}

} // namespace detail

/// Rows and columns of an all-ones submatrix, both sorted ascending.
struct RectangleWitness {
    std::vector<std::uint32_t> rows;
    std::vector<std::uint32_t> cols;

    friend bool operator==(const RectangleWitness&, const RectangleWitness&) = default;
};

inline bool witness_holds(const BooleanMatrix& a, const RectangleWitness& w) {
    for (auto i : w.rows) {
        if (i >= a.rows()) return false;
        for (auto j : w.cols) {
            if (j >= a.cols() || !a.get(i, j)) return false;
        }
    }
    return true;
}

/// Covering statistics of a matrix: a row covers the column pair u when it
/// has ones in both columns; b_u counts the rows covering u.
struct RectangleStats {
    std::uint64_t sigma = 0;          // sum_i C(a_i, 2) = sum_u b_u
    std::uint64_t two_rectangles = 0; // sum_u C(b_u, 2)
    std::vector<std::uint64_t> row_weights;
    /// (pair rank, b_u) for every column pair with b_u > 0, ascending by rank.
    std::optional<std::vector<std::pair<std::uint64_t, std::uint64_t>>> pair_cover_counts;
};

/// Exact sigma and 2-rectangle count by accumulating, row by row, every
/// column pair the row covers.
inline RectangleStats count_2_rectangles(const BooleanMatrix& a, bool keep_pair_counts = false) {
    RectangleStats stats;
    stats.row_weights.resize(a.rows());
    if (a.cols() < 2) {
        for (std::size_t i = 0; i < a.rows(); ++i) stats.row_weights[i] = a.row_weight(i);
        if (keep_pair_counts) stats.pair_cover_counts.emplace();
        return stats;
    }
    const PairIndexer pairs(a.cols());
    constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 28;
    const bool dense = pairs.size() <= kDenseLimit;
    std::vector<std::uint32_t> dense_counts(dense ? pairs.size() : 0, 0);
    std::unordered_map<std::uint64_t, std::uint64_t> sparse_counts;

    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto support = a.row_support(i);
        stats.row_weights[i] = support.size();
        stats.sigma = detail::checked_add(stats.sigma, detail::checked_choose2(support.size()));
        for (std::size_t x = 0; x < support.size(); ++x) {
            const std::uint64_t base = pairs.offset(support[x]) - support[x] - 1;
            for (std::size_t y = x + 1; y < support.size(); ++y) {
                const std::uint64_t u = base + support[y];
                if (dense) {
                    ++dense_counts[u];
                } else {
                    ++sparse_counts[u];
                }
            }
        }
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> kept;
    auto visit = [&](std::uint64_t u, std::uint64_t b) {
        stats.two_rectangles = detail::checked_add(stats.two_rectangles, detail::checked_choose2(b));
        if (keep_pair_counts) kept.emplace_back(u, b);
    };
    if (dense) {
        for (std::uint64_t u = 0; u < dense_counts.size(); ++u)
            if (dense_counts[u] != 0) visit(u, dense_counts[u]);
    } else {
        for (const auto& [u, b] : sparse_counts) visit(u, b);
        std::sort(kept.begin(), kept.end());
    }
    if (keep_pair_counts) stats.pair_cover_counts = std::move(kept);
    return stats;
}

struct KFreeResult {
    bool free = true;
    std::optional<RectangleWitness> witness;
    std::uint64_t nodes = 0;
};

struct SearchBudget {
    std::uint64_t max_nodes = std::uint64_t{1} << 40;
};

namespace detail {

class KFreeSearch {
public:
    KFreeSearch(const BooleanMatrix& a, std::size_t k, SearchBudget budget)
        : a_(a), columns_(a.transpose()), k_(k), budget_(budget), row_words_((a.rows() + 63) / 64) {}

    KFreeResult run() {
        KFreeResult result;
        // Root candidates: rows with at least k ones.
        std::vector<std::uint64_t> cand(row_words_, 0);
        for (std::size_t i = 0; i < a_.rows(); ++i)
            if (a_.row_weight(i) >= k_) cand[i / 64] |= std::uint64_t{1} << (i % 64);
        std::vector<std::uint64_t> all(a_.words_per_row(), ~std::uint64_t{0});
        chosen_.clear();
        found_ = false;
        expand(all, cand);
        result.nodes = nodes_;
        if (found_) {
            result.free = false;
            result.witness = std::move(witness_);
        }
        return result;
    }

private:
    static std::size_t popcount(std::span<const std::uint64_t> v) {
        std::size_t c = 0;
        for (auto w : v) c += std::popcount(w);
        return c;
    }

    // Rows r' in `cand` with r' > r and at least k ones inside `common`.
    std::vector<std::uint64_t> next_candidates(const std::vector<std::uint64_t>& cand, std::size_t r,
                                               const std::vector<std::uint64_t>& common, std::size_t common_count) {
        std::vector<std::uint64_t> out(row_words_, 0);
        std::size_t remaining = 0;
        for (std::size_t w = (r + 1) / 64; w < row_words_; ++w) {
            std::uint64_t word = cand[w];
            if (w == (r + 1) / 64) word &= ~std::uint64_t{0} << ((r + 1) % 64);
            out[w] = word;
            remaining += std::popcount(word);
        }
        if (remaining == 0) return out;

        const std::size_t row_cost = remaining * a_.words_per_row();
        const std::size_t column_cost = common_count * k_ * row_words_;
        if (row_cost <= column_cost) {
            for (std::size_t w = 0; w < row_words_; ++w) {
                for (std::uint64_t word = out[w]; word != 0; word &= word - 1) {
                    const std::size_t r2 = w * 64 + std::countr_zero(word);
                    auto row = a_.row(r2);
                    std::size_t c = 0;
                    for (std::size_t x = 0; x < row.size() && c < k_; ++x) c += std::popcount(row[x] & common[x]);
                    if (c < k_) out[w] &= ~(std::uint64_t{1} << (r2 % 64));
                }
            }
            return out;
        }
        // Bit-sliced threshold counting over the columns in `common`:
        // at_least[c] holds the rows having >= c ones among the columns seen so far.
        std::vector<std::vector<std::uint64_t>> at_least(k_ + 1, std::vector<std::uint64_t>(row_words_, 0));
        for (std::size_t w = 0; w < common.size(); ++w) {
            for (std::uint64_t word = common[w]; word != 0; word &= word - 1) {
                const std::size_t col = w * 64 + std::countr_zero(word);
                auto colbits = columns_.row(col);
                for (std::size_t c = k_; c >= 2; --c)
                    for (std::size_t x = 0; x < row_words_; ++x) at_least[c][x] |= at_least[c - 1][x] & colbits[x];
                for (std::size_t x = 0; x < row_words_; ++x) at_least[1][x] |= colbits[x];
            }
        }
        for (std::size_t x = 0; x < row_words_; ++x) out[x] &= at_least[k_][x];
        return out;
    }

    void expand(const std::vector<std::uint64_t>& common, const std::vector<std::uint64_t>& cand) {
        const std::size_t need = k_ - chosen_.size();
        if (popcount(cand) < need) return;
        std::vector<std::uint64_t> next(common.size());
        for (std::size_t w = 0; w < row_words_ && !found_; ++w) {
            for (std::uint64_t word = cand[w]; word != 0 && !found_; word &= word - 1) {
                const std::size_t r = w * 64 + std::countr_zero(word);
                if (++nodes_ > budget_.max_nodes)
                    fail(ErrorCode::BudgetExceeded, "k-free search exceeded " + std::to_string(budget_.max_nodes) + " nodes");
                auto row = a_.row(r);
                std::size_t count = 0;
                for (std::size_t x = 0; x < next.size(); ++x) {
                    next[x] = common[x] & row[x];
                    count += std::popcount(next[x]);
                }
                if (count < k_) continue;
                chosen_.push_back(static_cast<std::uint32_t>(r));
                if (chosen_.size() == k_) {
                    found_ = true;
                    witness_.rows = chosen_;
                    witness_.cols.clear();
                    for (std::size_t x = 0; x < next.size() && witness_.cols.size() < k_; ++x)
                        for (std::uint64_t bits = next[x]; bits != 0 && witness_.cols.size() < k_; bits &= bits - 1)
                            witness_.cols.push_back(static_cast<std::uint32_t>(x * 64 + std::countr_zero(bits)));
                    return;
                }
                const auto sub = next_candidates(cand, r, next, count);
                expand(next, sub);
                chosen_.pop_back();
            }
        }
    }

    const BooleanMatrix& a_;
    BooleanMatrix columns_;
    std::size_t k_;
    SearchBudget budget_;
    std::size_t row_words_;
    std::vector<std::uint32_t> chosen_;
    std::uint64_t nodes_ = 0;
    bool found_ = false;
    RectangleWitness witness_;
};

} // namespace detail

/// Searches for a k x k all-ones submatrix.
///
/// Depth-first over increasing row tuples, carrying the AND of the chosen
/// rows; a row is only a candidate while it still shares at least k ones
/// with that intersection. The first witness found is the lexicographically
/// smallest row tuple, paired with the first k columns of its intersection.
/// Exceeding the node budget raises BudgetExceeded rather than guessing.
inline KFreeResult is_k_free(const BooleanMatrix& a, std::size_t k, SearchBudget budget = {}) {
    if (k < 2) fail(ErrorCode::InvalidArgument, "k must be at least 2");
    if (k > a.rows() || k > a.cols()) return {};
    return detail::KFreeSearch(a, k, budget).run();
}

/// Smallest K >= 2 for which `a` is K-free.
inline std::size_t smallest_free_k(const BooleanMatrix& a, SearchBudget budget = {}) {
    std::size_t k = 2;
    while (!is_k_free(a, k, budget).free) ++k;
    return k;
}

/// Random matrix with the given density, then repeatedly clears one random
/// cell of the first k-rectangle found until none remains.
inline BooleanMatrix random_k_free(std::size_t rows, std::size_t cols, double density, std::size_t k, std::uint64_t seed) {
    BooleanMatrix m = random_matrix(rows, cols, density, seed);
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    while (true) {
        const auto res = is_k_free(m, k);
        if (res.free) return m;
        const auto& w = *res.witness;
        m.set(w.rows[rng.below(w.rows.size())], w.cols[rng.below(w.cols.size())], false);
    }
}

} // namespace rectifier
