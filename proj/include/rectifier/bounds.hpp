#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bool_matrix.hpp"
#include "error.hpp"
#include "rectangles.hpp"

namespace rectifier {

/// Raised when a freeness precondition fails; carries the rectangle found.
class NotKFreeError : public Error {
public:
    NotKFreeError(std::size_t k, RectangleWitness witness)
        : Error(ErrorCode::NotKFree, "matrix contains a " + std::to_string(k) + "-rectangle"), witness_(std::move(witness)) {}

    const RectangleWitness& witness() const noexcept { return witness_; }

private:
    RectangleWitness witness_;
};

// ---------------------------------------------------------------------------
// Nechiporuk: a K-free matrix needs at least |A| / K^2 edges in any OR-circuit;
// for K = 2 the trivial circuit is optimal, so OR(A) = |A|.

struct LowerBoundCertificate {
    std::uint64_t K = 0;
    std::uint64_t weight = 0;
    std::uint64_t bound = 0;
    bool freeness_verified = false;
    bool exact_for_2free = false;
    std::optional<std::uint64_t> exact_or;
};

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return a / b + (a % b != 0); }

inline LowerBoundCertificate nechiporuk_lower(const BooleanMatrix& a, std::uint64_t K, SearchBudget budget = {}) {
    if (K < 2) fail(ErrorCode::InvalidArgument, "K must be at least 2");
    const auto free = is_k_free(a, K, budget);
    if (!free.free) throw NotKFreeError(K, *free.witness);
    LowerBoundCertificate cert;
    cert.K = K;
    cert.weight = a.weight();
    cert.bound = ceil_div(cert.weight, K * K);
    cert.freeness_verified = true;
    if (K == 2) {
        cert.exact_for_2free = true;
        cert.exact_or = cert.weight;
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Exact depth-2 complexity as a minimum-cost cover of the one-entries.
// A middle node with in-neighbours S and out-neighbours T realizes S x T at
// cost |S| + |T|; a direct wire covers one entry at cost 1. Rectangles with a
// side of size 1 never beat wires, so only sides >= 2 are candidates.

struct CoverRectangle {
    std::vector<std::uint32_t> rows;
    std::vector<std::uint32_t> cols;

    friend bool operator==(const CoverRectangle&, const CoverRectangle&) = default;
};

struct Depth2Cover {
    std::vector<CoverRectangle> rectangles;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> direct_wires; // (row, col)

    std::uint64_t cost() const {
        std::uint64_t c = direct_wires.size();
        for (const auto& r : rectangles) c += r.rows.size() + r.cols.size();
        return c;
    }
};

/// True iff every rectangle and wire sits on ones and together they cover every one.
inline bool cover_is_valid(const BooleanMatrix& a, const Depth2Cover& cover) {
    BooleanMatrix covered(a.rows(), a.cols());
    for (const auto& r : cover.rectangles) {
        for (auto i : r.rows)
            for (auto j : r.cols) {
                if (i >= a.rows() || j >= a.cols() || !a.get(i, j)) return false;
                covered.set(i, j);
            }
    }
    for (const auto& [i, j] : cover.direct_wires) {
        if (i >= a.rows() || j >= a.cols() || !a.get(i, j)) return false;
        covered.set(i, j);
    }
    return covered == a;
}

struct Or2Result {
    std::uint64_t cost = 0;
    Depth2Cover cover;
    bool optimal = true;
    std::uint64_t nodes = 0;
};

namespace detail {

class Or2Solver {
public:
    Or2Solver(const BooleanMatrix& a, std::uint64_t node_budget) : a_(a), budget_(node_budget) {
        for (std::uint32_t i = 0; i < a.rows(); ++i)
            for (auto j : a.row_support(i)) {
                cell_index_[key(i, j)] = static_cast<std::uint32_t>(cells_.size());
                cells_.push_back({i, j});
            }
        if (cells_.size() > 64) fail(ErrorCode::InvalidArgument, "exact depth-2 solver handles at most 64 one-entries");
        enumerate_rectangles();
        // Cheapest possible cost per covered cell, as a fraction num/den.
        ratio_num_ = 1;
        ratio_den_ = 1;
        for (const auto& c : candidates_) {
            const std::uint64_t num = c.cost, den = std::popcount(c.mask);
            if (num * ratio_den_ < ratio_num_ * den) {
                ratio_num_ = num;
                ratio_den_ = den;
            }
        }
        by_cell_.resize(cells_.size());
        for (std::uint32_t r = 0; r < candidates_.size(); ++r)
            for (std::uint64_t m = candidates_[r].mask; m != 0; m &= m - 1) by_cell_[std::countr_zero(m)].push_back(r);
        for (auto& list : by_cell_) {
            std::stable_sort(list.begin(), list.end(), [this](std::uint32_t x, std::uint32_t y) {
                return std::popcount(candidates_[x].mask) > std::popcount(candidates_[y].mask);
            });
        }
    }

    Or2Result solve() {
        full_ = cells_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells_.size()) - 1;
        best_cost_ = cells_.size();
        best_choice_.clear();
        chosen_.clear();
        bool complete = true;
        try {
            search(0, 0);
        } catch (const BudgetHit&) {
            complete = false;
        }
        Or2Result result;
        result.optimal = complete;
        result.nodes = nodes_;
        std::uint64_t covered = 0;
        for (auto r : best_choice_) {
            const auto& c = candidates_[r];
            result.cover.rectangles.push_back({c.rows, c.cols});
            covered |= c.mask;
        }
        for (std::size_t x = 0; x < cells_.size(); ++x)
            if (!((covered >> x) & 1)) result.cover.direct_wires.push_back(cells_[x]);
        result.cost = result.cover.cost();
        return result;
    }

private:
    struct BudgetHit {};
    struct Candidate {
        std::vector<std::uint32_t> rows;
        std::vector<std::uint32_t> cols;
        std::uint64_t mask = 0;
        std::uint64_t cost = 0;
    };

    std::uint64_t key(std::uint64_t i, std::uint64_t j) const { return i * a_.cols() + j; }

    void enumerate_rectangles() {
        std::vector<std::uint32_t> rows;
        std::vector<std::uint64_t> all(a_.words_per_row(), ~std::uint64_t{0});
        grow_rows(0, rows, all);
    }

    // Row sets in increasing order; keep extending while >= 2 common columns remain.
    void grow_rows(std::uint32_t from, std::vector<std::uint32_t>& rows, const std::vector<std::uint64_t>& common) {
        for (std::uint32_t r = from; r < a_.rows(); ++r) {
            std::vector<std::uint64_t> next(common.size());
            std::size_t count = 0;
            auto row = a_.row(r);
            for (std::size_t w = 0; w < next.size(); ++w) {
                next[w] = common[w] & row[w];
                count += std::popcount(next[w]);
            }
            if (count < 2) continue;
            rows.push_back(r);
            if (rows.size() >= 2) add_column_subsets(rows, next);
            grow_rows(r + 1, rows, next);
            rows.pop_back();
        }
    }

    void add_column_subsets(const std::vector<std::uint32_t>& rows, const std::vector<std::uint64_t>& common) {
        std::vector<std::uint32_t> cols;
        for (std::size_t w = 0; w < common.size(); ++w)
            for (std::uint64_t bits = common[w]; bits != 0; bits &= bits - 1)
                cols.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
        if (cols.size() > 24) fail(ErrorCode::InvalidArgument, "too many rectangle candidates for the exact solver");
        for (std::uint32_t sub = 0; sub < (1u << cols.size()); ++sub) {
            if (std::popcount(sub) < 2) continue;
            Candidate c;
            c.rows = rows;
            for (std::size_t x = 0; x < cols.size(); ++x)
                if ((sub >> x) & 1) c.cols.push_back(cols[x]);
            for (auto i : c.rows)
                for (auto j : c.cols) c.mask |= std::uint64_t{1} << cell_index_.at(key(i, j));
            c.cost = c.rows.size() + c.cols.size();
            candidates_.push_back(std::move(c));
            if (candidates_.size() > (1u << 22)) fail(ErrorCode::InvalidArgument, "too many rectangle candidates for the exact solver");
        }
    }

    std::uint64_t lower_bound(std::uint64_t covered) const {
        const std::uint64_t remaining = std::popcount(full_ & ~covered);
        return ceil_div(remaining * ratio_num_, ratio_den_);
    }

    void search(std::uint64_t covered, std::uint64_t cost) {
        if (++nodes_ > budget_) throw BudgetHit{};
        if (covered == full_) {
            if (cost < best_cost_) {
                best_cost_ = cost;
                best_choice_ = chosen_;
            }
            return;
        }
        if (cost + lower_bound(covered) >= best_cost_) return;
        if (auto it = seen_.find(covered); it != seen_.end() && it->second <= cost) return;
        seen_[covered] = cost;

        const int cell = std::countr_zero(~covered & full_);
        for (auto r : by_cell_[cell]) {
            chosen_.push_back(r);
            search(covered | candidates_[r].mask, cost + candidates_[r].cost);
            chosen_.pop_back();
        }
        // Direct wire for this cell; its record is implicit (uncovered cells become wires).
        search(covered | (std::uint64_t{1} << cell), cost + 1);
    }

    const BooleanMatrix& a_;
    std::uint64_t budget_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cells_;
    std::unordered_map<std::uint64_t, std::uint32_t> cell_index_;
    std::vector<Candidate> candidates_;
    std::vector<std::vector<std::uint32_t>> by_cell_;
    std::uint64_t ratio_num_ = 1, ratio_den_ = 1;
    std::uint64_t full_ = 0;
    std::uint64_t best_cost_ = 0;
    std::vector<std::uint32_t> best_choice_;
    std::vector<std::uint32_t> chosen_;
    std::unordered_map<std::uint64_t, std::uint64_t> seen_;
    std::uint64_t nodes_ = 0;
};

} // namespace detail

/// Minimum number of edges over all depth-<=2 OR-circuits for A, with an
/// optimal cover. On budget exhaustion the best cover found so far is
/// returned with optimal = false.
inline Or2Result exact_or2(const BooleanMatrix& a, std::uint64_t node_budget = std::uint64_t{1} << 24) {
    return detail::Or2Solver(a, node_budget).solve();
}

// ---------------------------------------------------------------------------
// Rectangle-count inequalities for an n x n matrix, every comparison cleared of
// denominators and evaluated in 128-bit integers.

struct Lemma1Certificate {
    std::uint64_t n = 0;
    std::uint64_t weight = 0;
    std::uint64_t sigma = 0;
    std::uint64_t two_rectangles = 0;
    bool sigma_convexity = false; // sigma >= |A|^2/(2n) - |A|/2
    bool count_convexity = false; // count >= sigma^2/(n(n-1)) - sigma/2
    bool precondition = false;    // |A| >= 2 n^{3/2}
    std::optional<bool> sigma_quarter; // sigma >= |A|^2/(4n), when the precondition holds
    std::optional<bool> count_half;    // count >= sigma^2/(2n^2), when the precondition holds

    bool all_hold() const {
        return sigma_convexity && count_convexity && sigma_quarter.value_or(true) && count_half.value_or(true);
    }
};

inline Lemma1Certificate lemma1_from_counts(std::uint64_t n, std::uint64_t weight, std::uint64_t sigma,
                                            std::uint64_t two_rectangles) {
    using i128 = __int128;
    Lemma1Certificate cert{n, weight, sigma, two_rectangles};
    const i128 N = n, W = weight, S = sigma, T = two_rectangles;
    cert.sigma_convexity = 2 * N * S >= W * W - N * W;
    cert.count_convexity = 2 * N * (N - 1) * T >= 2 * S * S - N * (N - 1) * S;
    cert.precondition = W * W >= 4 * N * N * N;
    if (cert.precondition) {
        cert.sigma_quarter = 4 * N * S >= W * W;
        cert.count_half = 2 * N * N * T >= S * S;
    }
    return cert;
}

inline Lemma1Certificate lemma1_certificate(const BooleanMatrix& a) {
    if (!a.square()) fail(ErrorCode::NonSquareInput, "rectangle-count certificate needs a square matrix");
    const auto stats = count_2_rectangles(a);
    return lemma1_from_counts(a.rows(), a.weight(), stats.sigma, stats.two_rectangles);
}

} // namespace rectifier
