#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bool_matrix.hpp"
#include "error.hpp"
#include "finfield.hpp"
#include "rectangles.hpp"

namespace rectifier {

/// Number of z in F_p^3 with z_0^2 + z_1^2 + z_2^2 = delta (mod p).
inline std::uint64_t sphere_size(std::uint64_t p, std::uint64_t delta) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = 0; b < p; ++b)
            for (std::uint64_t c = 0; c < p; ++c)
                if ((a * a + b * b + c * c) % p == delta % p) ++count;
    return count;
}

struct BrownMatrix {
    BooleanMatrix matrix;
    std::uint64_t delta = 0;
    std::uint64_t sphere = 0;
};

namespace detail {

inline BooleanMatrix distance_graph(std::uint64_t p, std::uint64_t delta) {
    // Difference vectors z with |z|^2 = delta.
    std::vector<std::array<std::uint64_t, 3>> sphere;
    for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = 0; b < p; ++b)
            for (std::uint64_t c = 0; c < p; ++c)
                if ((a * a + b * b + c * c) % p == delta) sphere.push_back({a, b, c});
    const std::uint64_t m = p * p * p;
    BooleanMatrix out(m, m);
    for (std::uint64_t x = 0; x < m; ++x) {
        const std::uint64_t x0 = x / (p * p), x1 = x / p % p, x2 = x % p;
        for (const auto& z : sphere) {
            // y = x - z componentwise
            const std::uint64_t y = ((x0 + p - z[0]) % p) * p * p + ((x1 + p - z[1]) % p) * p + (x2 + p - z[2]) % p;
            out.set(x, y);
        }
    }
    return out;
}

} // namespace detail

/// Distance graph on F_p^3: A[x, y] = 1 iff sum_i (x_i - y_i)^2 = delta (mod p),
/// with vectors ordered lexicographically (x_0 most significant).
///
/// Without an explicit delta, candidates are tried in order of decreasing
/// sphere size (ties by smaller delta) and the first whose matrix passes an
/// exhaustive 3-freeness search is returned.
inline BrownMatrix brown_matrix(std::uint64_t p, std::optional<std::uint64_t> delta = std::nullopt,
                                SearchBudget budget = {}) {
    if (p == 2 || !is_prime(p)) fail(ErrorCode::CompositeP, std::to_string(p) + " is not an odd prime");
    if (p * p * p > (std::uint64_t{1} << 20)) fail(ErrorCode::InvalidArgument, "p^3 exceeds 2^20");
    if (delta) {
        if (*delta % p == 0) fail(ErrorCode::InvalidArgument, "delta must be a nonzero residue");
        const std::uint64_t d = *delta % p;
        return {detail::distance_graph(p, d), d, sphere_size(p, d)};
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> order; // (sphere size, delta)
    for (std::uint64_t d = 1; d < p; ++d) order.emplace_back(sphere_size(p, d), d);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [size, d] : order) {
        BooleanMatrix m = detail::distance_graph(p, d);
        if (is_k_free(m, 3, budget).free) return {std::move(m), d, size};
    }
    fail(ErrorCode::NoFreeDeltaFound, "no delta gives a 3-free distance graph for p = " + std::to_string(p));
}

/// Norm matrix over F_{q^t}: A[x, y] = 1 iff N(x + y) = 1, elements in
/// coefficient-lexicographic order.
inline BooleanMatrix norm_matrix(std::uint64_t q, unsigned t) {
    if (!is_prime(q)) fail(ErrorCode::CompositeQ, std::to_string(q) + " is not prime");
    if (t < 2) fail(ErrorCode::InvalidArgument, "norm matrix needs t >= 2");
    std::uint64_t order = 1;
    for (unsigned i = 0; i < t; ++i) {
        order *= q;
        if (order > (1u << 12)) fail(ErrorCode::OrderTooLarge, "q^t exceeds 2^12");
    }
    const FiniteField field = make_field(q, t);
    const std::uint64_t m = field.order();
    std::vector<FieldElement> elements;
    elements.reserve(m);
    std::vector<std::uint64_t> unit_norm;
    for (std::uint64_t i = 0; i < m; ++i) {
        elements.push_back(field.element_at(i));
        if (field.norm(elements.back()) == 1) unit_norm.push_back(i);
    }
    BooleanMatrix out(m, m);
    for (std::uint64_t x = 0; x < m; ++x) {
        const FieldElement minus_x = field.neg(elements[x]);
        for (auto u : unit_norm) out.set(x, field.index_of(field.add(elements[u], minus_x)));
    }
    return out;
}

enum class TransformMode { Materialize, StatsOnly };

/// B[rank{i1, i2}, rank{j1, j2}] = 1 iff rows {i1, i2} x columns {j1, j2} of A are all ones.
inline BooleanMatrix pair_transform(const BooleanMatrix& a) {
    if (!a.square()) fail(ErrorCode::NonSquareInput, "pair transform needs a square matrix");
    if (a.rows() < 2) fail(ErrorCode::InvalidArgument, "pair transform needs m >= 2");
    const PairIndexer pairs(a.rows());
    if (pairs.size() > (std::uint64_t{1} << 16))
        fail(ErrorCode::MaterializeTooLarge, "C(m,2) = " + std::to_string(pairs.size()) + " exceeds 2^16");
    BooleanMatrix b(pairs.size(), pairs.size());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        const auto r1 = a.row(i1);
        for (std::size_t i2 = i1 + 1; i2 < a.rows(); ++i2) {
            const auto r2 = a.row(i2);
            std::vector<std::uint32_t> cols;
            for (std::size_t w = 0; w < a.words_per_row(); ++w)
                for (std::uint64_t bits = r1[w] & r2[w]; bits != 0; bits &= bits - 1)
                    cols.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
            const std::uint64_t row = pairs.rank(i1, i2);
            for (std::size_t x = 0; x < cols.size(); ++x)
                for (std::size_t y = x + 1; y < cols.size(); ++y) b.set(row, pairs.rank(cols[x], cols[y]));
        }
    }
    return b;
}

inline std::variant<BooleanMatrix, RectangleStats> pair_transform(const BooleanMatrix& a, TransformMode mode) {
    if (!a.square()) fail(ErrorCode::NonSquareInput, "pair transform needs a square matrix");
    if (mode == TransformMode::StatsOnly) return count_2_rectangles(a);
    return pair_transform(a);
}

/// Entry B[b, a] of the pair transform without materializing B.
inline bool pair_transform_entry(const BooleanMatrix& a, const PairIndexer& pairs, std::uint64_t row, std::uint64_t col) {
    const auto [i1, i2] = pairs.unrank(row);
    const auto [j1, j2] = pairs.unrank(col);
    return a.get(i1, j1) && a.get(i1, j2) && a.get(i2, j1) && a.get(i2, j2);
}

} // namespace rectifier
