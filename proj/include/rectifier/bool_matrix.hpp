#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace rectifier {

/// Dense row-major 0/1 matrix, each row packed into 64-bit words.
/// Padding bits past the last column are always zero; every mutating
/// operation preserves that, so word-level popcounts are exact.
class BooleanMatrix {
public:
    BooleanMatrix() = default;

    BooleanMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_(words_for(cols)), bits_(rows * words_for(cols), 0) {
        if (rows == 0 || cols == 0) fail(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
    }

    static BooleanMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static BooleanMatrix ones(std::size_t rows, std::size_t cols) {
        BooleanMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) m.fill_row(i);
        return m;
    }

    static BooleanMatrix identity(std::size_t n) {
        BooleanMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t words_per_row() const noexcept { return words_; }
    bool square() const noexcept { return rows_ == cols_; }

    bool get(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1; }

    void set(std::size_t i, std::size_t j, bool value = true) {
        std::uint64_t& w = bits_[i * words_ + j / 64];
        const std::uint64_t mask = std::uint64_t{1} << (j % 64);
        w = value ? (w | mask) : (w & ~mask);
    }

    std::span<const std::uint64_t> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }
    std::span<std::uint64_t> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }

    std::size_t row_weight(std::size_t i) const {
        std::size_t w = 0;
        for (auto word : row(i)) w += std::popcount(word);
        return w;
    }

    std::uint64_t weight() const {
        std::uint64_t w = 0;
        for (auto word : bits_) w += std::popcount(word);
        return w;
    }

    /// Column indices of the ones in row i, ascending.
    std::vector<std::uint32_t> row_support(std::size_t i) const {
        std::vector<std::uint32_t> out;
        auto r = row(i);
        for (std::size_t w = 0; w < words_; ++w) {
            for (std::uint64_t word = r[w]; word != 0; word &= word - 1) {
                out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(word)));
            }
        }
        return out;
    }

    BooleanMatrix complement() const {
        BooleanMatrix out = *this;
        for (auto& word : out.bits_) word = ~word;
        out.clear_padding();
        return out;
    }

    BooleanMatrix transpose() const {
        BooleanMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (auto j : row_support(i)) out.set(j, i);
        }
        return out;
    }

    bool symmetric() const {
        if (!square()) return false;
        return transpose() == *this;
    }

    friend bool operator==(const BooleanMatrix&, const BooleanMatrix&) = default;

    /// Text format: "<rows> <cols>\n" then one line of '0'/'1' characters per row.
    std::string to_text() const {
        std::string out = std::to_string(rows_) + " " + std::to_string(cols_) + "\n";
        out.reserve(out.size() + rows_ * (cols_ + 1));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out.push_back(get(i, j) ? '1' : '0');
            out.push_back('\n');
        }
        return out;
    }

    static BooleanMatrix from_text(std::string_view text) {
        auto next_line = [&text](std::string_view& line) {
            if (text.empty()) return false;
            const auto nl = text.find('\n');
            if (nl == std::string_view::npos) {
                line = text;
                text = {};
            } else {
                line = text.substr(0, nl);
                text.remove_prefix(nl + 1);
            }
            return true;
        };
        std::string_view header;
        if (!next_line(header)) fail(ErrorCode::ParseError, "empty matrix file");
        std::size_t rows = 0, cols = 0;
        {
            std::istringstream in{std::string(header)};
            std::string extra;
            if (!(in >> rows >> cols) || (in >> extra) || rows == 0 || cols == 0)
                fail(ErrorCode::ParseError, "bad matrix header '" + std::string(header) + "'");
        }
        BooleanMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            std::string_view line;
            if (!next_line(line)) fail(ErrorCode::ParseError, "matrix file ends after " + std::to_string(i) + " rows");
            if (line.size() != cols)
                fail(ErrorCode::ParseError, "row " + std::to_string(i) + " has " + std::to_string(line.size()) + " characters, expected " + std::to_string(cols));
            for (std::size_t j = 0; j < cols; ++j) {
                if (line[j] == '1') {
                    m.set(i, j);
                } else if (line[j] != '0') {
                    fail(ErrorCode::ParseError, "invalid character in row " + std::to_string(i));
                }
            }
        }
        if (!text.empty()) fail(ErrorCode::ParseError, "trailing data after matrix rows");
        return m;
    }

    static BooleanMatrix load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_text(buf.str());
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
        out << to_text();
    }

private:
    static std::size_t words_for(std::size_t cols) { return (cols + 63) / 64; }

    void fill_row(std::size_t i) {
        for (auto& word : row(i)) word = ~std::uint64_t{0};
        clear_padding_row(i);
    }

    void clear_padding_row(std::size_t i) {
        if (cols_ % 64 != 0) row(i)[words_ - 1] &= (std::uint64_t{1} << (cols_ % 64)) - 1;
    }

    void clear_padding() {
        for (std::size_t i = 0; i < rows_; ++i) clear_padding_row(i);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

inline BooleanMatrix random_matrix(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) fail(ErrorCode::InvalidArgument, "density must lie in [0, 1]");
    Rng rng(seed);
    BooleanMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (rng.bernoulli(density)) m.set(i, j);
    return m;
}

/// Lexicographic ranking of 2-subsets {i < j} of {0, ..., m-1}.
class PairIndexer {
public:
    explicit PairIndexer(std::uint64_t m) : m_(m) {
        if (m < 2) fail(ErrorCode::InvalidArgument, "pair indexer needs m >= 2");
    }

    std::uint64_t ground() const noexcept { return m_; }
    std::uint64_t size() const noexcept { return m_ * (m_ - 1) / 2; }

    /// Index of the first pair whose smaller element is i.
    std::uint64_t offset(std::uint64_t i) const noexcept { return i * (2 * m_ - i - 1) / 2; }

    std::uint64_t rank(std::uint64_t i, std::uint64_t j) const {
        if (i > j) std::swap(i, j);
        if (i == j || j >= m_) fail(ErrorCode::InvalidArgument, "not a 2-subset of the ground set");
        return offset(i) + (j - i - 1);
    }

    std::pair<std::uint64_t, std::uint64_t> unrank(std::uint64_t r) const {
        if (r >= size()) fail(ErrorCode::InvalidArgument, "pair rank out of range");
        // Largest i with offset(i) <= r; offset is increasing on [0, m-1).
        std::uint64_t lo = 0, hi = m_ - 2;
        while (lo < hi) {
            const std::uint64_t mid = (lo + hi + 1) / 2;
            if (offset(mid) <= r) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        return {lo, lo + 1 + (r - offset(lo))};
    }

private:
    std::uint64_t m_;
};

/// C(n, 2) without overflow concerns for n < 2^32.
constexpr std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

} // namespace rectifier
