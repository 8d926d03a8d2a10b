#pragma once

// Desk-scale separation tables: for each construction A, the matrix C = B-bar
// (B the pair transform of A) gets the depth-3 circuit as an upper bound on
// OR(C), while C-bar = B gets a Nechiporuk lower bound.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bool_matrix.hpp"
#include "bounds.hpp"
#include "circuit.hpp"
#include "constructions.hpp"
#include "rectangles.hpp"

namespace rectifier {

enum class Family { Brown, Norm };

inline const char* family_name(Family f) { return f == Family::Brown ? "brown" : "norm"; }

struct ReportParam {
    Family family = Family::Brown;
    std::uint64_t p = 0; // brown
    std::uint64_t q = 0; // norm
    unsigned t = 0;      // norm
    std::optional<std::uint64_t> delta;

    static ReportParam brown(std::uint64_t p) { return {Family::Brown, p, 0, 0, std::nullopt}; }
    static ReportParam norm(std::uint64_t q, unsigned t) { return {Family::Norm, 0, q, t, std::nullopt}; }

    std::string label() const {
        if (family == Family::Brown) return "p=" + std::to_string(p);
        return "q=" + std::to_string(q) + ":t=" + std::to_string(t);
    }
};

struct ReportOptions {
    std::uint64_t direct_check_limit = 10'000; // verify B directly when n <= this
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 1;
    SearchBudget budget{};
};

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational reduced(std::uint64_t num, std::uint64_t den) {
        const std::uint64_t g = std::gcd(num, den);
        return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator==(const Rational&, const Rational&) = default;
    bool greater_than(std::uint64_t x) const { return num > static_cast<unsigned __int128>(x) * den; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::string six_digits(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct ReportRow {
    Family family = Family::Brown;
    std::string param;
    std::optional<std::uint64_t> delta;
    std::uint64_t k_free_of_a = 0; // k for which A is checked k-free (3 for Brown, t!+1 for norm)
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    std::uint64_t weight_a = 0;
    std::uint64_t weight_abar = 0;
    std::uint64_t sigma = 0;
    std::uint64_t weight_b = 0;
    std::uint64_t K = 0;
    std::uint64_t or_upper = 0;
    std::uint64_t or_lower = 0;
    Rational ratio_lb;
    double density_b = 0.0;

    // Verification record.
    bool a_free_verified = false;
    std::string b_free_method; // "direct", "transfer+sampled", "transfer"
    bool b_free_ok = false;
    std::string circuit_check; // "full" or "sampled"
    bool circuit_ok = false;
    std::uint64_t circuit_edges = 0;
    std::uint64_t circuit_depth = 0;
    std::optional<bool> weight_b_matches_materialized;
    bool failed = false;
    std::string note;
};

namespace detail {

inline std::uint64_t factorial(unsigned t) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= t; ++i) f *= i;
    return f;
}

/// Samples pairs of distinct rows of B = pair_transform(A) and checks that
/// they share at most one column, computed from A: rows {i1,i2} and {i3,i4}
/// of B share C(c, 2) columns, where c counts the columns of A that are ones
/// in every row of {i1,i2,i3,i4}.
inline bool sampled_pair_transform_2free(const BooleanMatrix& a, std::uint64_t samples, std::uint64_t seed) {
    const PairIndexer pairs(a.rows());
    Rng rng(seed);
    if (pairs.size() < 2) return true;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const std::uint64_t r1 = rng.below(pairs.size());
        std::uint64_t r2 = rng.below(pairs.size() - 1);
        if (r2 >= r1) ++r2;
        const auto [i1, i2] = pairs.unrank(r1);
        const auto [i3, i4] = pairs.unrank(r2);
        std::uint64_t common = 0;
        const auto a1 = a.row(i1), a2 = a.row(i2), a3 = a.row(i3), a4 = a.row(i4);
        for (std::size_t w = 0; w < a.words_per_row(); ++w) common += std::popcount(a1[w] & a2[w] & a3[w] & a4[w]);
        if (choose2(common) >= 2) return false;
    }
    return true;
}

} // namespace detail

inline ReportRow report_row(const ReportParam& param, const ReportOptions& options = {}) {
    ReportRow row;
    row.family = param.family;
    row.param = param.label();

    BooleanMatrix a;
    if (param.family == Family::Brown) {
        auto brown = brown_matrix(param.p, param.delta, options.budget);
        a = std::move(brown.matrix);
        row.delta = brown.delta;
        row.k_free_of_a = 3;
        // Automatic delta selection already ran the exhaustive search.
        row.a_free_verified = param.delta ? is_k_free(a, 3, options.budget).free : true;
    } else {
        a = norm_matrix(param.q, param.t);
        row.k_free_of_a = detail::factorial(param.t) + 1;
        try {
            row.a_free_verified = is_k_free(a, row.k_free_of_a, options.budget).free;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BudgetExceeded) throw;
            row.a_free_verified = false;
        }
    }
    const std::uint64_t k = row.k_free_of_a;
    row.K = choose2(k - 1) + 1;
    row.m = a.rows();
    const PairIndexer pairs(row.m);
    row.n = pairs.size();
    row.weight_a = a.weight();
    row.weight_abar = row.m * row.m - row.weight_a;

    const auto stats = count_2_rectangles(a);
    row.sigma = stats.sigma;
    row.weight_b = stats.two_rectangles;

    const RectifierCircuit circuit = depth3_complement_circuit(a);
    row.circuit_edges = complexity(circuit);
    row.circuit_depth = depth(circuit);
    row.or_upper = row.circuit_edges;

    // Freeness of B: directly when small enough, otherwise via the freeness of A.
    std::optional<BooleanMatrix> b;
    if (row.n <= options.direct_check_limit) {
        b = pair_transform(a);
        row.weight_b_matches_materialized = b->weight() == row.weight_b;
        try {
            row.b_free_ok = is_k_free(*b, row.K, options.budget).free;
            row.b_free_method = "direct";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BudgetExceeded) throw;
            row.b_free_method = "transfer";
            row.b_free_ok = row.a_free_verified;
        }
    } else if (row.K == 2) {
        row.b_free_method = "transfer+sampled";
        row.b_free_ok = row.a_free_verified && detail::sampled_pair_transform_2free(a, options.samples, options.seed);
    } else {
        row.b_free_method = "transfer";
        row.b_free_ok = row.a_free_verified;
    }

    // The circuit must implement the complement of B.
    if (row.n * row.n <= kMaterializeLimit && b) {
        row.circuit_check = "full";
        row.circuit_ok = implemented_matrix(circuit) == b->complement();
    } else {
        row.circuit_check = "sampled";
        const MatrixOracle complement_of_b = [&](std::uint64_t i, std::uint64_t j) {
            return !pair_transform_entry(a, pairs, i, j);
        };
        row.circuit_ok = sampled_verify(circuit, complement_of_b, options.samples, options.seed).pass;
    }

    if (!row.a_free_verified || !row.b_free_ok) {
        row.failed = true;
        row.note = row.a_free_verified ? "B freeness check failed" : "freeness of A not verified";
        row.or_lower = 0;
    } else if (row.K == 2) {
        row.or_lower = row.weight_b;
    } else {
        row.or_lower = ceil_div(row.weight_b, row.K * row.K);
    }
    if (!row.circuit_ok) {
        row.failed = true;
        row.note += row.note.empty() ? "circuit check failed" : "; circuit check failed";
    }
    row.ratio_lb = Rational::reduced(row.or_lower, row.or_upper);
    row.density_b = static_cast<double>(row.weight_b) / std::pow(static_cast<double>(row.n), 4.0 / 3.0);
    return row;
}

/// Rows follow the order of `params`.
inline std::vector<ReportRow> theorem_report(const std::vector<ReportParam>& params, const ReportOptions& options = {}) {
    std::vector<ReportRow> rows;
    rows.reserve(params.size());
    for (const auto& p : params) rows.push_back(report_row(p, options));
    return rows;
}

inline constexpr const char* kReportHeader =
    "family,param,m,n,weightA,weightAbar,sigma,weightB,K,orUpper,orLower,ratioLB,densityB";

inline std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << kReportHeader << "\n";
    for (const auto& r : rows) {
        out << family_name(r.family) << ',' << r.param << ',' << r.m << ',' << r.n << ',' << r.weight_a << ','
            << r.weight_abar << ',' << r.sigma << ',' << r.weight_b << ',' << r.K << ',' << r.or_upper << ','
            << r.or_lower << ',' << six_digits(r.ratio_lb.value()) << ',' << six_digits(r.density_b) << "\n";
    }
    return out.str();
}

inline nlohmann::ordered_json report_row_json(const ReportRow& r) {
    nlohmann::ordered_json j;
    j["family"] = family_name(r.family);
    j["param"] = r.param;
    if (r.delta) j["delta"] = *r.delta;
    j["m"] = r.m;
    j["n"] = r.n;
    j["weightA"] = r.weight_a;
    j["weightAbar"] = r.weight_abar;
    j["sigma"] = r.sigma;
    j["weightB"] = r.weight_b;
    j["kFreeA"] = r.k_free_of_a;
    j["K"] = r.K;
    j["orUpper"] = r.or_upper;
    j["orLower"] = r.or_lower;
    j["ratioLB"] = {{"num", r.ratio_lb.num}, {"den", r.ratio_lb.den}, {"decimal", six_digits(r.ratio_lb.value())}};
    j["densityB"] = six_digits(r.density_b);
    j["verification"] = {
        {"aFreeVerified", r.a_free_verified},
        {"bFreeMethod", r.b_free_method},
        {"bFreeOk", r.b_free_ok},
        {"circuitCheck", r.circuit_check},
        {"circuitOk", r.circuit_ok},
        {"circuitEdges", r.circuit_edges},
        {"circuitDepth", r.circuit_depth},
    };
    if (r.weight_b_matches_materialized) j["verification"]["weightBMatchesMaterialized"] = *r.weight_b_matches_materialized;
    j["failed"] = r.failed;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline std::string report_json(const std::vector<ReportRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(report_row_json(r));
    return arr.dump(2) + "\n";
}

} // namespace rectifier
