#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bool_matrix.hpp"
#include "error.hpp"
#include "random.hpp"

namespace rectifier {

struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// OR-circuit: a DAG whose ordered inputs index the columns and ordered
/// outputs index the rows of the matrix it implements. Edges are kept sorted
/// by (from, to); construction rejects duplicates, dangling endpoints and cycles.
class RectifierCircuit {
public:
    RectifierCircuit() = default;

    RectifierCircuit(std::size_t node_count, std::vector<Edge> edges, std::vector<std::uint32_t> inputs,
                     std::vector<std::uint32_t> outputs)
        : node_count_(node_count), edges_(std::move(edges)), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (edges_[e].from >= node_count_ || edges_[e].to >= node_count_)
                fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
            if (e > 0 && edges_[e] == edges_[e - 1]) fail(ErrorCode::InvalidArgument, "duplicate edge");
        }
        check_labels(inputs_, "input");
        check_labels(outputs_, "output");
        build_adjacency();
        order_ = topological_order();
    }

    std::size_t node_count() const noexcept { return node_count_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::uint32_t>& inputs() const noexcept { return inputs_; }
    const std::vector<std::uint32_t>& outputs() const noexcept { return outputs_; }
    const std::vector<std::uint32_t>& topological() const noexcept { return order_; }

    /// Successors of v (contiguous slice of the sorted edge list).
    std::span<const Edge> out_edges(std::uint32_t v) const {
        return {edges_.data() + out_begin_[v], out_begin_[v + 1] - out_begin_[v]};
    }
    std::span<const std::uint32_t> predecessors(std::uint32_t v) const {
        return {preds_.data() + in_begin_[v], in_begin_[v + 1] - in_begin_[v]};
    }

    friend bool operator==(const RectifierCircuit& a, const RectifierCircuit& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ && a.inputs_ == b.inputs_ && a.outputs_ == b.outputs_;
    }

    RectifierCircuit without_edge(std::size_t index) const {
        std::vector<Edge> kept = edges_;
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(index));
        return {node_count_, std::move(kept), inputs_, outputs_};
    }

private:
    void check_labels(const std::vector<std::uint32_t>& labels, const char* what) const {
        std::vector<std::uint32_t> sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail(ErrorCode::InvalidArgument, std::string("duplicate ") + what + " node");
        if (!sorted.empty() && sorted.back() >= node_count_)
            fail(ErrorCode::InvalidArgument, std::string(what) + " node out of range");
    }

    void build_adjacency() {
        out_begin_.assign(node_count_ + 1, 0);
        in_begin_.assign(node_count_ + 1, 0);
        for (const auto& e : edges_) {
            ++out_begin_[e.from + 1];
            ++in_begin_[e.to + 1];
        }
        for (std::size_t v = 0; v < node_count_; ++v) {
            out_begin_[v + 1] += out_begin_[v];
            in_begin_[v + 1] += in_begin_[v];
        }
        preds_.resize(edges_.size());
        std::vector<std::size_t> fill(in_begin_.begin(), in_begin_.end() - 1);
        for (const auto& e : edges_) preds_[fill[e.to]++] = e.from;
    }

    // Kahn's algorithm with a LIFO ready list; deterministic for a given edge list.
    std::vector<std::uint32_t> topological_order() const {
        std::vector<std::size_t> indegree(node_count_);
        for (std::size_t v = 0; v < node_count_; ++v) indegree[v] = in_begin_[v + 1] - in_begin_[v];
        std::vector<std::uint32_t> ready;
        for (std::size_t v = node_count_; v-- > 0;)
            if (indegree[v] == 0) ready.push_back(static_cast<std::uint32_t>(v));
        std::vector<std::uint32_t> order;
        order.reserve(node_count_);
        while (!ready.empty()) {
            const std::uint32_t v = ready.back();
            ready.pop_back();
            order.push_back(v);
            for (const auto& e : out_edges(v))
                if (--indegree[e.to] == 0) ready.push_back(e.to);
        }
        if (order.size() != node_count_) fail(ErrorCode::InvalidArgument, "circuit graph has a cycle");
        return order;
    }

    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> inputs_;
    std::vector<std::uint32_t> outputs_;
    std::vector<std::size_t> out_begin_{0};
    std::vector<std::size_t> in_begin_{0};
    std::vector<std::uint32_t> preds_;
    std::vector<std::uint32_t> order_;
};

inline std::uint64_t complexity(const RectifierCircuit& c) { return c.edges().size(); }

/// Longest path length in edges over the whole graph.
inline std::uint64_t depth(const RectifierCircuit& c) {
    std::vector<std::uint64_t> longest(c.node_count(), 0);
    std::uint64_t best = 0;
    for (auto v : c.topological()) {
        for (const auto& e : c.out_edges(v)) {
            longest[e.to] = std::max(longest[e.to], longest[v] + 1);
            best = std::max(best, longest[e.to]);
        }
    }
    return best;
}

inline constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 26;

/// M[i, j] = 1 iff output i is reachable from input j (a node that is both
/// input j and output i counts). Inputs are processed in blocks; for each
/// block every node carries the bitset of block inputs reaching it.
inline BooleanMatrix implemented_matrix(const RectifierCircuit& c) {
    const std::size_t n_in = c.inputs().size();
    const std::size_t n_out = c.outputs().size();
    if (n_in == 0 || n_out == 0) fail(ErrorCode::InvalidArgument, "circuit has no inputs or no outputs");
    if (static_cast<unsigned __int128>(n_in) * n_out > kMaterializeLimit)
        fail(ErrorCode::TooLargeToMaterialize, "inputs x outputs exceeds 2^26; use sampled verification");
    BooleanMatrix m(n_out, n_in);
    constexpr std::size_t kBlockWords = 64;
    constexpr std::size_t kBlock = kBlockWords * 64;
    for (std::size_t start = 0; start < n_in; start += kBlock) {
        const std::size_t len = std::min(kBlock, n_in - start);
        const std::size_t words = (len + 63) / 64;
        std::vector<std::uint64_t> reach(c.node_count() * words, 0);
        for (std::size_t j = 0; j < len; ++j) {
            const std::uint32_t v = c.inputs()[start + j];
            reach[v * words + j / 64] |= std::uint64_t{1} << (j % 64);
        }
        for (auto v : c.topological()) {
            std::uint64_t* dst = reach.data() + v * words;
            for (auto u : c.predecessors(v)) {
                const std::uint64_t* src = reach.data() + u * words;
                for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
            }
        }
        for (std::size_t i = 0; i < n_out; ++i) {
            const std::uint64_t* src = reach.data() + c.outputs()[i] * words;
            for (std::size_t j = 0; j < len; ++j)
                if ((src[j / 64] >> (j % 64)) & 1) m.set(i, start + j);
        }
    }
    return m;
}

/// Path query between individual nodes by bidirectional BFS, always growing
/// the side whose frontier has fewer outgoing edges. Reuses its scratch space
/// across queries.
class PathOracle {
public:
    explicit PathOracle(const RectifierCircuit& c) : c_(c), fwd_(c.node_count(), 0), bwd_(c.node_count(), 0) {}

    bool reachable(std::uint32_t from, std::uint32_t to) {
        if (from == to) return true;
        ++stamp_;
        std::vector<std::uint32_t> front{from}, back{to};
        fwd_[from] = stamp_;
        bwd_[to] = stamp_;
        while (!front.empty() && !back.empty()) {
            std::size_t front_cost = 0, back_cost = 0;
            for (auto v : front) front_cost += c_.out_edges(v).size();
            for (auto v : back) back_cost += c_.predecessors(v).size();
            std::vector<std::uint32_t> next;
            if (front_cost <= back_cost) {
                for (auto v : front) {
                    for (const auto& e : c_.out_edges(v)) {
                        if (bwd_[e.to] == stamp_) return true;
                        if (fwd_[e.to] != stamp_) {
                            fwd_[e.to] = stamp_;
                            next.push_back(e.to);
                        }
                    }
                }
                front = std::move(next);
            } else {
                for (auto v : back) {
                    for (auto u : c_.predecessors(v)) {
                        if (fwd_[u] == stamp_) return true;
                        if (bwd_[u] != stamp_) {
                            bwd_[u] = stamp_;
                            next.push_back(u);
                        }
                    }
                }
                back = std::move(next);
            }
        }
        return false;
    }

private:
    const RectifierCircuit& c_;
    std::vector<std::uint64_t> fwd_;
    std::vector<std::uint64_t> bwd_;
    std::uint64_t stamp_ = 0;
};

/// Value of the target matrix at (row, col).
using MatrixOracle = std::function<bool(std::uint64_t row, std::uint64_t col)>;

struct SampleMismatch {
    std::uint64_t row = 0; // output position
    std::uint64_t col = 0; // input position
    bool expected = false;
    bool actual = false;
};

struct SampleResult {
    bool pass = true;
    std::uint64_t checked = 0;
    std::optional<SampleMismatch> counterexample;
};

/// Compares path existence against the oracle on `samples` uniformly random
/// (output, input) pairs; stops at the first disagreement.
inline SampleResult sampled_verify(const RectifierCircuit& c, const MatrixOracle& oracle, std::uint64_t samples,
                                   std::uint64_t seed) {
    SampleResult result;
    if (c.inputs().empty() || c.outputs().empty()) return result;
    Rng rng(seed);
    PathOracle paths(c);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const std::uint64_t i = rng.below(c.outputs().size());
        const std::uint64_t j = rng.below(c.inputs().size());
        const bool actual = paths.reachable(c.inputs()[j], c.outputs()[i]);
        const bool expected = oracle(i, j);
        ++result.checked;
        if (actual != expected) {
            result.pass = false;
            result.counterexample = SampleMismatch{i, j, expected, actual};
            return result;
        }
    }
    return result;
}

/// First (row, col) in row-major order where two same-shape matrices differ.
inline std::optional<SampleMismatch> first_difference(const BooleanMatrix& expected, const BooleanMatrix& actual) {
    if (expected.rows() != actual.rows() || expected.cols() != actual.cols())
        fail(ErrorCode::DimensionMismatch, "matrices have different shapes");
    for (std::size_t i = 0; i < expected.rows(); ++i) {
        auto a = expected.row(i), b = actual.row(i);
        for (std::size_t w = 0; w < a.size(); ++w) {
            if (a[w] != b[w]) {
                const std::size_t j = w * 64 + std::countr_zero(a[w] ^ b[w]);
                return SampleMismatch{i, j, expected.get(i, j), actual.get(i, j)};
            }
        }
    }
    return std::nullopt;
}

/// Depth-1 circuit: input j -> output i for every one-entry A[i, j].
inline RectifierCircuit trivial_circuit(const BooleanMatrix& a) {
    const auto cols = static_cast<std::uint32_t>(a.cols());
    std::vector<std::uint32_t> inputs(a.cols()), outputs(a.rows());
    for (std::uint32_t j = 0; j < cols; ++j) inputs[j] = j;
    for (std::uint32_t i = 0; i < a.rows(); ++i) outputs[i] = cols + i;
    std::vector<Edge> edges;
    edges.reserve(a.weight());
    for (std::uint32_t i = 0; i < a.rows(); ++i)
        for (auto j : a.row_support(i)) edges.push_back({j, cols + i});
    return {a.cols() + a.rows(), std::move(edges), std::move(inputs), std::move(outputs)};
}

/// Three-layer circuit for the complement of the pair transform of A (m x m).
///
/// Node layout: column-pair inputs [0, n), layer L2 = [n, n+m), layer
/// L3 = [n+m, n+2m), row-pair outputs [n+2m, 2n+2m), n = C(m, 2). Input
/// {j1, j2} feeds L2 nodes j1, j2; L2 node j feeds L3 node i iff A[i, j] = 0;
/// L3 node i feeds every output pair containing i. An input {j1,j2} reaches
/// output {i1,i2} exactly when that 2x2 submatrix of A has a zero.
inline RectifierCircuit depth3_complement_circuit(const BooleanMatrix& a) {
    if (!a.square()) fail(ErrorCode::NonSquareInput, "depth-3 circuit needs a square matrix");
    if (a.rows() < 2) fail(ErrorCode::InvalidArgument, "depth-3 circuit needs m >= 2");
    const std::uint64_t m = a.rows();
    const PairIndexer pairs(m);
    const std::uint64_t n = pairs.size();
    if (2 * n + 2 * m > UINT32_MAX) fail(ErrorCode::InvalidArgument, "circuit too large for 32-bit node ids");
    const auto layer2 = static_cast<std::uint32_t>(n);
    const auto layer3 = static_cast<std::uint32_t>(n + m);
    const auto out0 = static_cast<std::uint32_t>(n + 2 * m);

    std::vector<std::uint32_t> inputs(n), outputs(n);
    std::vector<Edge> edges;
    edges.reserve(4 * n + m * m - a.weight());
    for (std::uint64_t i = 0; i < m; ++i) {
        for (std::uint64_t j = i + 1; j < m; ++j) {
            const auto r = static_cast<std::uint32_t>(pairs.rank(i, j));
            inputs[r] = r;
            outputs[r] = out0 + r;
            edges.push_back({r, layer2 + static_cast<std::uint32_t>(i)});
            edges.push_back({r, layer2 + static_cast<std::uint32_t>(j)});
            edges.push_back({layer3 + static_cast<std::uint32_t>(i), out0 + r});
            edges.push_back({layer3 + static_cast<std::uint32_t>(j), out0 + r});
        }
    }
    for (std::uint64_t i = 0; i < m; ++i)
        for (std::uint64_t j = 0; j < m; ++j)
            if (!a.get(i, j)) edges.push_back({layer2 + static_cast<std::uint32_t>(j), layer3 + static_cast<std::uint32_t>(i)});
    return {2 * n + 2 * m, std::move(edges), std::move(inputs), std::move(outputs)};
}

// Circuit file: one compact JSON object with keys in the order
// version, nodes, inputs, outputs, edges; edges sorted; trailing newline.

inline std::string to_json_text(const RectifierCircuit& c) {
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    doc["nodes"] = c.node_count();
    doc["inputs"] = c.inputs();
    doc["outputs"] = c.outputs();
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : c.edges()) edges.push_back({e.from, e.to});
    doc["edges"] = std::move(edges);
    return doc.dump() + "\n";
}

inline RectifierCircuit circuit_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::ParseError, std::string("circuit file is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != 1) fail(ErrorCode::ParseError, "unsupported circuit file version");
        const auto nodes = doc.at("nodes").get<std::size_t>();
        auto inputs = doc.at("inputs").get<std::vector<std::uint32_t>>();
        auto outputs = doc.at("outputs").get<std::vector<std::uint32_t>>();
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) fail(ErrorCode::ParseError, "edge must be a [from, to] pair");
            edges.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>()});
        }
        return {nodes, std::move(edges), std::move(inputs), std::move(outputs)};
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("malformed circuit file: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        fail(ErrorCode::ParseError, e.what());
    }
}

inline RectifierCircuit load_circuit(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return circuit_from_json_text(buf.str());
}

inline void save_circuit(const RectifierCircuit& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    out << to_json_text(c);
}

/// Graphviz export for inspection only; there is no reader for it.
inline std::string to_dot(const RectifierCircuit& c) {
    std::vector<int> role(c.node_count(), 0); // bit 0: input, bit 1: output
    for (auto v : c.inputs()) role[v] |= 1;
    for (auto v : c.outputs()) role[v] |= 2;
    std::ostringstream out;
    out << "digraph circuit {\n  rankdir=LR;\n";
    for (std::size_t v = 0; v < c.node_count(); ++v) {
        static constexpr const char* shapes[] = {"point", "invtriangle", "doublecircle", "diamond"};
        out << "  n" << v << " [shape=" << shapes[role[v]];
        if (role[v] != 0) out << ", label=\"" << v << "\"";
        out << "];\n";
    }
    for (std::size_t j = 0; j < c.inputs().size(); ++j) out << "  n" << c.inputs()[j] << " [xlabel=\"in" << j << "\"];\n";
    for (std::size_t i = 0; i < c.outputs().size(); ++i) out << "  n" << c.outputs()[i] << " [xlabel=\"out" << i << "\"];\n";
    for (const auto& e : c.edges()) out << "  n" << e.from << " -> n" << e.to << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace rectifier
