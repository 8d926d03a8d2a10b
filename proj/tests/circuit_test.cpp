#include <gtest/gtest.h>

#include <rectifier/circuit.hpp>
#include <rectifier/constructions.hpp>

namespace rectifier {
namespace {

// Reference reachability: DFS from one node over explicit adjacency lists.
bool dfs_reaches(const RectifierCircuit& c, std::uint32_t from, std::uint32_t to) {
    std::vector<char> seen(c.node_count(), 0);
    std::vector<std::uint32_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (const auto& e : c.edges()) {
            if (e.from == v && !seen[e.to]) {
                seen[e.to] = 1;
                stack.push_back(e.to);
            }
        }
    }
    return false;
}

BooleanMatrix reference_matrix(const RectifierCircuit& c) {
    BooleanMatrix m(c.outputs().size(), c.inputs().size());
    for (std::size_t i = 0; i < c.outputs().size(); ++i)
        for (std::size_t j = 0; j < c.inputs().size(); ++j)
            if (dfs_reaches(c, c.inputs()[j], c.outputs()[i])) m.set(i, j);
    return m;
}

TEST(RectifierCircuit, EmptyAndEdgeless) {
    const RectifierCircuit empty;
    EXPECT_EQ(complexity(empty), 0u);
    EXPECT_EQ(depth(empty), 0u);
    const RectifierCircuit isolated(3, {}, {0}, {1, 2});
    EXPECT_EQ(depth(isolated), 0u);
    EXPECT_EQ(implemented_matrix(isolated), BooleanMatrix::zeros(2, 1));
}

TEST(RectifierCircuit, SingleEdge) {
    const RectifierCircuit c(2, {{0, 1}}, {0}, {1});
    EXPECT_EQ(implemented_matrix(c), BooleanMatrix::ones(1, 1));
    EXPECT_EQ(depth(c), 1u);
}

TEST(RectifierCircuit, ZeroLengthPathCounts) {
    const RectifierCircuit c(2, {}, {0, 1}, {1});
    EXPECT_EQ(implemented_matrix(c).to_text(), "1 2\n01\n");
}

TEST(RectifierCircuit, Validation) {
    EXPECT_THROW(RectifierCircuit(2, {{0, 2}}, {0}, {1}), Error);          // endpoint range
    EXPECT_THROW(RectifierCircuit(2, {{0, 1}, {0, 1}}, {0}, {1}), Error);  // duplicate edge
    EXPECT_THROW(RectifierCircuit(3, {{0, 1}, {1, 2}, {2, 1}}, {0}, {2}), Error); // cycle
    EXPECT_THROW(RectifierCircuit(2, {}, {0, 0}, {1}), Error);             // duplicate input
    EXPECT_THROW(RectifierCircuit(2, {}, {0}, {5}), Error);                // output range
}

TEST(TrivialCircuit, Examples) {
    const auto zero = trivial_circuit(BooleanMatrix::zeros(2, 3));
    EXPECT_EQ(complexity(zero), 0u);
    EXPECT_EQ(implemented_matrix(zero), BooleanMatrix::zeros(2, 3));
    EXPECT_EQ(complexity(trivial_circuit(BooleanMatrix::identity(3))), 3u);
    const auto ones = trivial_circuit(BooleanMatrix::ones(2, 2));
    EXPECT_EQ(complexity(ones), 4u);
    EXPECT_EQ(depth(ones), 1u);
    EXPECT_EQ(implemented_matrix(ones), BooleanMatrix::ones(2, 2));
}

TEST(TrivialCircuit, ImplementsEveryThreeByThreeMatrix) {
    for (unsigned mask = 0; mask < 512; ++mask) {
        BooleanMatrix a(3, 3);
        for (unsigned b = 0; b < 9; ++b)
            if ((mask >> b) & 1) a.set(b / 3, b % 3);
        const auto c = trivial_circuit(a);
        ASSERT_EQ(implemented_matrix(c), a);
        ASSERT_EQ(complexity(c), a.weight());
        ASSERT_EQ(depth(c), a.weight() == 0 ? 0u : 1u);
    }
}

TEST(TrivialCircuit, RandomTwentyByTwenty) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto a = random_matrix(20, 20, 0.3, seed);
        const auto c = trivial_circuit(a);
        EXPECT_EQ(implemented_matrix(c), a);
        EXPECT_EQ(complexity(c), a.weight());
    }
}

TEST(Depth3Circuit, IdentityThree) {
    const auto c = depth3_complement_circuit(BooleanMatrix::identity(3));
    EXPECT_EQ(complexity(c), 18u);
    EXPECT_EQ(depth(c), 3u);
    EXPECT_EQ(implemented_matrix(c), BooleanMatrix::ones(3, 3));
    EXPECT_EQ(reference_matrix(c), BooleanMatrix::ones(3, 3));
}

TEST(Depth3Circuit, AllOnesHasNoMiddleEdges) {
    const auto c = depth3_complement_circuit(BooleanMatrix::ones(5, 5));
    EXPECT_EQ(complexity(c), 40u);
    EXPECT_EQ(depth(c), 1u); // only input->L2 and L3->output edges remain
    EXPECT_EQ(implemented_matrix(c), BooleanMatrix::zeros(10, 10));
}

// Complement of the pair transform, exact edge count, depth bound; m <= 30.
TEST(Depth3Circuit, ImplementsComplementOfPairTransform) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t m = 2 + seed % 29;
        const auto a = random_matrix(m, m, 0.2 + 0.7 * static_cast<double>(seed % 4) / 3.0, seed);
        const auto c = depth3_complement_circuit(a);
        const auto abar = a.complement();
        EXPECT_EQ(implemented_matrix(c), pair_transform(a).complement()) << "seed " << seed;
        EXPECT_EQ(complexity(c), 4 * choose2(m) + abar.weight());
        EXPECT_LE(depth(c), 3u);
        if (abar.weight() > 0) EXPECT_EQ(depth(c), 3u);
    }
}

TEST(Depth3Circuit, BrownThreeFullCheck) {
    const auto a = brown_matrix(3).matrix;
    const auto c = depth3_complement_circuit(a);
    EXPECT_EQ(implemented_matrix(c), pair_transform(a).complement());
}

TEST(Depth3Circuit, RejectsNonSquare) {
    try {
        depth3_complement_circuit(BooleanMatrix::ones(2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonSquareInput);
    }
}

TEST(ImplementedMatrix, AgreesWithReferenceOnRandomDags) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const std::uint32_t nodes = 5 + static_cast<std::uint32_t>(rng.below(25));
        std::vector<Edge> edges;
        for (std::uint32_t u = 0; u < nodes; ++u)
            for (std::uint32_t v = u + 1; v < nodes; ++v)
                if (rng.bernoulli(0.15)) edges.push_back({u, v});
        std::vector<std::uint32_t> inputs, outputs;
        for (std::uint32_t v = 0; v < nodes; ++v) {
            if (rng.bernoulli(0.4)) inputs.push_back(v);
            if (rng.bernoulli(0.4)) outputs.push_back(v);
        }
        if (inputs.empty()) inputs.push_back(0);
        if (outputs.empty()) outputs.push_back(nodes - 1);
        const RectifierCircuit c(nodes, edges, inputs, outputs);
        ASSERT_EQ(implemented_matrix(c), reference_matrix(c)) << "seed " << seed;
        PathOracle paths(c);
        for (auto j : inputs)
            for (auto i : outputs) ASSERT_EQ(paths.reachable(j, i), dfs_reaches(c, j, i));
    }
}

TEST(ImplementedMatrix, RefusesHugeMaterialization) {
    std::vector<std::uint32_t> ins(9000), outs(9000); // 9000^2 > 2^26 entries
    for (std::uint32_t v = 0; v < 9000; ++v) {
        ins[v] = v;
        outs[v] = 9000 + v;
    }
    try {
        implemented_matrix(RectifierCircuit(18000, {}, ins, outs));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLargeToMaterialize);
    }
}

TEST(SampledVerify, PassesAndDetectsMutation) {
    const auto a = random_matrix(15, 15, 0.4, 3);
    const auto c = trivial_circuit(a);
    const MatrixOracle oracle = [&](std::uint64_t i, std::uint64_t j) { return a.get(i, j); };
    EXPECT_TRUE(sampled_verify(c, oracle, 2000, 1).pass);

    const auto mutated = c.without_edge(0);
    const auto result = sampled_verify(mutated, oracle, 20000, 1);
    ASSERT_FALSE(result.pass);
    const auto& bad = *result.counterexample;
    EXPECT_TRUE(bad.expected);
    EXPECT_FALSE(bad.actual);
    EXPECT_EQ(c.edges()[0].from, bad.col);
    EXPECT_EQ(c.edges()[0].to, a.cols() + bad.row);
}

TEST(SampledVerify, Depth3BrownSevenAgainstEntrywiseDefinition) {
    const auto a = brown_matrix(7).matrix;
    const auto c = depth3_complement_circuit(a);
    const PairIndexer pairs(a.rows());
    const MatrixOracle complement_of_b = [&](std::uint64_t i, std::uint64_t j) { return !pair_transform_entry(a, pairs, i, j); };
    const auto r = sampled_verify(c, complement_of_b, 100000, 11);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.checked, 100000u);
}

TEST(CircuitFile, RoundTripAndFormat) {
    const auto c = depth3_complement_circuit(BooleanMatrix::identity(3));
    const auto text = to_json_text(c);
    EXPECT_EQ(text.rfind("{\"version\":1,\"nodes\":12,\"inputs\":[0,1,2],\"outputs\":[9,10,11],\"edges\":[[0,3],", 0), 0u);
    EXPECT_EQ(text.back(), '\n');
    const auto back = circuit_from_json_text(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(to_json_text(back), text);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = trivial_circuit(random_matrix(7, 9, 0.5, seed));
        EXPECT_EQ(circuit_from_json_text(to_json_text(t)), t);
    }
}

TEST(CircuitFile, ParseErrors) {
    for (const char* bad : {"", "{", "{\"version\":2,\"nodes\":1,\"inputs\":[],\"outputs\":[],\"edges\":[]}",
                            "{\"version\":1,\"nodes\":2,\"inputs\":[0],\"outputs\":[1],\"edges\":[[0]]}",
                            "{\"version\":1,\"nodes\":2,\"inputs\":[0],\"outputs\":[1],\"edges\":[[0,1],[1,0]]}",
                            "{\"version\":1,\"inputs\":[0],\"outputs\":[1],\"edges\":[]}"}) {
        try {
            circuit_from_json_text(bad);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
        }
    }
}

TEST(CircuitFile, DotExportAnnotatesRoles) {
    const auto dot = to_dot(trivial_circuit(BooleanMatrix::identity(2)));
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("n0 [shape=invtriangle"), std::string::npos);
    EXPECT_NE(dot.find("n2 [shape=doublecircle"), std::string::npos);
    EXPECT_NE(dot.find("n0 -> n2;"), std::string::npos);
}

} // namespace
} // namespace rectifier
