// rectifier: command-line front end for the rectifier library.
//
// Exit codes: 0 success, 1 verification or certificate failure,
// 2 invalid input, 3 resource limit.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <rectifier/rectifier.hpp>

namespace {

using namespace rectifier;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;
constexpr int kResource = 3;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::MaterializeTooLarge:
    case ErrorCode::TooLargeToMaterialize:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::CountOverflow: return kResource;
    case ErrorCode::NotKFree:
    case ErrorCode::NoFreeDeltaFound: return kFailed;
    default: return kInvalid;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

std::string join(const std::vector<std::uint32_t>& v) {
    std::string s;
    for (std::size_t x = 0; x < v.size(); ++x) s += (x ? "," : "") + std::to_string(v[x]);
    return s;
}

void print_witness(const RectangleWitness& w) {
    std::cout << "witness rows: " << join(w.rows) << "\nwitness cols: " << join(w.cols) << "\n";
}

struct Options {
    // gen
    std::string family;
    std::uint64_t p = 0, q = 0, t = 0, seed = 1;
    std::optional<std::uint64_t> delta;
    std::size_t rows = 0, cols = 0, k = 0;
    double density = 0.5;
    // files
    std::string in, out, circuit, matrix, dot, json;
    bool stats_only = false;
    // circuit / verify
    std::string kind;
    std::uint64_t samples = 0;
    // analyze / bound
    std::optional<std::size_t> analyze_k;
    bool lemma1 = false;
    std::uint64_t K = 2;
    std::uint64_t budget = std::uint64_t{1} << 24;
    std::uint64_t search_budget = std::uint64_t{1} << 40;
    // report
    std::vector<std::uint64_t> p_list;
    std::vector<std::string> qt_list;
    std::uint64_t direct_limit = 10'000;
};

int cmd_gen(const Options& o) {
    BooleanMatrix a;
    if (o.family == "brown") {
        const auto b = brown_matrix(o.p, o.delta, SearchBudget{o.search_budget});
        a = b.matrix;
        std::cout << "delta: " << b.delta << "\nsphere: " << b.sphere << "\n";
    } else if (o.family == "norm") {
        a = norm_matrix(o.q, static_cast<unsigned>(o.t));
    } else if (o.family == "random") {
        a = random_matrix(o.rows, o.cols, o.density, o.seed);
    } else {
        if (o.k < 2) fail(ErrorCode::InvalidArgument, "--k must be at least 2");
        a = random_k_free(o.rows, o.cols, o.density, o.k, o.seed);
    }
    a.save(o.out);
    std::cout << "rows: " << a.rows() << "\ncols: " << a.cols() << "\nweight: " << a.weight() << "\n";
    return kOk;
}

int cmd_transform(const Options& o) {
    const auto a = BooleanMatrix::load(o.in);
    if (o.stats_only) {
        const auto result = pair_transform(a, TransformMode::StatsOnly);
        const auto& stats = std::get<RectangleStats>(result);
        std::string block = "m: " + std::to_string(a.rows()) + "\nn: " + std::to_string(choose2(a.rows())) +
                            "\nsigma: " + std::to_string(stats.sigma) + "\nweightB: " + std::to_string(stats.two_rectangles) +
                            "\n";
        std::cout << block;
        if (!o.out.empty()) write_file(o.out, block);
        return kOk;
    }
    if (o.out.empty()) fail(ErrorCode::InvalidArgument, "--out is required unless --stats-only is given");
    const auto b = pair_transform(a);
    b.save(o.out);
    std::cout << "n: " << b.rows() << "\nweightB: " << b.weight() << "\n";
    return kOk;
}

int cmd_circuit(const Options& o) {
    const auto a = BooleanMatrix::load(o.in);
    const auto c = o.kind == "trivial" ? trivial_circuit(a) : depth3_complement_circuit(a);
    save_circuit(c, o.out);
    if (!o.dot.empty()) write_file(o.dot, to_dot(c));
    std::cout << "nodes: " << c.node_count() << "\nedges: " << complexity(c) << "\ndepth: " << depth(c) << "\n";
    return kOk;
}

int cmd_eval(const Options& o) {
    const auto c = load_circuit(o.circuit);
    const auto m = implemented_matrix(c);
    m.save(o.out);
    std::cout << "rows: " << m.rows() << "\ncols: " << m.cols() << "\nweight: " << m.weight() << "\n";
    return kOk;
}

int report_mismatch(const SampleMismatch& bad) {
    std::cout << "match: false\ncounterexample: row " << bad.row << " col " << bad.col << " expected " << bad.expected
              << " circuit " << bad.actual << "\n";
    return kFailed;
}

int cmd_verify(const Options& o) {
    const auto c = load_circuit(o.circuit);
    const auto expected = BooleanMatrix::load(o.matrix);
    if (expected.rows() != c.outputs().size() || expected.cols() != c.inputs().size())
        fail(ErrorCode::DimensionMismatch, "matrix shape does not match circuit inputs/outputs");
    if (o.samples > 0) {
        const MatrixOracle oracle = [&](std::uint64_t i, std::uint64_t j) { return expected.get(i, j); };
        const auto r = sampled_verify(c, oracle, o.samples, o.seed);
        std::cout << "mode: sampled\nchecked: " << r.checked << "\n";
        if (!r.pass) return report_mismatch(*r.counterexample);
    } else {
        std::cout << "mode: full\n";
        if (auto bad = first_difference(expected, implemented_matrix(c))) return report_mismatch(*bad);
    }
    std::cout << "match: true\n";
    return kOk;
}

int cmd_analyze(const Options& o) {
    const auto a = BooleanMatrix::load(o.in);
    const SearchBudget budget{o.search_budget};
    std::cout << "rows: " << a.rows() << "\ncols: " << a.cols() << "\nweight: " << a.weight() << "\n";
    int code = kOk;
    if (o.analyze_k) {
        const auto r = is_k_free(a, *o.analyze_k, budget);
        std::cout << *o.analyze_k << "-free: " << (r.free ? "true" : "false") << "\n";
        if (!r.free) {
            print_witness(*r.witness);
            code = kFailed;
        }
    } else {
        std::cout << "smallest free k: " << smallest_free_k(a, budget) << "\n";
    }
    if (o.lemma1) {
        const auto c = lemma1_certificate(a);
        auto flag = [](bool b) { return b ? "true" : "false"; };
        std::cout << "sigma: " << c.sigma << "\ntwo-rectangles: " << c.two_rectangles
                  << "\nsigma convexity: " << flag(c.sigma_convexity) << "\ncount convexity: " << flag(c.count_convexity)
                  << "\nprecondition: " << flag(c.precondition) << "\n";
        if (c.precondition)
            std::cout << "sigma quarter: " << flag(*c.sigma_quarter) << "\ncount half: " << flag(*c.count_half) << "\n";
        if (!c.all_hold()) code = kFailed;
    }
    return code;
}

int cmd_bound(const Options& o) {
    const auto a = BooleanMatrix::load(o.in);
    if (o.kind == "nechiporuk") {
        try {
            const auto cert = nechiporuk_lower(a, o.K, SearchBudget{o.search_budget});
            std::cout << "K: " << cert.K << "\nweight: " << cert.weight << "\nbound: " << cert.bound << "\n";
            if (cert.exact_or) std::cout << "exact: " << *cert.exact_or << "\n";
        } catch (const NotKFreeError& e) {
            std::cout << "K: " << o.K << "\n" << o.K << "-free: false\n";
            print_witness(e.witness());
            return kFailed;
        }
        return kOk;
    }
    const auto r = exact_or2(a, o.budget);
    std::cout << "cost: " << r.cost << "\noptimal: " << (r.optimal ? "true" : "false") << "\nnodes: " << r.nodes << "\n";
    for (const auto& rect : r.cover.rectangles)
        std::cout << "rectangle: rows " << join(rect.rows) << " cols " << join(rect.cols) << "\n";
    for (const auto& [i, j] : r.cover.direct_wires) std::cout << "wire: " << i << "," << j << "\n";
    return r.optimal ? kOk : kResource;
}

int cmd_report(const Options& o) {
    std::vector<ReportParam> params;
    if (o.family == "brown") {
        if (o.p_list.empty()) fail(ErrorCode::InvalidArgument, "--p list is required");
        for (auto p : o.p_list) params.push_back(ReportParam::brown(p));
    } else {
        if (o.qt_list.empty()) fail(ErrorCode::InvalidArgument, "--qt list is required");
        for (const auto& s : o.qt_list) {
            const auto colon = s.find(':');
            if (colon == std::string::npos) fail(ErrorCode::InvalidArgument, "expected q:t, got " + s);
            try {
                params.push_back(ReportParam::norm(std::stoull(s.substr(0, colon)), static_cast<unsigned>(std::stoul(s.substr(colon + 1)))));
            } catch (const std::logic_error&) {
                fail(ErrorCode::InvalidArgument, "expected q:t, got " + s);
            }
        }
    }
    ReportOptions options;
    options.direct_check_limit = o.direct_limit;
    options.samples = o.samples == 0 ? 100'000 : o.samples;
    options.seed = o.seed;
    options.budget = SearchBudget{o.search_budget};
    const auto rows = theorem_report(params, options);
    write_file(o.out, report_csv(rows));
    if (!o.json.empty()) write_file(o.json, report_json(rows));
    bool failed = false;
    for (const auto& r : rows) {
        std::cout << family_name(r.family) << " " << r.param;
        if (r.delta) std::cout << " delta=" << *r.delta;
        std::cout << " ratioLB=" << six_digits(r.ratio_lb.value()) << " B-check=" << r.b_free_method
                  << " circuit-check=" << r.circuit_check << (r.failed ? " FAILED: " + r.note : "") << "\n";
        failed = failed || r.failed;
    }
    return failed ? kFailed : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rectifier circuit constructions, bounds and verification"};
    app.require_subcommand(1);
    Options o;
    int (*handler)(const Options&) = nullptr;

    auto* gen = app.add_subcommand("gen", "generate a matrix file");
    gen->add_option("family", o.family, "brown, norm, random or random-kfree")
        ->required()
        ->check(CLI::IsMember({"brown", "norm", "random", "random-kfree"}));
    gen->add_option("--p", o.p, "prime for brown");
    gen->add_option("--delta", o.delta, "sphere radius for brown (default: automatic)");
    gen->add_option("--q", o.q, "prime for norm");
    gen->add_option("--t", o.t, "extension degree for norm");
    gen->add_option("--rows", o.rows);
    gen->add_option("--cols", o.cols);
    gen->add_option("--density", o.density);
    gen->add_option("--k", o.k, "forbidden rectangle size for random-kfree");
    gen->add_option("--seed", o.seed);
    gen->add_option("--budget", o.search_budget, "node budget for freeness searches");
    gen->add_option("--out", o.out, "output matrix file")->required();
    gen->callback([&] { handler = cmd_gen; });

    auto* transform = app.add_subcommand("transform", "pair transform of a square matrix");
    transform->add_option("--in", o.in)->required();
    transform->add_option("--out", o.out);
    transform->add_flag("--stats-only", o.stats_only, "print sigma and |B| without materializing B");
    transform->callback([&] { handler = cmd_transform; });

    auto* circuit = app.add_subcommand("circuit", "build a circuit from a matrix");
    circuit->add_option("kind", o.kind)->required()->check(CLI::IsMember({"trivial", "depth3"}));
    circuit->add_option("--in", o.in)->required();
    circuit->add_option("--out", o.out)->required();
    circuit->add_option("--dot", o.dot, "also write a Graphviz file");
    circuit->callback([&] { handler = cmd_circuit; });

    auto* eval = app.add_subcommand("eval", "write the matrix a circuit implements");
    eval->add_option("--circuit", o.circuit)->required();
    eval->add_option("--out", o.out)->required();
    eval->callback([&] { handler = cmd_eval; });

    auto* verify = app.add_subcommand("verify", "check a circuit against a matrix");
    verify->add_option("--circuit", o.circuit)->required();
    verify->add_option("--matrix", o.matrix)->required();
    verify->add_option("--samples", o.samples, "random entries to check (0: every entry)");
    verify->add_option("--seed", o.seed);
    verify->callback([&] { handler = cmd_verify; });

    auto* analyze = app.add_subcommand("analyze", "freeness and rectangle statistics");
    analyze->add_option("--in", o.in)->required();
    analyze->add_option("--k", o.analyze_k, "test k-freeness (default: report the smallest free k)");
    analyze->add_flag("--lemma1", o.lemma1, "print the rectangle-count certificate");
    analyze->add_option("--budget", o.search_budget);
    analyze->callback([&] { handler = cmd_analyze; });

    auto* bound = app.add_subcommand("bound", "lower bounds and exact depth-2 cost");
    bound->add_option("kind", o.kind)->required()->check(CLI::IsMember({"nechiporuk", "or2"}));
    bound->add_option("--in", o.in)->required();
    bound->add_option("--K", o.K, "freeness parameter for nechiporuk");
    bound->add_option("--budget", o.budget, "node budget for or2");
    bound->callback([&] { handler = cmd_bound; });

    auto* report = app.add_subcommand("report", "table of upper and lower bounds");
    report->add_option("family", o.family)->required()->check(CLI::IsMember({"brown", "norm"}));
    report->add_option("--p", o.p_list, "comma-separated primes")->delimiter(',');
    report->add_option("--qt", o.qt_list, "comma-separated q:t pairs")->delimiter(',');
    report->add_option("--out", o.out, "CSV file")->required();
    report->add_option("--json", o.json, "also write a JSON report");
    report->add_option("--samples", o.samples, "samples for the spot checks (default 100000)");
    report->add_option("--seed", o.seed);
    report->add_option("--direct-limit", o.direct_limit, "check B directly when n is at most this");
    report->add_option("--budget", o.search_budget);
    report->callback([&] { handler = cmd_report; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        return handler(o);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
}
