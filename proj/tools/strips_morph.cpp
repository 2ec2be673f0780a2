#include "stripsmorph/bench.hpp"
#include "stripsmorph/encode.hpp"
#include "stripsmorph/generate.hpp"
#include "stripsmorph/graphs.hpp"
#include "stripsmorph/search.hpp"
#include "stripsmorph/statespace.hpp"
#include "stripsmorph/textio.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace stripsmorph;

constexpr int kExitFound = 10;
constexpr int kExitNone = 20;
constexpr int kExitTimeout = 30;
constexpr int kExitInputError = 1;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

MorphKind parse_kind(const std::string& text) {
    auto kind = morph_kind_from_string(text);
    if (!kind) throw std::runtime_error("unknown kind '" + text + "' (si|ssih|ssi|se)");
    return *kind;
}

SolverConfig make_solver_config(const std::string& solver_path, double timeout,
                                std::uint64_t seed) {
    SolverConfig cfg;
    cfg.timeout_seconds = timeout;
    cfg.seed = seed;
    std::string path = solver_path;
    if (path.empty())
        if (const char* env = std::getenv("STRIPS_MORPH_SOLVER")) path = env;
    if (!path.empty()) {
        cfg.backend = SolverConfig::Backend::External;
        cfg.external_path = path;
    }
    return cfg;
}

Graph graph_from_flags(int n, const std::string& edges, bool directed) {
    Graph g;
    g.directed = directed;
    for (int i = 1; i <= n; ++i) g.vertex_names.push_back("v" + std::to_string(i));
    std::istringstream in(edges);
    std::string item;
    auto vertex = [&](const std::string& token) {
        int id = g.vertex_id(token);
        if (id >= 0) return id;
        try {
            std::size_t used = 0;
            int index = std::stoi(token, &used);
            if (used == token.size() && index >= 1 && index <= n) return index - 1;
        } catch (...) {}
        throw std::runtime_error("unknown vertex '" + token + "'");
    };
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto dash = item.find('-');
        if (dash == std::string::npos)
            throw std::runtime_error("edge '" + item + "' is not of the form u-v");
        int u = vertex(item.substr(0, dash));
        int v = vertex(item.substr(dash + 1));
        if (!g.directed && u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
    }
    validate(g);
    return g;
}

int run_check(const std::string& kind_text, const std::string& a_path, const std::string& b_path,
              bool no_cp, double timeout, const std::string& solver_path, std::uint64_t seed,
              const std::string& out_path, const std::string& stats_path, bool oracle_mode) {
    MorphKind kind = parse_kind(kind_text);
    StripsInstance a = parse_instance(slurp(a_path));
    StripsInstance b = parse_instance(slurp(b_path));

    FindResult result;
    if (oracle_mode) {
        auto found = brute_force(a, b, kind);
        result.outcome = found ? FindResult::Outcome::Found : FindResult::Outcome::NoMorphism;
        result.morphism = found;
    } else {
        FindConfig cfg;
        cfg.use_cp = !no_cp;
        cfg.solver = make_solver_config(solver_path, timeout, seed);
        result = find_morphism(a, b, kind, cfg);
    }

    if (!stats_path.empty()) spit(stats_path, result.stats.to_json(kind, result.outcome_name()));
    if (result.morphism && !out_path.empty())
        spit(out_path, write_morphism(a, b, *result.morphism));
    if (!oracle_mode) std::cerr << result.stats.to_table(kind, result.outcome_name());

    switch (result.outcome) {
    case FindResult::Outcome::Found:
        std::cout << "found\n";
        if (out_path.empty() && result.morphism)
            std::cout << write_morphism(a, b, *result.morphism);
        return kExitFound;
    case FindResult::Outcome::NoMorphism: std::cout << "no morphism\n"; return kExitNone;
    default: std::cout << "timeout\n"; return kExitTimeout;
    }
}

int run_verify(const std::string& kind_text, const std::string& a_path, const std::string& b_path,
               const std::string& mapping_path) {
    MorphKind kind = parse_kind(kind_text);
    StripsInstance a = parse_instance(slurp(a_path));
    StripsInstance b = parse_instance(slurp(b_path));
    Morphism m = parse_morphism(a, b, slurp(mapping_path));
    if (m.kind != kind) {
        std::cout << "kind mismatch: mapping is " << to_string(m.kind) << '\n';
        return kExitNone;
    }
    VerifyReport report;
    try {
        report = verify_morphism(a, b, m);
    } catch (const ShapeMismatch& e) {
        std::cout << "invalid\n" << e.what() << '\n';
        return kExitNone;
    }
    if (report.valid()) {
        std::cout << "valid\n";
        return 0;
    }
    std::cout << "invalid\n";
    for (const auto& v : report.violations) std::cout << v << '\n';
    return kExitNone;
}

int run_encode(const std::string& kind_text, const std::string& a_path, const std::string& b_path,
               bool no_cp, const std::string& dimacs_path, const std::string& stats_path) {
    MorphKind kind = parse_kind(kind_text);
    StripsInstance a = parse_instance(slurp(a_path));
    StripsInstance b = parse_instance(slurp(b_path));
    std::optional<DomainTable> dt;
    if (no_cp)
        dt = init_domains(a, b, kind);
    else
        dt = ac3(a, b, kind);
    SimplificationStats stats = simplification_stats(a, b, dt, kind);
    if (dt) {
        CnfFormula formula = encode_cnf(a, b, *dt, kind);
        if (!dimacs_path.empty()) spit(dimacs_path, write_dimacs(formula));
    } else if (!dimacs_path.empty()) {
        // Propagation concluded: the canonical unsatisfiable formula.
        CnfFormula unsat;
        unsat.clauses.push_back({});
        spit(dimacs_path, write_dimacs(unsat));
    }
    std::cout << "vars=" << stats.vars << '\n'
              << "clauses=" << stats.clauses << '\n'
              << "vars_baseline=" << stats.vars_baseline << '\n'
              << "clauses_baseline=" << stats.clauses_baseline << '\n'
              << "early_unsat=" << (stats.early_unsat ? 1 : 0) << '\n'
              << "simplified_fraction=" << stats.fraction << '\n';
    if (!stats_path.empty()) {
        std::ostringstream json;
        json << "{\n  \"vars\": " << stats.vars << ",\n  \"clauses\": " << stats.clauses
             << ",\n  \"vars_baseline\": " << stats.vars_baseline
             << ",\n  \"clauses_baseline\": " << stats.clauses_baseline
             << ",\n  \"early_unsat\": " << (stats.early_unsat ? "true" : "false")
             << ",\n  \"simplified_fraction\": " << stats.fraction << "\n}\n";
        spit(stats_path, json.str());
    }
    return 0;
}

int run_statespace(const std::string& a_path, const std::string& b_path,
                   const std::string& mapping_path, int cap, const std::string& report_path,
                   const std::string& dot_path) {
    StripsInstance a = parse_instance(slurp(a_path));
    StripsInstance b = parse_instance(slurp(b_path));
    Morphism m = parse_morphism(a, b, slurp(mapping_path));
    AbstractionReport report = check_embedding_abstraction(a, b, m);
    if (!report_path.empty()) spit(report_path, report.to_json());
    if (!dot_path.empty()) {
        Bitset image = fluent_image(m, a.fluent_count());
        spit(dot_path, lts_to_dot(project_lts(a, image, cap), a));
    }
    std::cout << report.to_json();
    return report.ok() ? 0 : kExitNone;
}

int run_gen(CLI::App* cmd_graph, CLI::App* cmd_indepset, CLI::App* cmd_matching,
            CLI::App* cmd_pair, int n, const std::string& edges, bool directed, int k,
            int edge_prob, std::uint64_t seed, int fluents, int ops, bool layered,
            const std::string& kind_text, const std::string& out) {
    if (cmd_graph->parsed()) {
        Graph g = edges.empty() && edge_prob >= 0
                      ? [&] {
                            Rng rng(seed);
                            return random_graph(n, edge_prob, directed, rng);
                        }()
                      : graph_from_flags(n, edges, directed);
        spit(out + ".strips", write_instance(encode_graph(g)));
        spit(out + ".graph", write_graph(g));
        std::cout << "wrote " << out << ".strips and " << out << ".graph\n";
        return 0;
    }
    if (cmd_indepset->parsed()) {
        Graph g = graph_from_flags(n, edges, false);
        auto [p, p2] = reduce_independent_set(g, k);
        spit(out + ".a.strips", write_instance(p));
        spit(out + ".b.strips", write_instance(p2));
        std::cout << "wrote " << out << ".a.strips and " << out << ".b.strips\n";
        return 0;
    }
    if (cmd_matching->parsed()) {
        Rng rng(seed);
        Graph g1 = random_graph(n, edge_prob, false, rng);
        Graph g2 = random_graph(n, edge_prob, false, rng);
        spit(out + ".a.strips", write_instance(encode_graph(g1)));
        spit(out + ".b.strips", write_instance(encode_graph(g2)));
        std::cout << "wrote " << out << ".a.strips and " << out << ".b.strips\n";
        return 0;
    }
    if (cmd_pair->parsed()) {
        MorphKind kind = parse_kind(kind_text);
        if (kind != MorphKind::SSI && kind != MorphKind::SE)
            throw std::runtime_error("positive-pair supports --kind ssi|se");
        Rng rng(seed);
        RandomInstanceOptions opts;
        opts.fluents = fluents;
        opts.ops = ops;
        opts.layered = layered;
        PositivePair pair =
            kind == MorphKind::SSI ? positive_pair_ssi(opts, rng) : positive_pair_se(opts, rng);
        VerifyReport report = verify_morphism(pair.a, pair.b, pair.witness);
        if (!report.valid())
            throw std::logic_error("generated witness fails verification: " +
                                   report.violations.front());
        spit(out + ".a.strips", write_instance(pair.a));
        spit(out + ".b.strips", write_instance(pair.b));
        spit(out + ".witness.json", write_morphism(pair.a, pair.b, pair.witness));
        std::cout << "wrote " << out << ".{a,b}.strips and witness\n";
        return 0;
    }
    throw std::runtime_error("gen needs a subcommand: graph|indepset|matching|positive-pair");
}

int run_bench_cmd(const std::string& corpus, const std::string& kinds_text, double timeout,
                  int jobs, const std::string& csv_path, const std::string& solver_path,
                  std::uint64_t seed) {
    BenchOptions options;
    options.corpus_dir = corpus;
    options.timeout_seconds = timeout;
    options.jobs = jobs;
    options.solver = make_solver_config(solver_path, timeout, seed);
    std::istringstream in(kinds_text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) options.kinds.push_back(parse_kind(item));
    if (options.kinds.empty()) throw std::runtime_error("no kinds given");
    BenchReport report = run_bench(options);
    for (const auto& row : report.rows)
        if (!row.witness_verified)
            throw std::logic_error("bench produced an unverified mapping for pair " + row.pair);
    if (!csv_path.empty())
        spit(csv_path, report.csv());
    else
        std::cout << report.csv();
    std::cout << report.summary();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-preserving mappings between STRIPS instances"};
    app.require_subcommand(1);

    std::string kind_text, a_path, b_path, mapping_path, out_path, stats_path, dimacs_path;
    std::string solver_path, corpus, kinds_text = "ssi", edges, report_path, dot_path;
    std::string gen_out = "out";
    bool no_cp = false, directed = false, layered = false;
    double timeout = 300.0;
    std::uint64_t seed = 0;
    int cap = 15, n = 3, k = 2, edge_prob = -1, fluents = 6, ops = 6, jobs = 1;

    auto add_pair_options = [&](CLI::App* cmd, bool with_kind = true) {
        if (with_kind)
            cmd->add_option("--kind", kind_text, "morphism kind: si|ssih|ssi|se")->required();
        cmd->add_option("A", a_path, "first instance (host for se)")->required();
        cmd->add_option("B", b_path, "second instance (embedded for se)")->required();
    };

    CLI::App* check = app.add_subcommand("check", "decide and construct a morphism");
    add_pair_options(check);
    check->add_flag("--no-cp", no_cp, "skip the propagation phase");
    check->add_option("--timeout", timeout, "time budget in seconds");
    check->add_option("--solver", solver_path, "external SAT solver (DIMACS in, 's/v' lines out)");
    check->add_option("--seed", seed, "solver seed");
    check->add_option("--out", out_path, "write the mapping as JSON");
    check->add_option("--stats", stats_path, "write run statistics as JSON");

    CLI::App* verify = app.add_subcommand("verify", "verify a mapping document");
    add_pair_options(verify);
    verify->add_option("MAPPING", mapping_path, "mapping JSON")->required();

    CLI::App* encode = app.add_subcommand("encode", "emit the DIMACS encoding");
    add_pair_options(encode);
    encode->add_flag("--no-cp", no_cp, "encode under init-only domains");
    encode->add_option("--dimacs", dimacs_path, "output CNF path");
    encode->add_option("--stats", stats_path, "write simplification stats as JSON");

    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive search on small instances");
    add_pair_options(oracle);
    oracle->add_option("--out", out_path, "write the mapping as JSON");
    oracle->add_option("--stats", stats_path, "write run statistics as JSON");

    CLI::App* statespace = app.add_subcommand("statespace", "abstraction checks for an embedding");
    add_pair_options(statespace, false);
    statespace->add_option("MAPPING", mapping_path, "embedding JSON")->required();
    statespace->add_option("--cap", cap, "state-space size cap (fluents)");
    statespace->add_option("--report", report_path, "write the report as JSON");
    statespace->add_option("--dot", dot_path, "write the projected LTS as DOT");

    CLI::App* gen = app.add_subcommand("gen", "deterministic generators");
    gen->require_subcommand(1);
    CLI::App* gen_graph = gen->add_subcommand("graph", "graph-to-STRIPS construction");
    gen_graph->add_option("--n", n, "vertex count");
    gen_graph->add_option("--edges", edges, "comma-separated u-v list");
    gen_graph->add_flag("--directed", directed, "directed graph");
    gen_graph->add_flag("--undirected", [](std::int64_t) {}, "undirected graph (default)");
    gen_graph->add_option("--edge-prob", edge_prob, "random edges, percent");
    gen_graph->add_option("--seed", seed, "random seed");
    gen_graph->add_option("--out", gen_out, "output prefix");
    CLI::App* gen_indepset = gen->add_subcommand("indepset", "independent-set reduction pair");
    gen_indepset->add_option("--n", n, "vertex count");
    gen_indepset->add_option("--edges", edges, "comma-separated u-v list");
    gen_indepset->add_option("--k", k, "independent-set size")->required();
    gen_indepset->add_option("--out", gen_out, "output prefix");
    CLI::App* gen_matching = gen->add_subcommand("matching", "random subgraph-matching pair");
    gen_matching->add_option("--n", n, "vertex count of both graphs");
    gen_matching->add_option("--edge-prob", edge_prob, "edge probability, percent")->required();
    gen_matching->add_option("--seed", seed, "random seed");
    gen_matching->add_option("--out", gen_out, "output prefix");
    CLI::App* gen_pair = gen->add_subcommand("positive-pair", "pair with a guaranteed morphism");
    gen_pair->add_option("--kind", kind_text, "ssi|se")->required();
    gen_pair->add_option("--fluents", fluents, "base instance fluents");
    gen_pair->add_option("--ops", ops, "base instance operators");
    gen_pair->add_flag("--layered", layered, "layered base instance");
    gen_pair->add_option("--seed", seed, "random seed");
    gen_pair->add_option("--out", gen_out, "output prefix");

    CLI::App* bench = app.add_subcommand("bench", "corpus benchmark with and without propagation");
    bench->add_option("--corpus", corpus, "directory of <name>.{a,b}.strips pairs")->required();
    bench->add_option("--kinds", kinds_text, "comma-separated kinds");
    bench->add_option("--timeout", timeout, "per-run time budget in seconds");
    bench->add_option("--jobs", jobs, "worker threads");
    bench->add_option("--csv", stats_path, "CSV output path (default stdout)");
    bench->add_option("--solver", solver_path, "external SAT solver");
    bench->add_option("--seed", seed, "solver seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return run_check(kind_text, a_path, b_path, no_cp, timeout, solver_path, seed,
                             out_path, stats_path, false);
        if (verify->parsed()) return run_verify(kind_text, a_path, b_path, mapping_path);
        if (encode->parsed())
            return run_encode(kind_text, a_path, b_path, no_cp, dimacs_path, stats_path);
        if (oracle->parsed())
            return run_check(kind_text, a_path, b_path, false, timeout, "", seed, out_path,
                             stats_path, true);
        if (statespace->parsed())
            return run_statespace(a_path, b_path, mapping_path, cap, report_path, dot_path);
        if (gen->parsed())
            return run_gen(gen_graph, gen_indepset, gen_matching, gen_pair, n, edges, directed, k,
                           edge_prob, seed, fluents, ops, layered, kind_text, gen_out);
        if (bench->parsed())
            return run_bench_cmd(corpus, kinds_text, timeout, jobs, stats_path, solver_path, seed);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
