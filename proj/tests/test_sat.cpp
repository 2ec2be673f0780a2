#include "fixtures.hpp"
#include "stripsmorph/generate.hpp"
#include "stripsmorph/sat.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace stripsmorph;
using namespace fixtures;

namespace {

CnfFormula formula_of(int vars, std::vector<std::vector<int>> clauses) {
    CnfFormula f;
    f.num_vars = vars;
    f.clauses = std::move(clauses);
    return f;
}

CnfFormula random_formula(Rng& rng, int max_vars, int max_clauses) {
    int vars = 1 + rng.below(max_vars);
    int clauses = rng.below(max_clauses + 1);
    CnfFormula f;
    f.num_vars = vars;
    for (int c = 0; c < clauses; ++c) {
        int len = 1 + rng.below(3);
        std::vector<int> clause;
        for (int l = 0; l < len; ++l) {
            int var = 1 + rng.below(vars);
            clause.push_back(rng.chance(50) ? var : -var);
        }
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

} // namespace

TEST_CASE("trivial formulas") {
    SolverConfig cfg;
    auto sat = solve(formula_of(1, {{1}}), cfg);
    REQUIRE(sat.kind == SolveResult::Kind::Sat);
    CHECK(sat.model == Assignment{true});

    CHECK(solve(formula_of(1, {{1}, {-1}}), cfg).kind == SolveResult::Kind::Unsat);
    CHECK(solve(formula_of(0, {}), cfg).kind == SolveResult::Kind::Sat);
    CHECK(solve(formula_of(2, {{}}), cfg).kind == SolveResult::Kind::Unsat);
}

TEST_CASE("check_model") {
    CHECK(check_model(formula_of(2, {{1, 2}}), {false, true}));
    CHECK_FALSE(check_model(formula_of(1, {{1}}), {false}));
    CHECK(check_model(formula_of(0, {}), {}));
}

TEST_CASE("solver agrees with truth tables on random formulas") {
    Rng rng(97);
    SolverConfig cfg;
    for (int round = 0; round < 500; ++round) {
        CnfFormula f = random_formula(rng, 12, 30);
        auto reference = truth_table_sat(f);
        auto result = solve(f, cfg);
        if (reference) {
            REQUIRE(result.kind == SolveResult::Kind::Sat);
            CHECK(check_model(f, result.model));
        } else {
            CHECK(result.kind == SolveResult::Kind::Unsat);
        }
    }
}

TEST_CASE("solver handles a pigeonhole instance") {
    // 4 pigeons, 3 holes: var p*3+h+1 means pigeon p sits in hole h.
    CnfFormula f;
    f.num_vars = 12;
    for (int p = 0; p < 4; ++p) {
        f.clauses.push_back({p * 3 + 1, p * 3 + 2, p * 3 + 3});
        for (int h1 = 0; h1 < 3; ++h1)
            for (int h2 = h1 + 1; h2 < 3; ++h2)
                f.clauses.push_back({-(p * 3 + h1 + 1), -(p * 3 + h2 + 1)});
    }
    for (int h = 0; h < 3; ++h)
        for (int p1 = 0; p1 < 4; ++p1)
            for (int p2 = p1 + 1; p2 < 4; ++p2)
                f.clauses.push_back({-(p1 * 3 + h + 1), -(p2 * 3 + h + 1)});
    SolverConfig cfg;
    CHECK(solve(f, cfg).kind == SolveResult::Kind::Unsat);
}

TEST_CASE("determinism for a fixed seed") {
    Rng rng(131);
    SolverConfig a, b;
    a.seed = b.seed = 7;
    for (int round = 0; round < 50; ++round) {
        CnfFormula f = random_formula(rng, 14, 40);
        auto r1 = solve(f, a);
        auto r2 = solve(f, b);
        CHECK(r1.kind == r2.kind);
        if (r1.kind == SolveResult::Kind::Sat) CHECK(r1.model == r2.model);
    }
}

TEST_CASE("external solver client parses competition output") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("strips-morph-extsolver-" +
                                                std::to_string(::getpid()));
    fs::create_directories(dir);
    auto script = [&](const std::string& name, const std::string& body) {
        fs::path path = dir / name;
        std::ofstream out(path);
        out << "#!/bin/sh\n" << body;
        out.close();
        fs::permissions(path, fs::perms::owner_all);
        return path.string();
    };

    SolverConfig cfg;
    cfg.backend = SolverConfig::Backend::External;

    cfg.external_path = script("sat.sh", "echo 's SATISFIABLE'\necho 'v 1 0'\n");
    auto sat = solve(formula_of(1, {{1}}), cfg);
    REQUIRE(sat.kind == SolveResult::Kind::Sat);
    CHECK(sat.model == Assignment{true});

    cfg.external_path = script("unsat.sh", "echo 's UNSATISFIABLE'\n");
    CHECK(solve(formula_of(1, {{1}, {-1}}), cfg).kind == SolveResult::Kind::Unsat);

    cfg.external_path = script("garbage.sh", "echo 'hello'\n");
    CHECK_THROWS_AS(solve(formula_of(1, {{1}}), cfg), ExternalSolverFailure);

    cfg.external_path = script("liar.sh", "echo 's SATISFIABLE'\necho 'v -1 0'\n");
    CHECK_THROWS_AS(solve(formula_of(1, {{1}}), cfg), ExternalSolverFailure);

    fs::remove_all(dir);
}

namespace {

// n+1 pigeons into n holes; refutations need far more conflicts than the
// first budget check, so a tiny budget reliably trips the timeout.
CnfFormula pigeonhole(int holes) {
    int pigeons = holes + 1;
    CnfFormula f;
    f.num_vars = pigeons * holes;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    for (int p = 0; p < pigeons; ++p) {
        std::vector<int> somewhere;
        for (int h = 0; h < holes; ++h) somewhere.push_back(var(p, h));
        f.clauses.push_back(std::move(somewhere));
    }
    for (int h = 0; h < holes; ++h)
        for (int p1 = 0; p1 < pigeons; ++p1)
            for (int p2 = p1 + 1; p2 < pigeons; ++p2)
                f.clauses.push_back({-var(p1, h), -var(p2, h)});
    return f;
}

} // namespace

TEST_CASE("cooperative timeout returns Timeout with partial statistics") {
    CnfFormula f = pigeonhole(9);
    SolverConfig cfg;
    cfg.timeout_seconds = 1e-7;
    auto result = solve(f, cfg);
    REQUIRE(result.kind == SolveResult::Kind::Timeout);
    CHECK(result.stats.conflicts > 0);
    CHECK(result.stats.decisions > 0);

    CHECK_THROWS_AS(([&] {
                        SolverConfig bad;
                        bad.timeout_seconds = 0;
                        solve(f, bad);
                    }()),
                    std::invalid_argument);

    // With a real budget the same formula refutes.
    cfg.timeout_seconds = 120;
    CHECK(solve(pigeonhole(6), cfg).kind == SolveResult::Kind::Unsat);
}
