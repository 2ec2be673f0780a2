#include "fixtures.hpp"
#include "stripsmorph/encode.hpp"
#include "stripsmorph/generate.hpp"
#include "stripsmorph/graphs.hpp"
#include "stripsmorph/sat.hpp"
#include "stripsmorph/search.hpp"
#include "stripsmorph/textio.hpp"

#include <doctest.h>

using namespace stripsmorph;
using namespace fixtures;

TEST_CASE("SSI fixture encodes to unit images over singleton domains") {
    StripsInstance p = p_ab(), q = p_xyz();
    auto dt = ac3(p, q, MorphKind::SSI);
    REQUIRE(dt.has_value());
    CnfFormula f = encode_cnf(p, q, *dt, MorphKind::SSI);
    CHECK(f.num_vars == 3); // f_a^x, f_b^y, o_o1^p1
    int units = 0;
    for (const auto& clause : f.clauses)
        if (clause.size() == 1 && clause[0] > 0) ++units;
    CHECK(units == 5); // three image clauses plus init/goal preimage units
    auto model = truth_table_sat(f);
    REQUIRE(model.has_value());
    Morphism m = decode_model(f.catalog, *model);
    CHECK(verify_morphism(p, q, m).valid());
}

TEST_CASE("SSI-H identity pair admits exactly the identity model") {
    StripsInstance p = p_ab(), q = p_ab();
    DomainTable dt = init_domains(p, q, MorphKind::SSIH);
    CnfFormula f = encode_cnf(p, q, dt, MorphKind::SSIH);
    CHECK(f.num_vars == 5); // 4 fluent pairs + 1 operator pair
    int models = 0;
    Morphism only;
    for (std::uint64_t bits = 0; bits < (1u << f.num_vars); ++bits) {
        std::vector<bool> a(f.num_vars);
        for (int v = 0; v < f.num_vars; ++v) a[v] = (bits >> v) & 1;
        if (check_model(f, a)) {
            ++models;
            only = decode_model(f.catalog, a);
        }
    }
    CHECK(models == 1);
    CHECK(only.fluent_map == std::vector<std::optional<int>>{0, 1});
}

TEST_CASE("SE encodings decide the independent-set fixtures") {
    Graph g;
    g.vertex_names = {"v1", "v2", "v3"};
    g.edges = {{0, 1}};
    auto [p, p2] = reduce_independent_set(g, 2);
    DomainTable dt = init_domains(p, p2, MorphKind::SE);
    CnfFormula sat_formula = encode_cnf(p, p2, dt, MorphKind::SE);
    CHECK(truth_table_sat(sat_formula).has_value());

    auto [p3, p4] = reduce_independent_set(g, 3);
    DomainTable dt2 = init_domains(p3, p4, MorphKind::SE);
    CnfFormula unsat_formula = encode_cnf(p3, p4, dt2, MorphKind::SE);
    CHECK_FALSE(truth_table_sat(unsat_formula).has_value());
}

TEST_CASE("every model decodes to a verified morphism (small exhaustive)") {
    Rng rng(41);
    int covered = 0;
    while (covered < 40) {
        RandomInstanceOptions o1, o2;
        o1.fluents = 1 + rng.below(3);
        o1.ops = rng.below(3);
        o2.fluents = 1 + rng.below(4);
        o2.ops = rng.below(4);
        StripsInstance a = random_instance(o1, rng, "a");
        StripsInstance b = random_instance(o2, rng, "b");
        for (MorphKind kind : {MorphKind::SI, MorphKind::SSIH, MorphKind::SSI, MorphKind::SE}) {
            if (kind == MorphKind::SI &&
                (a.fluent_count() != b.fluent_count() || a.operator_count() != b.operator_count()))
                continue;
            if (kind == MorphKind::SE && b.fluent_count() > a.fluent_count()) continue;
            if (kind != MorphKind::SE && a.fluent_count() > b.fluent_count()) continue;
            DomainTable dt = init_domains(a, b, kind);
            CnfFormula f = encode_cnf(a, b, dt, kind);
            if (f.num_vars > 14) continue;
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
                std::vector<bool> assignment(f.num_vars);
                for (int v = 0; v < f.num_vars; ++v) assignment[v] = (bits >> v) & 1;
                if (!check_model(f, assignment)) continue;
                Morphism m = decode_model(f.catalog, assignment);
                CHECK(verify_morphism(a, b, m).valid());
            }
            ++covered;
        }
    }
}

TEST_CASE("clause count stays within the quartic bound") {
    Rng rng(43);
    for (int round = 0; round < 20; ++round) {
        RandomInstanceOptions opts;
        opts.fluents = 2 + rng.below(5);
        opts.ops = 1 + rng.below(5);
        StripsInstance a = random_instance(opts, rng, "a");
        opts.fluents += rng.below(3);
        opts.ops += rng.below(3);
        StripsInstance b = random_instance(opts, rng, "b");
        long bound = 8L * (a.operator_count() + 1) * (b.operator_count() + 1) *
                     (a.fluent_count() + 1) * (b.fluent_count() + 1);
        for (MorphKind kind : {MorphKind::SSIH, MorphKind::SSI, MorphKind::SE}) {
            DomainTable dt = init_domains(a, b, kind);
            CnfFormula f = encode_cnf(a, b, dt, kind);
            CHECK(static_cast<long>(f.clauses.size()) <= bound);
        }
    }
}

TEST_CASE("simplification stats") {
    StripsInstance p = p_ab(), q = p_xyz();
    DomainTable init = init_domains(p, q, MorphKind::SSI);
    SimplificationStats zero = simplification_stats(p, q, init, MorphKind::SSI);
    CHECK(zero.fraction == doctest::Approx(0.0));

    SimplificationStats early = simplification_stats(p, q, std::nullopt, MorphKind::SSI);
    CHECK(early.early_unsat);
    CHECK(early.fraction == doctest::Approx(1.0));

    auto dt = ac3(p, q, MorphKind::SSI);
    REQUIRE(dt.has_value());
    SimplificationStats pruned = simplification_stats(p, q, dt, MorphKind::SSI);
    CHECK(pruned.fraction >= 0.0);
    CHECK(pruned.fraction <= 1.0);
    CHECK(pruned.clauses <= pruned.clauses_baseline);
}

TEST_CASE("pruning never changes satisfiability on small pairs") {
    Rng rng(47);
    int covered = 0;
    while (covered < 30) {
        RandomInstanceOptions opts;
        opts.fluents = 1 + rng.below(4);
        opts.ops = rng.below(4);
        StripsInstance a = random_instance(opts, rng, "a");
        opts.fluents += rng.below(2);
        StripsInstance b = random_instance(opts, rng, "b");
        for (MorphKind kind : {MorphKind::SSIH, MorphKind::SSI, MorphKind::SE}) {
            if (kind == MorphKind::SE && b.fluent_count() > a.fluent_count()) continue;
            if (kind != MorphKind::SE && a.fluent_count() > b.fluent_count()) continue;
            auto dt = ac3(a, b, kind);
            DomainTable init = init_domains(a, b, kind);
            CnfFormula base = encode_cnf(a, b, init, kind);
            bool base_sat = truth_table_sat(base).has_value();
            if (base.num_vars > 16) continue;
            if (!dt) {
                CHECK_FALSE(base_sat);
            } else {
                CnfFormula pruned = encode_cnf(a, b, *dt, kind);
                CHECK(truth_table_sat(pruned).has_value() == base_sat);
            }
            ++covered;
        }
    }
}

TEST_CASE("decode_model rejects double images") {
    StripsInstance p = p_ab(), q = p_ab();
    DomainTable dt = init_domains(p, q, MorphKind::SSIH);
    CnfFormula f = encode_cnf(p, q, dt, MorphKind::SSIH);
    std::vector<bool> all_true(f.num_vars, true);
    CHECK_THROWS_AS(decode_model(f.catalog, all_true), MalformedModel);
}

TEST_CASE("variable catalog ordering is the documented one") {
    // Association variables come first in domain order, then operator
    // associations, then usefulness and activity variables.
    StripsInstance host = p_ab(), emb = p_b_embedded();
    DomainTable dt = init_domains(host, emb, MorphKind::SE);
    CnfFormula f = encode_cnf(host, emb, dt, MorphKind::SE);
    int last_tag = -1;
    for (int id = 0; id < f.catalog.size(); ++id) {
        int tag = static_cast<int>(f.catalog.var(id).tag);
        CHECK(tag >= last_tag);
        last_tag = tag;
    }
    // bp -> b is the only fluent pair; o1 -> q1 the only operator pair; both
    // host fluents are undecided at init, and o1 gets an activity variable.
    REQUIRE(f.catalog.size() == 5);
    CHECK(f.catalog.var(0).tag == VarTag::FAssoc);
    CHECK(f.catalog.var(0).a == 1); // host fluent b
    CHECK(f.catalog.var(0).b == 0); // embedded fluent bp
    CHECK(f.catalog.var(1).tag == VarTag::OAssoc);
    CHECK(f.catalog.var(2).tag == VarTag::FUseful);
    CHECK(f.catalog.var(4).tag == VarTag::OActive);

    StripsInstance a = p_ab(), b = p_xyz();
    DomainTable ssi = init_domains(a, b, MorphKind::SSI);
    CnfFormula g = encode_cnf(a, b, ssi, MorphKind::SSI);
    REQUIRE(g.catalog.size() == 3);
    CHECK(g.catalog.var(0).tag == VarTag::FAssoc); // f_a^x
    CHECK(g.catalog.var(1).tag == VarTag::FAssoc); // f_b^y
    CHECK(g.catalog.var(2).tag == VarTag::OAssoc); // o_o1^p1
}

TEST_CASE("DIMACS output is a pure function of the inputs") {
    StripsInstance a = p_ab(), b = p_xyz();
    auto dt1 = ac3(a, b, MorphKind::SSI);
    auto dt2 = ac3(a, b, MorphKind::SSI);
    REQUIRE(dt1.has_value());
    REQUIRE(dt2.has_value());
    CHECK(write_dimacs(encode_cnf(a, b, *dt1, MorphKind::SSI)) ==
          write_dimacs(encode_cnf(a, b, *dt2, MorphKind::SSI)));
}
