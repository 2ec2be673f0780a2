#include "fixtures.hpp"
#include "stripsmorph/generate.hpp"
#include "stripsmorph/search.hpp"
#include "stripsmorph/statespace.hpp"

#include <doctest.h>

using namespace stripsmorph;
using namespace fixtures;

TEST_CASE("find_morphism on the fixtures") {
    StripsInstance p = p_ab(), q = p_xyz();
    FindResult r = find_morphism(p, q, MorphKind::SSI);
    REQUIRE(r.outcome == FindResult::Outcome::Found);
    CHECK(r.morphism->fluent_map == std::vector<std::optional<int>>{0, 1});
    CHECK(verify_morphism(p, q, *r.morphism).valid());

    StripsInstance empty_goal = make_instance("eg", {"a", "b"}, {"a"}, {},
                                              {{"o1", {"a"}, {"b"}, {"a"}}});
    FindResult none = find_morphism(p, empty_goal, MorphKind::SSI);
    CHECK(none.outcome == FindResult::Outcome::NoMorphism);
    CHECK(none.stats.early_unsat);
    CHECK(none.stats.simplified_fraction == doctest::Approx(1.0));

    Graph g;
    g.vertex_names = {"v1", "v2", "v3"};
    g.edges = {{0, 1}};
    auto [ph, pe] = reduce_independent_set(g, 3);
    CHECK(find_morphism(ph, pe, MorphKind::SE).outcome == FindResult::Outcome::NoMorphism);
    auto [ph2, pe2] = reduce_independent_set(g, 2);
    FindResult se = find_morphism(ph2, pe2, MorphKind::SE);
    REQUIRE(se.outcome == FindResult::Outcome::Found);
    CHECK(verify_morphism(ph2, pe2, *se.morphism).valid());
}

TEST_CASE("brute_force on the fixtures") {
    CHECK(brute_force(p_ab(), p_xy(), MorphKind::SI).has_value());
    CHECK_FALSE(brute_force(p_xyz(), p_ab(), MorphKind::SSI).has_value());
    auto se = brute_force(p_ab(), p_b_embedded(), MorphKind::SE);
    REQUIRE(se.has_value());
    CHECK(se->fluent_map == std::vector<std::optional<int>>{1});
    CHECK(verify_morphism(p_ab(), p_b_embedded(), *se).valid());

    RandomInstanceOptions big;
    big.fluents = 9;
    Rng rng(3);
    StripsInstance large = random_instance(big, rng);
    CHECK_THROWS_AS(brute_force(large, large, MorphKind::SSI), TooLarge);
}

TEST_CASE("find_morphism agrees with brute_force on random pairs") {
    Rng rng(61);
    int rounds = 0;
    while (rounds < 120) {
        RandomInstanceOptions opts;
        opts.fluents = 1 + rng.below(4);
        opts.ops = rng.below(4);
        StripsInstance a = random_instance(opts, rng, "a");
        opts.fluents = 1 + rng.below(5);
        opts.ops = rng.below(5);
        StripsInstance b = random_instance(opts, rng, "b");
        for (MorphKind kind : {MorphKind::SI, MorphKind::SSIH, MorphKind::SSI, MorphKind::SE}) {
            auto oracle = brute_force(a, b, kind);
            for (bool cp : {true, false}) {
                FindConfig cfg;
                cfg.use_cp = cp;
                FindResult r = find_morphism(a, b, kind, cfg);
                CHECK(r.outcome != FindResult::Outcome::Timeout);
                CHECK((r.outcome == FindResult::Outcome::Found) == oracle.has_value());
                if (r.morphism) CHECK(verify_morphism(a, b, *r.morphism).valid());
                if (r.morphism && kind == MorphKind::SI) {
                    // Bijectivity: the inverse is an isomorphism back.
                    Morphism inv;
                    inv.kind = MorphKind::SI;
                    inv.fluent_map.assign(b.fluent_count(), std::nullopt);
                    inv.op_map.assign(b.operator_count(), std::nullopt);
                    for (std::size_t f = 0; f < r.morphism->fluent_map.size(); ++f)
                        inv.fluent_map[*r.morphism->fluent_map[f]] = static_cast<int>(f);
                    for (std::size_t o = 0; o < r.morphism->op_map.size(); ++o)
                        inv.op_map[*r.morphism->op_map[o]] = static_cast<int>(o);
                    CHECK(verify_morphism(b, a, inv).valid());
                }
            }
        }
        ++rounds;
    }
}

TEST_CASE("embedding_from_ssi") {
    StripsInstance p = p_ab(), q = p_xyz();
    Morphism ssi = ssi_fixture_morphism();
    Morphism se = embedding_from_ssi(p, q, ssi);
    CHECK(se.kind == MorphKind::SE);
    // Fluent map is the inverse on the image: x->a, y->b, z unmapped.
    CHECK(se.fluent_map == std::vector<std::optional<int>>{0, 1, std::nullopt});
    CHECK(se.op_map == std::vector<std::optional<int>>{0});
    CHECK(verify_morphism(p, q, se).valid());

    // Identity subinstance isomorphism gives the identity embedding.
    Morphism id;
    id.kind = MorphKind::SSI;
    id.fluent_map = {0, 1};
    id.op_map = {0};
    Morphism ide = embedding_from_ssi(p, p_ab(), id);
    CHECK(ide.fluent_map == std::vector<std::optional<int>>{0, 1});
    CHECK(verify_morphism(p, p_ab(), ide).valid());

    Morphism broken = ssi;
    broken.fluent_map = {0, 0};
    CHECK_THROWS_AS(embedding_from_ssi(p, q, broken), InvalidInput);
}

TEST_CASE("embedding_from_ssi output verifies on oracle-positive pairs") {
    Rng rng(67);
    int positives = 0;
    for (int round = 0; round < 300 && positives < 25; ++round) {
        RandomInstanceOptions opts;
        opts.fluents = 1 + rng.below(4);
        opts.ops = rng.below(4);
        PositivePair pair = positive_pair_ssi(opts, rng);
        if (pair.a.fluent_count() > 8 || pair.b.fluent_count() > 8 ||
            pair.a.operator_count() > 8 || pair.b.operator_count() > 8)
            continue;
        auto ssi = brute_force(pair.a, pair.b, MorphKind::SSI);
        if (!ssi || pair.a.fluent_count() == 0) continue;
        Morphism se = embedding_from_ssi(pair.a, pair.b, *ssi);
        CHECK(verify_morphism(pair.a, pair.b, se).valid());
        ++positives;
    }
    CHECK(positives >= 10);
}

TEST_CASE("plan transfer along oracle-positive subinstance isomorphisms") {
    Rng rng(71);
    int transferred = 0;
    for (int round = 0; round < 400 && transferred < 20; ++round) {
        RandomInstanceOptions opts;
        opts.fluents = 2 + rng.below(3);
        opts.ops = 1 + rng.below(4);
        PositivePair pair = positive_pair_ssi(opts, rng);
        if (pair.a.fluent_count() > 8 || pair.b.fluent_count() > 8 ||
            pair.a.operator_count() > 8 || pair.b.operator_count() > 8)
            continue;
        auto ssi = brute_force(pair.a, pair.b, MorphKind::SSI);
        if (!ssi) continue;
        auto plan = find_solution_plan(pair.a);
        if (!plan) continue;
        REQUIRE(validate_plan(pair.a, *plan, true));
        Plan image = translate_plan(pair.a, pair.b, *ssi, *plan);
        CHECK(validate_plan(pair.b, image, true));
        ++transferred;
    }
    CHECK(transferred >= 5);
}

TEST_CASE("stats serialization") {
    RunStats stats;
    stats.clauses = 10;
    stats.clauses_baseline = 20;
    stats.simplified_fraction = 0.5;
    std::string json = stats.to_json(MorphKind::SSI, "found");
    CHECK(json.find("\"kind\": \"ssi\"") != std::string::npos);
    CHECK(json.find("\"result\": \"found\"") != std::string::npos);
    std::string table = stats.to_table(MorphKind::SSI, "found");
    CHECK(table.find("ssi") != std::string::npos);
}
