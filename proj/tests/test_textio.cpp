#include "fixtures.hpp"
#include "stripsmorph/encode.hpp"
#include "stripsmorph/generate.hpp"
#include "stripsmorph/graphs.hpp"
#include "stripsmorph/textio.hpp"

#include <doctest.h>

using namespace stripsmorph;
using namespace fixtures;

TEST_CASE("parse_instance reads the P_ab document") {
    const char* doc =
        "# path fixture\n"
        "instance p_ab\n"
        "fluents a b\n"
        "init a\n"
        "goal b\n"
        "op o1\n"
        "pre a\n"
        "add b\n"
        "del a\n"
        "end\n";
    StripsInstance p = parse_instance(doc);
    CHECK(p.fluent_count() == 2);
    CHECK(p.operator_count() == 1);
    CHECK(p.init.test(p.fluent_id("a")));
    CHECK(p.goal.test(p.fluent_id("b")));
    CHECK(write_instance(p) == write_instance(p_ab()));
}

TEST_CASE("parse_instance error reporting") {
    CHECK_THROWS_AS(parse_instance("fluents a\ninit q\n"), ParseError);
    try {
        parse_instance("fluents a\ninit q\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::UnknownFluent);
        CHECK(e.line == 2);
    }
    try {
        parse_instance("fluents a a\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::DuplicateName);
    }
    try {
        parse_instance("fluents b\nop o\nadd b\ndel b\nend\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::InconsistentEffect);
    }
    CHECK_THROWS_AS(parse_instance("fluents a!\n"), ParseError);
    CHECK_THROWS_AS(parse_instance("fluents a\nop o\npre a\n"), ParseError); // missing end
}

TEST_CASE("instance round-trips") {
    for (auto& p : {p_ab(), p_xy(), p_xyz(), p_b_embedded()}) {
        std::string text = write_instance(p);
        StripsInstance back = parse_instance(text);
        CHECK(write_instance(back) == text);
        CHECK(back.fluent_names == p.fluent_names);
        CHECK(back.init == p.init);
        CHECK(back.goal == p.goal);
        REQUIRE(back.operator_count() == p.operator_count());
        for (int o = 0; o < p.operator_count(); ++o) {
            CHECK(back.operators[o].name == p.operators[o].name);
            CHECK(back.operators[o].pre == p.operators[o].pre);
            CHECK(back.operators[o].add == p.operators[o].add);
            CHECK(back.operators[o].del == p.operators[o].del);
        }
    }
}

TEST_CASE("instance round-trip on random instances") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        RandomInstanceOptions opts;
        opts.fluents = 1 + rng.below(8);
        opts.ops = rng.below(8);
        StripsInstance p = random_instance(opts, rng);
        StripsInstance back = parse_instance(write_instance(p));
        CHECK(write_instance(back) == write_instance(p));
    }
}

TEST_CASE("parsers fail cleanly on token soup") {
    Rng rng(29);
    const char* words[] = {"fluents", "init", "goal", "op", "pre", "add", "del",
                           "end",     "a",    "b",    "#x", "1",   "edge", "vertex"};
    for (int round = 0; round < 300; ++round) {
        std::string doc;
        int lines = rng.below(12);
        for (int l = 0; l < lines; ++l) {
            int tokens = rng.below(4);
            for (int t = 0; t <= tokens; ++t) {
                doc += words[rng.below(static_cast<int>(std::size(words)))];
                doc += ' ';
            }
            doc += '\n';
        }
        try {
            StripsInstance p = parse_instance(doc);
            validate(p);
        } catch (const ParseError&) {
        }
        try {
            (void)parse_graph(doc);
        } catch (const ParseError&) {
        }
    }
}

TEST_CASE("graph documents") {
    Graph g = parse_graph("undirected\nedge 1 2\n");
    CHECK(g.vertex_count() == 2);
    CHECK(g.edges.size() == 1);
    CHECK_FALSE(g.directed);

    Graph h = parse_graph("directed\nvertex a\nedge b c\n");
    CHECK(h.vertex_count() == 3);
    CHECK(h.directed);

    CHECK_THROWS_AS(parse_graph(""), ParseError);
    CHECK_THROWS_AS(parse_graph("undirected\nedge 1 2\nedge 2 1\n"), ParseError);

    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        Graph r = random_graph(1 + rng.below(6), 40, rng.chance(50), rng);
        Graph back = parse_graph(write_graph(r));
        CHECK(write_graph(back) == write_graph(r));
        CHECK(back.edges == r.edges);
    }
}

TEST_CASE("morphism documents round-trip") {
    StripsInstance p = p_ab(), q = p_xyz();
    Morphism m = ssi_fixture_morphism();
    std::string text = write_morphism(p, q, m);
    Morphism back = parse_morphism(p, q, text);
    CHECK(back.kind == m.kind);
    CHECK(back.fluent_map == m.fluent_map);
    CHECK(back.op_map == m.op_map);

    StripsInstance host = p_ab(), emb = p_b_embedded();
    Morphism se = se_fixture_morphism();
    Morphism se_back = parse_morphism(host, emb, write_morphism(host, emb, se));
    CHECK(se_back.fluent_map == se.fluent_map);
    CHECK(se_back.op_map == se.op_map);

    CHECK_THROWS_AS(parse_morphism(p, q, "{\"kind\":\"ssi\",\"fluent_map\":{\"zz\":\"x\"}}"),
                    ParseError);
    CHECK_THROWS_AS(parse_morphism(p, q, "not json"), ParseError);
}

TEST_CASE("DIMACS output matches the format exactly") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1}, {-1, 2}};
    CHECK(write_dimacs(f) == "p cnf 2 2\n1 0\n-1 2 0\n");

    CnfFormula empty;
    CHECK(write_dimacs(empty) == "p cnf 0 0\n");
}

TEST_CASE("model parsing") {
    auto a = parse_model("c comment\ns SATISFIABLE\nv 1 -2 0\n", 2);
    CHECK(a == std::vector<bool>{true, false});
    auto b = parse_model("v 1\nv -2 3\nv 0\n", 3);
    CHECK(b == std::vector<bool>{true, false, true});
    CHECK_THROWS_AS(parse_model("s SATISFIABLE\n", 1), ParseError);
    CHECK_THROWS_AS(parse_model("v 99 0\n", 2), ParseError);
}
