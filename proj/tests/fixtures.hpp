#pragma once

#include "stripsmorph/encode.hpp"
#include "stripsmorph/graphs.hpp"
#include "stripsmorph/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fixtures {

using namespace stripsmorph;

// P_ab: F={a,b}, I={a}, G={b}, O={o1=<{a},{b},{a}>}
inline StripsInstance p_ab() {
    return make_instance("p_ab", {"a", "b"}, {"a"}, {"b"}, {{"o1", {"a"}, {"b"}, {"a"}}});
}

// Renamed copy of P_ab.
inline StripsInstance p_xy() {
    return make_instance("p_xy", {"x", "y"}, {"x"}, {"y"}, {{"q1", {"x"}, {"y"}, {"x"}}});
}

// P_xyz: F={x,y,z}, I={x}, G={y}, O={p1=<{x},{y},{x}>, p2=<{y},{z},{}>}
inline StripsInstance p_xyz() {
    return make_instance("p_xyz", {"x", "y", "z"}, {"x"}, {"y"},
                         {{"p1", {"x"}, {"y"}, {"x"}}, {"p2", {"y"}, {"z"}, {}}});
}

// P'_b: F={bp}, I={}, G={bp}, O={q1=<{},{bp},{}>}; embeds in P_ab.
inline StripsInstance p_b_embedded() {
    return make_instance("p_b", {"bp"}, {}, {"bp"}, {{"q1", {}, {"bp"}, {}}});
}

inline Morphism ssi_fixture_morphism() {
    Morphism m;
    m.kind = MorphKind::SSI;
    m.fluent_map = {0, 1}; // a->x, b->y
    m.op_map = {0};        // o1->p1
    return m;
}

inline Morphism se_fixture_morphism() {
    Morphism m;
    m.kind = MorphKind::SE;
    m.fluent_map = {1};  // bp -> b
    m.op_map = {0};      // o1 -> q1
    return m;
}

// Independent re-check of the morphism conditions, written directly from the
// definitions over element sets; deliberately separate from verify_morphism.
inline bool independent_morphism_check(const StripsInstance& p, const StripsInstance& p2,
                                       const Morphism& m) {
    auto image_set = [](const Bitset& src, const std::vector<std::optional<int>>& fmap,
                        int size) -> std::optional<Bitset> {
        Bitset out(size);
        for (int f = src.next(); f != -1; f = src.next(f + 1)) {
            if (!fmap[f]) return std::nullopt;
            out.set(*fmap[f]);
        }
        return out;
    };
    if (m.kind == MorphKind::SE) {
        if (static_cast<int>(m.fluent_map.size()) != p2.fluent_count()) return false;
        if (static_cast<int>(m.op_map.size()) != p.operator_count()) return false;
        std::vector<char> hit(p.fluent_count(), 0);
        Bitset image(p.fluent_count());
        for (auto& t : m.fluent_map) {
            if (!t) continue;
            if (hit[*t]) return false; // injectivity
            hit[*t] = 1;
            image.set(*t);
        }
        for (int o = 0; o < p.operator_count(); ++o) {
            const Operator& host = p.operators[o];
            if (!(host.add & image).any() && !(host.del & image).any()) continue;
            if (!m.op_map[o]) return false;
            const Operator& emb = p2.operators[*m.op_map[o]];
            auto add_img = image_set(emb.add, m.fluent_map, p.fluent_count());
            auto del_img = image_set(emb.del, m.fluent_map, p.fluent_count());
            auto pre_img = image_set(emb.pre, m.fluent_map, p.fluent_count());
            if (!add_img || !del_img || !pre_img) return false;
            if (*add_img != (host.add & image)) return false;
            if (*del_img != (host.del & image)) return false;
            if (!pre_img->is_subset_of(host.pre & image)) return false;
        }
        for (int f = p2.goal.next(); f != -1; f = p2.goal.next(f + 1)) {
            if (!m.fluent_map[f] || !p.goal.test(*m.fluent_map[f])) return false;
        }
        Bitset init_img(p.fluent_count());
        for (int f = p2.init.next(); f != -1; f = p2.init.next(f + 1))
            if (m.fluent_map[f]) init_img.set(*m.fluent_map[f]);
        if (!(p.init & image).is_subset_of(init_img)) return false;
        return true;
    }

    if (static_cast<int>(m.fluent_map.size()) != p.fluent_count()) return false;
    if (static_cast<int>(m.op_map.size()) != p.operator_count()) return false;
    std::vector<char> fhit(p2.fluent_count(), 0), ohit(p2.operator_count(), 0);
    for (auto& t : m.fluent_map) {
        if (!t) return false;
        if (fhit[*t]) return false;
        fhit[*t] = 1;
    }
    for (auto& t : m.op_map) {
        if (!t) return false;
        if (ohit[*t]) return false; // operator-map injectivity, per the search semantics
        ohit[*t] = 1;
    }
    for (int o = 0; o < p.operator_count(); ++o) {
        const Operator& src = p.operators[o];
        const Operator& dst = p2.operators[*m.op_map[o]];
        auto pre = image_set(src.pre, m.fluent_map, p2.fluent_count());
        auto add = image_set(src.add, m.fluent_map, p2.fluent_count());
        auto del = image_set(src.del, m.fluent_map, p2.fluent_count());
        if (*pre != dst.pre || *add != dst.add || *del != dst.del) return false;
    }
    if (m.kind == MorphKind::SI || m.kind == MorphKind::SSI) {
        auto init = image_set(p.init, m.fluent_map, p2.fluent_count());
        auto goal = image_set(p.goal, m.fluent_map, p2.fluent_count());
        if (*init != p2.init || *goal != p2.goal) return false;
    }
    if (m.kind == MorphKind::SI) {
        if (p.fluent_count() != p2.fluent_count()) return false;
        if (p.operator_count() != p2.operator_count()) return false;
    }
    return true;
}

// Truth-table reference for small formulas.
inline std::optional<std::vector<bool>> truth_table_sat(const CnfFormula& formula) {
    const int n = formula.num_vars;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        bool ok = true;
        for (const auto& clause : formula.clauses) {
            bool sat = false;
            for (int lit : clause) {
                int var = lit > 0 ? lit - 1 : -lit - 1;
                bool val = (bits >> var) & 1;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::vector<bool> model(n);
            for (int v = 0; v < n; ++v) model[v] = (bits >> v) & 1;
            return model;
        }
    }
    return std::nullopt;
}

// Injective monomorphism between undirected graphs: edges of g1 map to edges
// of g2. The SSI decision over the path-finding encoding matches it exactly
// when the two graphs have the same number of vertices.
inline bool subgraph_monomorphism_exists(const Graph& g1, const Graph& g2) {
    const int n1 = g1.vertex_count(), n2 = g2.vertex_count();
    if (n1 > n2) return false;
    std::vector<int> map(n1, -1);
    std::vector<char> used(n2, 0);
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == n1) {
            for (auto [a, b] : g1.edges)
                if (!g2.has_edge(map[a], map[b])) return false;
            return true;
        }
        for (int t = 0; t < n2; ++t) {
            if (used[t]) continue;
            used[t] = 1;
            map[v] = t;
            if (rec(v + 1)) return true;
            used[t] = 0;
        }
        return false;
    };
    return rec(0);
}

inline bool independent_set_exists(const Graph& g, int k) {
    const int n = g.vertex_count();
    std::vector<int> pick;
    std::function<bool(int)> rec = [&](int from) -> bool {
        if (static_cast<int>(pick.size()) == k) return true;
        for (int v = from; v < n; ++v) {
            bool ok = true;
            for (int u : pick)
                if (g.has_edge(u, v)) ok = false;
            if (!ok) continue;
            pick.push_back(v);
            if (rec(v + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    return rec(0);
}

} // namespace fixtures
