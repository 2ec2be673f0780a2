#include "stripsmorph/graphs.hpp"

#include <set>

namespace stripsmorph {

int Graph::vertex_id(const std::string& n) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (vertex_names[i] == n) return i;
    return -1;
}

bool Graph::has_edge(int u, int v) const {
    if (!directed && u > v) std::swap(u, v);
    for (const auto& [a, b] : edges)
        if (a == u && b == v) return true;
    return false;
}

void validate(const Graph& graph) {
    std::set<std::string> names(graph.vertex_names.begin(), graph.vertex_names.end());
    if (static_cast<int>(names.size()) != graph.vertex_count())
        throw ValidationError("duplicate vertex names");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : graph.edges) {
        if (u < 0 || v < 0 || u >= graph.vertex_count() || v >= graph.vertex_count())
            throw ValidationError("edge endpoint out of range");
        if (!graph.directed && u > v) std::swap(u, v);
        if (!seen.emplace(u, v).second) throw ValidationError("duplicate edge");
    }
}

namespace {

Operator move_operator(const Graph& g, int s, int t) {
    const int n = g.vertex_count();
    Operator op;
    op.name = "move(" + g.vertex_names[s] + "," + g.vertex_names[t] + ")";
    op.pre = Bitset(n);
    op.pre.set(s);
    op.add = Bitset(n);
    op.add.set(t);
    op.del = Bitset(n, true);
    op.del.reset(t);
    return op;
}

} // namespace

StripsInstance encode_graph(const Graph& graph) {
    validate(graph);
    StripsInstance out;
    out.name = "graph";
    out.fluent_names = graph.vertex_names;
    out.init = Bitset(graph.vertex_count());
    out.goal = Bitset(graph.vertex_count());
    for (auto [u, v] : graph.edges) {
        out.operators.push_back(move_operator(graph, u, v));
        if (!graph.directed && u != v) out.operators.push_back(move_operator(graph, v, u));
    }
    validate(out);
    return out;
}

std::pair<StripsInstance, StripsInstance> reduce_independent_set(const Graph& graph, int k) {
    validate(graph);
    if (graph.directed) throw ValidationError("independent-set reduction needs an undirected graph");
    for (auto [u, v] : graph.edges)
        if (u == v) throw SelfLoop("graph has a reflexive edge at '" + graph.vertex_names[u] + "'");
    if (k < 1 || k > graph.vertex_count())
        throw ValidationError("k must be between 1 and the vertex count");

    const int n = graph.vertex_count();
    StripsInstance p;
    p.name = "indepset_host";
    p.fluent_names = graph.vertex_names;
    p.init = Bitset(n);
    p.goal = Bitset(n);
    for (auto [u, v] : graph.edges) {
        Operator op;
        op.name = "edge(" + graph.vertex_names[u] + "," + graph.vertex_names[v] + ")";
        op.pre = Bitset(n);
        op.add = Bitset(n);
        op.add.set(u);
        op.add.set(v);
        op.del = Bitset(n);
        p.operators.push_back(std::move(op));
    }
    validate(p);

    StripsInstance p2;
    p2.name = "indepset_embedded";
    for (int i = 1; i <= k; ++i) p2.fluent_names.push_back(std::to_string(i));
    p2.init = Bitset(k);
    p2.goal = Bitset(k);
    p2.operators.push_back(Operator{"noop", Bitset(k), Bitset(k), Bitset(k)});
    for (int i = 0; i < k; ++i) {
        Operator op;
        op.name = "set(" + std::to_string(i + 1) + ")";
        op.pre = Bitset(k);
        op.add = Bitset(k);
        op.add.set(i);
        op.del = Bitset(k);
        p2.operators.push_back(std::move(op));
    }
    validate(p2);
    return {std::move(p), std::move(p2)};
}

} // namespace stripsmorph
