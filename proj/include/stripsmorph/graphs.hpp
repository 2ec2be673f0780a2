#pragma once

#include "stripsmorph/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace stripsmorph {

struct SelfLoop : ModelError {
    using ModelError::ModelError;
};

// A simple graph; edges are ordered pairs when directed, otherwise stored
// with the smaller endpoint first. No duplicate edges, no multi-edges.
struct Graph {
    bool directed = false;
    std::vector<std::string> vertex_names;
    std::vector<std::pair<int, int>> edges;

    int vertex_count() const { return static_cast<int>(vertex_names.size()); }
    int vertex_id(const std::string& n) const;
    bool has_edge(int u, int v) const;
};

void validate(const Graph& graph);

// Path-finding encoding: one fluent per vertex, one move operator per
// directed edge (both directions for undirected graphs), empty init and goal.
// move(s,t) has precondition {s}, adds t and deletes every other vertex.
StripsInstance encode_graph(const Graph& graph);

// k-Independent-Set reduction: returns (P, P2) such that P2 embeds in P iff
// the graph has an independent set of size k. P has one add-only operator per
// edge; P2 has a no-op plus one single-fluent setter per element of {1..k}.
std::pair<StripsInstance, StripsInstance> reduce_independent_set(const Graph& graph, int k);

} // namespace stripsmorph
