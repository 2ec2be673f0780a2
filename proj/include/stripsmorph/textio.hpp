#pragma once

#include "stripsmorph/model.hpp"

#include <string>
#include <vector>

namespace stripsmorph {

struct Graph; // graphs.hpp

struct ParseError : std::runtime_error {
    enum class Kind { Syntax, UnknownFluent, DuplicateName, InconsistentEffect, UnknownName };

    ParseError(Kind k, int line_no, const std::string& message)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message
                                         : message),
          kind(k), line(line_no) {}

    Kind kind;
    int line; // 0 when not line-oriented (JSON documents)
};

// Line-oriented instance documents:
//   instance <name>
//   fluents <n1> <n2> ...      (one or more lines)
//   init <n> ...
//   goal <n> ...
//   op <name>
//   pre <n> ...
//   add <n> ...
//   del <n> ...
//   end
// '#' starts a comment. Name tokens match [A-Za-z0-9_()\-,]+.
StripsInstance parse_instance(const std::string& text);
std::string write_instance(const StripsInstance& instance);

// Graph documents: first line 'directed' or 'undirected', then 'vertex <u>'
// and 'edge <u> <v>' lines.
Graph parse_graph(const std::string& text);
std::string write_graph(const Graph& graph);

// Morphism documents are JSON:
//   {"kind": "si|ssih|ssi|se", "fluent_map": {name: name}, "op_map": {name: name}}
// For SE, fluent_map keys are fluents of the embedded instance p2 and op_map
// keys are operators of the host p, matching the morphism conventions.
Morphism parse_morphism(const StripsInstance& p, const StripsInstance& p2,
                        const std::string& text);
std::string write_morphism(const StripsInstance& p, const StripsInstance& p2,
                           const Morphism& m);

struct CnfFormula; // encode.hpp

// Standard DIMACS CNF; header 'p cnf <vars> <clauses>'.
std::string write_dimacs(const CnfFormula& formula);

// Parses solver output in SAT-competition format: 'v <lit> ... 0' lines
// (possibly several). Returns the per-variable assignment, indexed from 0.
std::vector<bool> parse_model(const std::string& text, int num_vars);

bool valid_name_token(const std::string& token);

} // namespace stripsmorph
