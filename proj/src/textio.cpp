#include "stripsmorph/textio.hpp"

#include "stripsmorph/encode.hpp"
#include "stripsmorph/graphs.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <unordered_map>

namespace stripsmorph {

namespace {

bool name_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '(' || c == ')' || c == '-' || c == ',';
}

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text, bool names_only) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
        Line line{number, {}};
        std::istringstream ls(raw);
        std::string tok;
        while (ls >> tok) {
            if (names_only && !valid_name_token(tok))
                throw ParseError(ParseError::Kind::Syntax, number, "invalid token '" + tok + "'");
            line.tokens.push_back(tok);
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

} // namespace

bool valid_name_token(const std::string& token) {
    if (token.empty()) return false;
    for (char c : token)
        if (!name_char(c)) return false;
    return true;
}

StripsInstance parse_instance(const std::string& text) {
    StripsInstance out;
    out.name = "unnamed";
    std::unordered_map<std::string, int> fluent_ids;
    std::unordered_map<std::string, int> op_names;

    auto lines = tokenize(text, true);
    std::size_t pos = 0;

    auto fluent_set = [&](const Line& line) {
        Bitset s(out.fluent_count());
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            auto it = fluent_ids.find(line.tokens[i]);
            if (it == fluent_ids.end())
                throw ParseError(ParseError::Kind::UnknownFluent, line.number,
                                 "unknown fluent '" + line.tokens[i] + "'");
            s.set(it->second);
        }
        return s;
    };

    if (pos < lines.size() && lines[pos].tokens[0] == "instance") {
        if (lines[pos].tokens.size() != 2)
            throw ParseError(ParseError::Kind::Syntax, lines[pos].number,
                             "expected 'instance <name>'");
        out.name = lines[pos].tokens[1];
        ++pos;
    }
    while (pos < lines.size() && lines[pos].tokens[0] == "fluents") {
        for (std::size_t i = 1; i < lines[pos].tokens.size(); ++i) {
            const std::string& n = lines[pos].tokens[i];
            if (!fluent_ids.emplace(n, out.fluent_count()).second)
                throw ParseError(ParseError::Kind::DuplicateName, lines[pos].number,
                                 "duplicate fluent name '" + n + "'");
            out.fluent_names.push_back(n);
        }
        ++pos;
    }
    out.init = Bitset(out.fluent_count());
    out.goal = Bitset(out.fluent_count());
    if (pos < lines.size() && lines[pos].tokens[0] == "init") {
        out.init = fluent_set(lines[pos]);
        ++pos;
    }
    if (pos < lines.size() && lines[pos].tokens[0] == "goal") {
        out.goal = fluent_set(lines[pos]);
        ++pos;
    }
    while (pos < lines.size()) {
        const Line& header = lines[pos];
        if (header.tokens[0] != "op" || header.tokens.size() != 2)
            throw ParseError(ParseError::Kind::Syntax, header.number, "expected 'op <name>'");
        const std::string& opname = header.tokens[1];
        if (!op_names.emplace(opname, out.operator_count()).second)
            throw ParseError(ParseError::Kind::DuplicateName, header.number,
                             "duplicate operator name '" + opname + "'");
        ++pos;
        Operator op{opname, Bitset(out.fluent_count()), Bitset(out.fluent_count()),
                    Bitset(out.fluent_count())};
        bool saw_pre = false, saw_add = false, saw_del = false, closed = false;
        while (pos < lines.size()) {
            const Line& line = lines[pos];
            const std::string& key = line.tokens[0];
            if (key == "end") {
                if (line.tokens.size() != 1)
                    throw ParseError(ParseError::Kind::Syntax, line.number, "expected bare 'end'");
                ++pos;
                closed = true;
                break;
            }
            bool* seen = key == "pre" ? &saw_pre : key == "add" ? &saw_add
                                                 : key == "del" ? &saw_del
                                                                : nullptr;
            if (!seen)
                throw ParseError(ParseError::Kind::Syntax, line.number,
                                 "expected 'pre', 'add', 'del' or 'end' in operator block");
            if (*seen)
                throw ParseError(ParseError::Kind::Syntax, line.number,
                                 "repeated '" + key + "' line in operator '" + opname + "'");
            *seen = true;
            Bitset s = fluent_set(line);
            if (key == "pre")
                op.pre = s;
            else if (key == "add")
                op.add = s;
            else
                op.del = s;
            ++pos;
        }
        if (!closed)
            throw ParseError(ParseError::Kind::Syntax, header.number,
                             "operator '" + opname + "' not terminated by 'end'");
        if (op.add.intersects(op.del))
            throw ParseError(ParseError::Kind::InconsistentEffect, header.number,
                             "inconsistent effect in operator '" + opname +
                                 "': add and del overlap");
        out.operators.push_back(std::move(op));
    }
    validate(out);
    return out;
}

std::string write_instance(const StripsInstance& instance) {
    std::ostringstream out;
    auto names = [&](const Bitset& s) {
        std::string acc;
        for (int f = s.next(); f != -1; f = s.next(f + 1)) {
            acc += ' ';
            acc += instance.fluent_names[f];
        }
        return acc;
    };
    out << "instance " << instance.name << '\n';
    out << "fluents";
    for (const auto& n : instance.fluent_names) out << ' ' << n;
    out << '\n';
    out << "init" << names(instance.init) << '\n';
    out << "goal" << names(instance.goal) << '\n';
    for (const auto& op : instance.operators) {
        out << "op " << op.name << '\n';
        out << "pre" << names(op.pre) << '\n';
        out << "add" << names(op.add) << '\n';
        out << "del" << names(op.del) << '\n';
        out << "end\n";
    }
    return out.str();
}

Graph parse_graph(const std::string& text) {
    auto lines = tokenize(text, true);
    if (lines.empty())
        throw ParseError(ParseError::Kind::Syntax, 0, "empty graph document");
    Graph g;
    const Line& head = lines[0];
    if (head.tokens.size() != 1 || (head.tokens[0] != "directed" && head.tokens[0] != "undirected"))
        throw ParseError(ParseError::Kind::Syntax, head.number,
                         "expected 'directed' or 'undirected'");
    g.directed = head.tokens[0] == "directed";
    std::unordered_map<std::string, int> ids;
    auto vertex = [&](const std::string& n) {
        auto [it, inserted] = ids.emplace(n, g.vertex_count());
        if (inserted) g.vertex_names.push_back(n);
        return it->second;
    };
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        if (line.tokens[0] == "vertex") {
            if (line.tokens.size() != 2)
                throw ParseError(ParseError::Kind::Syntax, line.number, "expected 'vertex <u>'");
            vertex(line.tokens[1]);
        } else if (line.tokens[0] == "edge") {
            if (line.tokens.size() != 3)
                throw ParseError(ParseError::Kind::Syntax, line.number, "expected 'edge <u> <v>'");
            int u = vertex(line.tokens[1]);
            int v = vertex(line.tokens[2]);
            if (!g.directed && u > v) std::swap(u, v);
            if (g.has_edge(u, v))
                throw ParseError(ParseError::Kind::DuplicateName, line.number,
                                 "duplicate edge " + line.tokens[1] + " " + line.tokens[2]);
            g.edges.emplace_back(u, v);
        } else {
            throw ParseError(ParseError::Kind::Syntax, line.number,
                             "expected 'vertex' or 'edge'");
        }
    }
    return g;
}

std::string write_graph(const Graph& graph) {
    std::ostringstream out;
    out << (graph.directed ? "directed" : "undirected") << '\n';
    for (const auto& n : graph.vertex_names) out << "vertex " << n << '\n';
    for (const auto& [u, v] : graph.edges)
        out << "edge " << graph.vertex_names[u] << ' ' << graph.vertex_names[v] << '\n';
    return out.str();
}

Morphism parse_morphism(const StripsInstance& p, const StripsInstance& p2,
                        const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(ParseError::Kind::Syntax, 0, e.what());
    }
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw ParseError(ParseError::Kind::Syntax, 0, "morphism document needs a 'kind'");
    auto kind = morph_kind_from_string(doc["kind"].get<std::string>());
    if (!kind)
        throw ParseError(ParseError::Kind::Syntax, 0,
                         "unknown kind '" + doc["kind"].get<std::string>() + "'");
    Morphism m;
    m.kind = *kind;
    const bool se = m.kind == MorphKind::SE;
    const StripsInstance& fluent_src = se ? p2 : p;
    const StripsInstance& fluent_dst = se ? p : p2;
    const StripsInstance& op_src = p; // host operators for SE, source otherwise
    const StripsInstance& op_dst = p2;
    m.fluent_map.assign(fluent_src.fluent_count(), std::nullopt);
    m.op_map.assign(op_src.operator_count(), std::nullopt);
    if (doc.contains("fluent_map")) {
        for (const auto& [key, value] : doc["fluent_map"].items()) {
            int from = fluent_src.fluent_id(key);
            if (from < 0)
                throw ParseError(ParseError::Kind::UnknownName, 0, "unknown fluent '" + key + "'");
            int to = fluent_dst.fluent_id(value.get<std::string>());
            if (to < 0)
                throw ParseError(ParseError::Kind::UnknownName, 0,
                                 "unknown fluent '" + value.get<std::string>() + "'");
            m.fluent_map[from] = to;
        }
    }
    if (doc.contains("op_map")) {
        for (const auto& [key, value] : doc["op_map"].items()) {
            int from = op_src.operator_id(key);
            if (from < 0)
                throw ParseError(ParseError::Kind::UnknownName, 0,
                                 "unknown operator '" + key + "'");
            int to = op_dst.operator_id(value.get<std::string>());
            if (to < 0)
                throw ParseError(ParseError::Kind::UnknownName, 0,
                                 "unknown operator '" + value.get<std::string>() + "'");
            m.op_map[from] = to;
        }
    }
    return m;
}

std::string write_morphism(const StripsInstance& p, const StripsInstance& p2,
                           const Morphism& m) {
    const bool se = m.kind == MorphKind::SE;
    const StripsInstance& fluent_src = se ? p2 : p;
    const StripsInstance& fluent_dst = se ? p : p2;
    nlohmann::json doc;
    doc["kind"] = to_string(m.kind);
    auto& fm = doc["fluent_map"] = nlohmann::json::object();
    for (std::size_t f = 0; f < m.fluent_map.size(); ++f)
        if (m.fluent_map[f])
            fm[fluent_src.fluent_names[f]] = fluent_dst.fluent_names[*m.fluent_map[f]];
    auto& om = doc["op_map"] = nlohmann::json::object();
    for (std::size_t o = 0; o < m.op_map.size(); ++o)
        if (m.op_map[o]) om[p.operators[o].name] = p2.operators[*m.op_map[o]].name;
    return doc.dump(2) + "\n";
}

std::string write_dimacs(const CnfFormula& formula) {
    std::ostringstream out;
    out << "p cnf " << formula.num_vars << ' ' << formula.clauses.size() << '\n';
    for (const auto& clause : formula.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

std::vector<bool> parse_model(const std::string& text, int num_vars) {
    std::vector<bool> assignment(num_vars, false);
    std::istringstream in(text);
    std::string raw;
    bool saw_values = false;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::istringstream ls(raw);
        std::string head;
        if (!(ls >> head)) continue;
        if (head != "v") continue;
        saw_values = true;
        long lit;
        while (ls >> lit) {
            if (lit == 0) continue;
            long var = lit > 0 ? lit : -lit;
            if (var > num_vars)
                throw ParseError(ParseError::Kind::Syntax, number,
                                 "literal " + std::to_string(lit) + " out of range");
            assignment[var - 1] = lit > 0;
        }
        if (ls.fail() && !ls.eof())
            throw ParseError(ParseError::Kind::Syntax, number, "malformed value line");
    }
    if (!saw_values && num_vars > 0)
        throw ParseError(ParseError::Kind::Syntax, 0, "no 'v' lines in model");
    return assignment;
}

} // namespace stripsmorph
