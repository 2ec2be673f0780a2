#include "stripsmorph/statespace.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace stripsmorph {

namespace {

std::uint32_t compress(const Bitset& s, const std::vector<int>& fluents) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < fluents.size(); ++i)
        if (s.test(fluents[i])) m |= std::uint32_t{1} << i;
    return m;
}

struct MaskOps {
    std::uint32_t pre, add, del;
};

// Operators restated over full-universe masks; only valid when every fluent
// is tracked.
std::vector<MaskOps> mask_operators(const StripsInstance& p) {
    std::vector<int> all(p.fluent_count());
    for (int i = 0; i < p.fluent_count(); ++i) all[i] = i;
    std::vector<MaskOps> ops;
    ops.reserve(p.operator_count());
    for (const auto& o : p.operators)
        ops.push_back({compress(o.pre, all), compress(o.add, all), compress(o.del, all)});
    return ops;
}

} // namespace

Lts build_lts(const StripsInstance& p, int cap) {
    if (p.fluent_count() > cap)
        throw TooLarge("state space of " + std::to_string(p.fluent_count()) +
                       " fluents exceeds the cap of " + std::to_string(cap));
    Lts lts;
    lts.fluents.resize(p.fluent_count());
    for (int i = 0; i < p.fluent_count(); ++i) lts.fluents[i] = i;
    auto ops = mask_operators(p);
    const std::uint32_t states = std::uint32_t{1} << p.fluent_count();
    lts.initial = compress(p.init, lts.fluents);
    std::uint32_t goal_mask = compress(p.goal, lts.fluents);
    lts.is_goal.resize(states);
    for (std::uint32_t s = 0; s < states; ++s) lts.is_goal[s] = (s & goal_mask) == goal_mask;
    for (std::uint32_t s = 0; s < states; ++s)
        for (int o = 0; o < p.operator_count(); ++o)
            if ((s & ops[o].pre) == ops[o].pre)
                lts.transitions.emplace_back(s, o, (s & ~ops[o].del) | ops[o].add);
    return lts;
}

Lts project_lts(const StripsInstance& p, const Bitset& fluents, int cap) {
    if (p.fluent_count() > cap)
        throw TooLarge("state space of " + std::to_string(p.fluent_count()) +
                       " fluents exceeds the cap of " + std::to_string(cap));
    Lts full = build_lts(p, cap);
    Lts lts;
    lts.fluents = fluents.to_vector();
    std::uint32_t keep = 0;
    std::vector<int> local_of(p.fluent_count(), -1);
    for (std::size_t i = 0; i < lts.fluents.size(); ++i) local_of[lts.fluents[i]] = static_cast<int>(i);
    for (int f : lts.fluents) keep |= std::uint32_t{1} << f;
    auto alpha = [&](std::uint32_t s) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < lts.fluents.size(); ++i)
            if (s & (std::uint32_t{1} << lts.fluents[i])) m |= std::uint32_t{1} << i;
        return m;
    };
    lts.initial = alpha(full.initial);
    const std::uint32_t states = std::uint32_t{1} << lts.fluents.size();
    std::uint32_t goal_in = compress(p.goal & fluents, lts.fluents);
    lts.is_goal.resize(states);
    // An abstract state is a goal iff some concrete goal state projects onto
    // it, i.e. iff it contains the goal fluents inside the projection.
    for (std::uint32_t s = 0; s < states; ++s) lts.is_goal[s] = (s & goal_in) == goal_in;
    std::set<std::tuple<std::uint32_t, int, std::uint32_t>> seen;
    for (const auto& [s1, o, s2] : full.transitions) {
        auto key = std::make_tuple(alpha(s1), o, alpha(s2));
        if (seen.insert(key).second) lts.transitions.push_back(key);
    }
    return lts;
}

AbstractionReport check_embedding_abstraction(const StripsInstance& p, const StripsInstance& p2,
                                              const Morphism& m, int cap) {
    if (m.kind != MorphKind::SE) throw InvalidInput("expected an embedding");
    VerifyReport verdict;
    try {
        verdict = verify_morphism(p, p2, m);
    } catch (const ShapeMismatch& e) {
        throw InvalidInput(std::string("malformed embedding: ") + e.what());
    }
    if (!verdict.valid())
        throw InvalidInput("embedding fails verification: " + verdict.violations.front());
    for (const auto& t : m.fluent_map)
        if (!t)
            throw InvalidInput("the abstraction checks need a total fluent map");

    AbstractionReport report;
    Bitset image = fluent_image(m, p.fluent_count());
    Lts abstract = project_lts(p, image, cap);
    Lts embedded = build_lts(p2, cap);

    // b = (alpha o v)^-1: local bit i of the abstract space names the image
    // of exactly one embedded fluent; b permutes the bits accordingly.
    std::vector<int> bit_of(abstract.fluent_count(), -1);
    bool bijective = abstract.fluent_count() == p2.fluent_count();
    if (bijective) {
        for (int j = 0; j < p2.fluent_count(); ++j) {
            int host = *m.fluent_map[j];
            auto it = std::find(abstract.fluents.begin(), abstract.fluents.end(), host);
            if (it == abstract.fluents.end()) {
                bijective = false;
                break;
            }
            int local = static_cast<int>(it - abstract.fluents.begin());
            if (bit_of[local] != -1) bijective = false;
            bit_of[local] = j;
        }
    }
    report.bijection_ok = bijective;
    if (!bijective) {
        report.counterexamples.push_back(
            "states of the projection are not in bijection with states of the embedded instance");
        return report;
    }
    auto b = [&](std::uint32_t s) {
        std::uint32_t out = 0;
        for (int i = 0; i < abstract.fluent_count(); ++i)
            if (s & (std::uint32_t{1} << i)) out |= std::uint32_t{1} << bit_of[i];
        return out;
    };

    // (ii) non-reflexive abstract transitions have counterparts.
    std::set<std::pair<std::uint32_t, std::uint32_t>> embedded_arcs;
    for (const auto& [s1, o, s2] : embedded.transitions) embedded_arcs.emplace(s1, s2);
    report.transitions_ok = true;
    for (const auto& [s1, o, s2] : abstract.transitions) {
        if (s1 == s2) continue;
        if (!embedded_arcs.count({b(s1), b(s2)})) {
            report.transitions_ok = false;
            std::ostringstream msg;
            msg << "abstract transition " << s1 << " -[" << p.operators[o].name << "]-> " << s2
                << " has no counterpart between " << b(s1) << " and " << b(s2);
            report.counterexamples.push_back(msg.str());
        }
    }

    // (iii) a goal-reaching path in the abstraction implies one in the
    // embedded instance.
    auto reaches_goal = [](const Lts& lts) {
        std::vector<char> visited(lts.state_count(), 0);
        std::vector<std::vector<std::uint32_t>> next(lts.state_count());
        for (const auto& [s1, o, s2] : lts.transitions) next[s1].push_back(s2);
        std::deque<std::uint32_t> queue{lts.initial};
        visited[lts.initial] = 1;
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            if (lts.is_goal[s]) return true;
            for (std::uint32_t t : next[s])
                if (!visited[t]) {
                    visited[t] = 1;
                    queue.push_back(t);
                }
        }
        return false;
    };
    bool abstract_solvable = reaches_goal(abstract);
    bool embedded_solvable = reaches_goal(embedded);
    report.path_ok = !abstract_solvable || embedded_solvable;
    if (!report.path_ok)
        report.counterexamples.push_back(
            "the projection reaches a goal but the embedded instance does not");
    return report;
}

std::optional<Plan> find_solution_plan(const StripsInstance& p, int cap) {
    if (p.fluent_count() > cap)
        throw TooLarge("state space of " + std::to_string(p.fluent_count()) +
                       " fluents exceeds the cap of " + std::to_string(cap));
    auto ops = mask_operators(p);
    std::vector<int> all(p.fluent_count());
    for (int i = 0; i < p.fluent_count(); ++i) all[i] = i;
    const std::uint32_t states = std::uint32_t{1} << p.fluent_count();
    std::uint32_t init = compress(p.init, all);
    std::uint32_t goal = compress(p.goal, all);

    std::vector<int> parent_op(states, -1);
    std::vector<std::uint32_t> parent_state(states, 0);
    std::vector<char> visited(states, 0);
    std::deque<std::uint32_t> queue{init};
    visited[init] = 1;
    while (!queue.empty()) {
        std::uint32_t s = queue.front();
        queue.pop_front();
        if ((s & goal) == goal) {
            Plan plan;
            for (std::uint32_t at = s; at != init; at = parent_state[at])
                plan.push_back(parent_op[at]);
            std::reverse(plan.begin(), plan.end());
            return plan;
        }
        for (int o = 0; o < p.operator_count(); ++o) {
            if ((s & ops[o].pre) != ops[o].pre) continue;
            std::uint32_t t = (s & ~ops[o].del) | ops[o].add;
            if (!visited[t]) {
                visited[t] = 1;
                parent_op[t] = o;
                parent_state[t] = s;
                queue.push_back(t);
            }
        }
    }
    return std::nullopt;
}

std::string AbstractionReport::to_json() const {
    nlohmann::json j;
    j["bijection_ok"] = bijection_ok;
    j["transitions_ok"] = transitions_ok;
    j["path_ok"] = path_ok;
    j["counterexamples"] = counterexamples;
    j["ok"] = ok();
    return j.dump(2) + "\n";
}

std::string lts_to_dot(const Lts& lts, const StripsInstance& p) {
    std::ostringstream out;
    out << "digraph lts {\n";
    auto label = [&](std::uint32_t s) {
        std::string text = "{";
        bool first = true;
        for (int i = 0; i < lts.fluent_count(); ++i) {
            if (!(s & (std::uint32_t{1} << i))) continue;
            if (!first) text += ",";
            text += p.fluent_names[lts.fluents[i]];
            first = false;
        }
        return text + "}";
    };
    for (std::uint64_t s = 0; s < lts.state_count(); ++s) {
        out << "  s" << s << " [label=\"" << label(static_cast<std::uint32_t>(s)) << "\"";
        if (lts.is_goal[s]) out << " shape=doublecircle";
        if (s == lts.initial) out << " style=bold";
        out << "];\n";
    }
    for (const auto& [s1, o, s2] : lts.transitions)
        out << "  s" << s1 << " -> s" << s2 << " [label=\"" << p.operators[o].name << "\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace stripsmorph
