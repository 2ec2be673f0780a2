#include "stripsmorph/propagate.hpp"

#include <deque>
#include <map>

namespace stripsmorph {

Profile profile(const Operator& o) {
    return Profile{o.pre.count(), o.add.count(), o.del.count(), (o.pre & o.del).count()};
}

bool profile_leq(const Profile& a, const Profile& b) {
    return a.pre <= b.pre && a.add <= b.add && a.del <= b.del && a.strict_del <= b.strict_del;
}

namespace {

// Fluents of P2 referenced by any section of o's candidate sets are looked up
// often enough that plain per-call scans stay cheap at the sizes we handle.
const Bitset& section(const Operator& o, int s) {
    switch (s) {
    case 0: return o.pre;
    case 1: return o.add;
    default: return o.del;
    }
}

} // namespace

DomainTable init_domains(const StripsInstance& p, const StripsInstance& p2, MorphKind kind) {
    DomainTable dt;
    dt.kind = kind;
    if (kind == MorphKind::SE) {
        // Embedded fluents of P2 get candidates from the host P. Definition 6
        // only bounds images of goal fluents (they must be goals of the host)
        // and, through injectivity and the init inclusion, forbids non-init
        // fluents from landing on host init fluents.
        Bitset not_init = Bitset(p.fluent_count(), true) - p.init;
        dt.fluent_dom.resize(p2.fluent_count());
        for (int f = 0; f < p2.fluent_count(); ++f) {
            bool in_init = p2.init.test(f);
            bool in_goal = p2.goal.test(f);
            Bitset dom = in_goal ? p.goal : Bitset(p.fluent_count(), true);
            if (!in_init) dom &= not_init;
            dt.fluent_dom[f] = std::move(dom);
        }
        std::vector<Profile> target_profiles;
        target_profiles.reserve(p2.operator_count());
        for (const auto& o : p2.operators) target_profiles.push_back(profile(o));
        dt.op_dom.resize(p.operator_count());
        for (int o = 0; o < p.operator_count(); ++o) {
            Profile mine = profile(p.operators[o]);
            Bitset dom(p2.operator_count());
            for (int s = 0; s < p2.operator_count(); ++s)
                if (profile_leq(target_profiles[s], mine)) dom.set(s);
            dt.op_dom[o] = std::move(dom);
        }
        dt.usefulness.assign(p.fluent_count(), Usefulness::Unknown);
        return dt;
    }

    dt.fluent_dom.resize(p.fluent_count());
    if (kind == MorphKind::SSIH) {
        for (int f = 0; f < p.fluent_count(); ++f)
            dt.fluent_dom[f] = Bitset(p2.fluent_count(), true);
    } else {
        // SSI (and SI, which reuses it): the image of init is exactly the
        // target init, likewise for goals, so each fluent's cell is forced.
        Bitset i_only = p2.init - p2.goal;
        Bitset g_only = p2.goal - p2.init;
        Bitset both = p2.init & p2.goal;
        Bitset neither = (Bitset(p2.fluent_count(), true) - p2.init) - p2.goal;
        for (int f = 0; f < p.fluent_count(); ++f) {
            bool in_i = p.init.test(f);
            bool in_g = p.goal.test(f);
            dt.fluent_dom[f] = in_i ? (in_g ? both : i_only) : (in_g ? g_only : neither);
        }
    }
    std::vector<Profile> target_profiles;
    target_profiles.reserve(p2.operator_count());
    for (const auto& o : p2.operators) target_profiles.push_back(profile(o));
    dt.op_dom.resize(p.operator_count());
    for (int o = 0; o < p.operator_count(); ++o) {
        Profile mine = profile(p.operators[o]);
        Bitset dom(p2.operator_count());
        for (int s = 0; s < p2.operator_count(); ++s)
            if (target_profiles[s] == mine) dom.set(s);
        dt.op_dom[o] = std::move(dom);
    }
    return dt;
}

bool revise_fluent(DomainTable& dt, const StripsInstance& p, const StripsInstance& p2, int f) {
    if (dt.kind == MorphKind::SE) {
        // f names a fluent of the embedded instance P2; candidates live in P.
        Bitset& dom = dt.fluent_dom[f];
        bool changed = false;
        for (int cand = dom.next(); cand != -1; cand = dom.next(cand + 1)) {
            bool keep = dt.usefulness[cand] != Usefulness::NotUseful;
            for (int o = 0; keep && o < p.operator_count(); ++o) {
                for (int s = 1; keep && s <= 2; ++s) { // add, del
                    if (!section(p.operators[o], s).test(cand)) continue;
                    bool supported = false;
                    const Bitset& odom = dt.op_dom[o];
                    for (int t = odom.next(); t != -1; t = odom.next(t + 1)) {
                        if (section(p2.operators[t], s).test(f)) {
                            supported = true;
                            break;
                        }
                    }
                    keep = supported;
                }
            }
            if (!keep) {
                dom.reset(cand);
                changed = true;
            }
        }
        return changed;
    }

    Bitset& dom = dt.fluent_dom[f];
    bool changed = false;
    for (int o = 0; o < p.operator_count(); ++o) {
        const Operator& op = p.operators[o];
        for (int s = 0; s < 3; ++s) {
            if (!section(op, s).test(f)) continue;
            // Union of the candidate operators' matching sections: candidates
            // for f outside it have no support.
            Bitset support(p2.fluent_count());
            const Bitset& odom = dt.op_dom[o];
            for (int t = odom.next(); t != -1; t = odom.next(t + 1))
                support |= section(p2.operators[t], s);
            Bitset next = dom & support;
            if (next != dom) {
                dom = std::move(next);
                changed = true;
            }
        }
    }
    return changed;
}

bool revise_operator(DomainTable& dt, const StripsInstance& p, const StripsInstance& p2, int o) {
    Bitset& dom = dt.op_dom[o];
    const Operator& op = p.operators[o];
    bool changed = false;
    if (dt.kind == MorphKind::SE) {
        for (int cand = dom.next(); cand != -1; cand = dom.next(cand + 1)) {
            const Operator& target = p2.operators[cand];
            bool keep = true;
            // (i) every necessarily-useful effect fluent of o finds a match.
            for (int s = 1; keep && s <= 2; ++s) {
                const Bitset& mine = section(op, s);
                for (int f = mine.next(); keep && f != -1; f = mine.next(f + 1)) {
                    if (dt.usefulness[f] != Usefulness::Useful) continue;
                    bool matched = false;
                    const Bitset& theirs = section(target, s);
                    for (int fp = theirs.next(); fp != -1; fp = theirs.next(fp + 1)) {
                        if (dt.fluent_dom[fp].test(f)) {
                            matched = true;
                            break;
                        }
                    }
                    keep = matched;
                }
            }
            // (ii) every fluent of the candidate maps back into o's sections.
            for (int s = 0; keep && s < 3; ++s) {
                const Bitset& theirs = section(target, s);
                const Bitset& mine = section(op, s);
                for (int fp = theirs.next(); keep && fp != -1; fp = theirs.next(fp + 1)) {
                    bool matched = false;
                    const Bitset& fdom = dt.fluent_dom[fp];
                    for (int f = fdom.next(); f != -1; f = fdom.next(f + 1)) {
                        if (dt.usefulness[f] != Usefulness::NotUseful && mine.test(f)) {
                            matched = true;
                            break;
                        }
                    }
                    keep = matched;
                }
            }
            if (!keep) {
                dom.reset(cand);
                changed = true;
            }
        }
        return changed;
    }

    for (int cand = dom.next(); cand != -1; cand = dom.next(cand + 1)) {
        const Operator& target = p2.operators[cand];
        bool keep = true;
        for (int s = 0; keep && s < 3; ++s) {
            const Bitset& mine = section(op, s);
            const Bitset& theirs = section(target, s);
            for (int f = mine.next(); keep && f != -1; f = mine.next(f + 1))
                keep = dt.fluent_dom[f].intersects(theirs);
        }
        if (!keep) {
            dom.reset(cand);
            changed = true;
        }
    }
    return changed;
}

bool revise_usefulness(DomainTable& dt, const StripsInstance& p, const StripsInstance& p2, int f) {
    Usefulness& u = dt.usefulness[f];

    bool has_candidate = false;
    bool singleton = false;
    for (const auto& fdom : dt.fluent_dom) {
        if (fdom.test(f)) {
            has_candidate = true;
            if (fdom.count() == 1) singleton = true;
        }
    }
    bool top_ok = has_candidate;
    for (int o = 0; top_ok && o < p.operator_count(); ++o) {
        for (int s = 1; top_ok && s <= 2; ++s) {
            if (!section(p.operators[o], s).test(f)) continue;
            bool supported = false;
            const Bitset& odom = dt.op_dom[o];
            for (int t = odom.next(); !supported && t != -1; t = odom.next(t + 1)) {
                const Bitset& theirs = section(p2.operators[t], s);
                for (int fp = theirs.next(); fp != -1; fp = theirs.next(fp + 1)) {
                    if (dt.fluent_dom[fp].test(f)) {
                        supported = true;
                        break;
                    }
                }
            }
            top_ok = supported;
        }
    }
    bool bot_ok = !singleton;

    Usefulness next = u;
    if (u == Usefulness::Unknown) {
        // Both dropping at once forces NotUseful here; the singleton fluent
        // demanding f then empties through revise_fluent.
        if (!top_ok)
            next = Usefulness::NotUseful;
        else if (!bot_ok)
            next = Usefulness::Useful;
    } else if (u == Usefulness::Useful && !top_ok) {
        // Domain would empty; the caller reads this flip as a contradiction.
        next = Usefulness::NotUseful;
    }
    // NotUseful with a singleton demanding f empties that fluent's domain
    // through revise_fluent.

    if (next != u) {
        u = next;
        return true;
    }
    return false;
}

ScanResult usefulness_scan(DomainTable& dt) {
    ScanResult result;
    std::map<Bitset, int> groups;
    for (const auto& dom : dt.fluent_dom) ++groups[dom];
    for (const auto& [dom, n] : groups) {
        int size = dom.count();
        if (size < n) {
            result.contradiction = true;
            return result;
        }
        if (size == n) {
            for (int f = dom.next(); f != -1; f = dom.next(f + 1)) {
                if (dt.usefulness[f] == Usefulness::NotUseful) {
                    result.contradiction = true;
                    return result;
                }
                if (dt.usefulness[f] == Usefulness::Unknown) {
                    dt.usefulness[f] = Usefulness::Useful;
                    result.newly_useful.push_back(f);
                }
            }
        }
    }
    return result;
}

namespace {

struct WorkQueue {
    std::deque<std::pair<int, int>> items; // (type, id); type 0 fluent, 1 op, 2 token
    std::vector<char> fluent_pending, op_pending, useful_pending;
    bool token_pending = false;

    void push_fluent(int f) {
        if (!fluent_pending[f]) {
            fluent_pending[f] = 1;
            items.emplace_back(0, f);
        }
    }
    void push_op(int o) {
        if (!op_pending[o]) {
            op_pending[o] = 1;
            items.emplace_back(1, o);
        }
    }
    void push_token() {
        if (!token_pending) {
            token_pending = true;
            items.emplace_back(2, 0);
        }
    }
    void push_useful(int f) {
        if (!useful_pending[f]) {
            useful_pending[f] = 1;
            items.emplace_back(3, f);
        }
    }
};

} // namespace

std::optional<DomainTable> ac3(const StripsInstance& p, const StripsInstance& p2, MorphKind kind,
                               Ac3Stats* stats) {
    const bool se = kind == MorphKind::SE;
    // Injectivity of the fluent map rules these out before any propagation.
    if (!se && p.fluent_count() > p2.fluent_count()) return std::nullopt;
    if (se && p2.fluent_count() > p.fluent_count()) return std::nullopt;

    DomainTable dt = init_domains(p, p2, kind);
    long init_fpairs = dt.fluent_pairs();
    long init_opairs = dt.op_pairs();
    // An empty fluent domain admits no mapping. An empty operator domain does
    // too for the isomorphism family (the operator map is total), but not for
    // embeddings: a host operator without candidates can simply never become
    // active, which the revision rules then propagate to its effect fluents.
    auto contradictory = [&]() {
        for (const auto& d : dt.fluent_dom)
            if (d.none()) return true;
        if (!se)
            for (const auto& d : dt.op_dom)
                if (d.none()) return true;
        return false;
    };
    if (contradictory()) {
        if (stats) {
            stats->pruned_fluent_pairs = 0;
            stats->pruned_op_pairs = 0;
        }
        return std::nullopt;
    }

    const int num_fluent_vars = static_cast<int>(dt.fluent_dom.size());
    const int num_op_vars = static_cast<int>(dt.op_dom.size());

    // d(f): operators of P whose sections mention f (SSI-family), or whose
    // effects mention f (SE relates host fluents to host operators).
    std::vector<std::vector<int>> depending(p.fluent_count());
    for (int o = 0; o < p.operator_count(); ++o) {
        Bitset vars = p.operators[o].pre | p.operators[o].add | p.operators[o].del;
        for (int f = vars.next(); f != -1; f = vars.next(f + 1)) depending[f].push_back(o);
    }
    // For SE: operators of P2 mentioning an embedded fluent, used to find the
    // host operator variables affected by a shrink of that fluent's domain.
    std::vector<Bitset> p2_depending;
    if (se) {
        p2_depending.assign(p2.fluent_count(), Bitset(p2.operator_count()));
        for (int t = 0; t < p2.operator_count(); ++t) {
            Bitset vars = p2.operators[t].pre | p2.operators[t].add | p2.operators[t].del;
            for (int f = vars.next(); f != -1; f = vars.next(f + 1)) p2_depending[f].set(t);
        }
    }

    WorkQueue queue;
    queue.fluent_pending.assign(num_fluent_vars, 0);
    queue.op_pending.assign(num_op_vars, 0);
    queue.useful_pending.assign(se ? p.fluent_count() : 0, 0);
    for (int f = 0; f < num_fluent_vars; ++f) queue.push_fluent(f);
    if (se) {
        for (int f = 0; f < p.fluent_count(); ++f) queue.push_useful(f);
        queue.push_token();
    }
    for (int o = 0; o < num_op_vars; ++o) queue.push_op(o);

    auto on_usefulness_change = [&](int f) {
        // Candidates for embedded fluents must stay potentially useful, and
        // both operator revision rules read the tri-state.
        for (int fp = 0; fp < num_fluent_vars; ++fp)
            if (dt.fluent_dom[fp].test(f)) queue.push_fluent(fp);
        for (int o : depending[f]) queue.push_op(o);
    };

    auto on_fluent_change = [&](int f) {
        if (!se) {
            for (int o : depending[f]) queue.push_op(o);
            return;
        }
        // f is an embedded fluent: host operators whose candidates mention it
        // re-check their conditions, usefulness flags of host fluents shift,
        // and the scan may fire on the new domain multiset.
        for (int o = 0; o < num_op_vars; ++o)
            if (dt.op_dom[o].intersects(p2_depending[f])) queue.push_op(o);
        for (int hf = 0; hf < p.fluent_count(); ++hf) queue.push_useful(hf);
        queue.push_token();
    };

    auto on_op_change = [&](int o) {
        if (!se) {
            Bitset vars = p.operators[o].pre | p.operators[o].add | p.operators[o].del;
            for (int f = vars.next(); f != -1; f = vars.next(f + 1)) queue.push_fluent(f);
            return;
        }
        Bitset evars = p.operators[o].add | p.operators[o].del;
        for (int fp = 0; fp < num_fluent_vars; ++fp)
            if (dt.fluent_dom[fp].intersects(evars)) queue.push_fluent(fp);
        for (int f = evars.next(); f != -1; f = evars.next(f + 1)) queue.push_useful(f);
    };

    while (!queue.items.empty()) {
        auto [type, id] = queue.items.front();
        queue.items.pop_front();
        if (stats) ++stats->revisions;
        switch (type) {
        case 0: {
            queue.fluent_pending[id] = 0;
            if (revise_fluent(dt, p, p2, id)) {
                if (dt.fluent_dom[id].none()) return std::nullopt;
                on_fluent_change(id);
            }
            break;
        }
        case 1: {
            queue.op_pending[id] = 0;
            if (revise_operator(dt, p, p2, id)) {
                if (!se && dt.op_dom[id].none()) return std::nullopt;
                on_op_change(id);
            }
            break;
        }
        case 2: {
            queue.token_pending = false;
            ScanResult scan = usefulness_scan(dt);
            if (scan.contradiction) return std::nullopt;
            for (int f : scan.newly_useful) on_usefulness_change(f);
            break;
        }
        default: {
            queue.useful_pending[id] = 0;
            Usefulness before = dt.usefulness[id];
            if (revise_usefulness(dt, p, p2, id)) {
                // Useful flag forced empty: no embedding.
                if (before == Usefulness::Useful && dt.usefulness[id] == Usefulness::NotUseful)
                    return std::nullopt;
                on_usefulness_change(id);
            }
            break;
        }
        }
    }

    if (stats) {
        stats->pruned_fluent_pairs = init_fpairs - dt.fluent_pairs();
        stats->pruned_op_pairs = init_opairs - dt.op_pairs();
    }
    return dt;
}

} // namespace stripsmorph
