#include "stripsmorph/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace stripsmorph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Bitset image_of(const Bitset& src, const std::vector<int>& fmap, int target_size) {
    Bitset out(target_size);
    for (int f = src.next(); f != -1; f = src.next(f + 1)) out.set(fmap[f]);
    return out;
}

// Enumerates injective maps src -> [0, target_size) in lexicographic order;
// candidates[i] restricts the images of i. Calls sink on each complete map
// until it returns true.
bool enumerate_injective(const std::vector<Bitset>& candidates, int target_size,
                         const std::function<bool(const std::vector<int>&)>& sink) {
    const int n = static_cast<int>(candidates.size());
    std::vector<int> map(n, -1);
    std::vector<char> used(target_size, 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return sink(map);
        const Bitset& dom = candidates[i];
        for (int t = dom.next(); t != -1; t = dom.next(t + 1)) {
            if (used[t]) continue;
            used[t] = 1;
            map[i] = t;
            if (rec(i + 1)) return true;
            used[t] = 0;
            map[i] = -1;
        }
        return false;
    };
    return rec(0);
}

std::optional<Morphism> brute_force_iso_family(const StripsInstance& p,
                                               const StripsInstance& p2, MorphKind kind) {
    if (p.fluent_count() > p2.fluent_count()) return std::nullopt;
    if (kind == MorphKind::SI &&
        (p.fluent_count() != p2.fluent_count() || p.operator_count() != p2.operator_count()))
        return std::nullopt;

    // I/G cells where equality is demanded; full domains for SSI-H.
    std::vector<Bitset> candidates(p.fluent_count());
    for (int f = 0; f < p.fluent_count(); ++f) {
        if (kind == MorphKind::SSIH) {
            candidates[f] = Bitset(p2.fluent_count(), true);
            continue;
        }
        bool in_i = p.init.test(f), in_g = p.goal.test(f);
        Bitset dom = in_i ? (in_g ? (p2.init & p2.goal) : (p2.init - p2.goal))
                          : (in_g ? (p2.goal - p2.init)
                                  : ((Bitset(p2.fluent_count(), true) - p2.init) - p2.goal));
        candidates[f] = std::move(dom);
    }

    std::optional<Morphism> found;
    enumerate_injective(candidates, p2.fluent_count(), [&](const std::vector<int>& fmap) {
        // Surjectivity on fluents holds automatically for SI (equal sizes).
        // Per operator, the image structure pins the candidate targets.
        std::vector<std::vector<int>> op_candidates(p.operator_count());
        for (int o = 0; o < p.operator_count(); ++o) {
            Bitset pre_img = image_of(p.operators[o].pre, fmap, p2.fluent_count());
            Bitset add_img = image_of(p.operators[o].add, fmap, p2.fluent_count());
            Bitset del_img = image_of(p.operators[o].del, fmap, p2.fluent_count());
            for (int t = 0; t < p2.operator_count(); ++t) {
                const Operator& cand = p2.operators[t];
                if (cand.pre == pre_img && cand.add == add_img && cand.del == del_img)
                    op_candidates[o].push_back(t);
            }
            if (op_candidates[o].empty()) return false;
        }
        // Operator maps are injective across the family (and surjective for
        // SI by the size precheck plus injectivity).
        std::vector<int> omap(p.operator_count(), -1);
        std::vector<char> used(p2.operator_count(), 0);
        std::function<bool(int)> assign = [&](int o) -> bool {
            if (o == p.operator_count()) return true;
            for (int t : op_candidates[o]) {
                if (used[t]) continue;
                used[t] = 1;
                omap[o] = t;
                if (assign(o + 1)) return true;
                used[t] = 0;
            }
            return false;
        };
        if (!assign(0)) return false;
        Morphism m;
        m.kind = kind;
        m.fluent_map.assign(fmap.begin(), fmap.end());
        m.op_map.assign(omap.begin(), omap.end());
        if (!verify_morphism(p, p2, m).valid()) return false;
        found = std::move(m);
        return true;
    });
    return found;
}

std::optional<Morphism> brute_force_se(const StripsInstance& p, const StripsInstance& p2) {
    // Embedding of p2 in the host p: injective fluent maps F(p2) -> F(p).
    if (p2.fluent_count() > p.fluent_count()) return std::nullopt;
    std::vector<Bitset> candidates(p2.fluent_count(), Bitset(p.fluent_count(), true));

    std::optional<Morphism> found;
    enumerate_injective(candidates, p.fluent_count(), [&](const std::vector<int>& fmap) {
        Bitset image(p.fluent_count());
        for (int t : fmap) image.set(t);
        // Goal inclusion and init superset.
        for (int j = p2.goal.next(); j != -1; j = p2.goal.next(j + 1))
            if (!p.goal.test(fmap[j])) return false;
        Bitset init_img = image_of(p2.init, fmap, p.fluent_count());
        if (!(p.init & image).is_subset_of(init_img)) return false;

        Morphism m;
        m.kind = MorphKind::SE;
        m.fluent_map.assign(fmap.begin(), fmap.end());
        m.op_map.assign(p.operator_count(), std::nullopt);
        for (int o = 0; o < p.operator_count(); ++o) {
            const Operator& host = p.operators[o];
            if (!se_operator_active(host, image)) continue;
            Bitset add_needed = host.add & image;
            Bitset del_needed = host.del & image;
            Bitset pre_bound = host.pre & image;
            bool matched = false;
            for (int t = 0; t < p2.operator_count() && !matched; ++t) {
                const Operator& emb = p2.operators[t];
                if (image_of(emb.add, fmap, p.fluent_count()) != add_needed) continue;
                if (image_of(emb.del, fmap, p.fluent_count()) != del_needed) continue;
                if (!image_of(emb.pre, fmap, p.fluent_count()).is_subset_of(pre_bound)) continue;
                m.op_map[o] = t;
                matched = true;
            }
            if (!matched) return false;
        }
        if (!verify_morphism(p, p2, m).valid()) return false;
        found = std::move(m);
        return true;
    });
    return found;
}

} // namespace

std::optional<Morphism> brute_force(const StripsInstance& p, const StripsInstance& p2,
                                    MorphKind kind) {
    if (p.fluent_count() > 8 || p2.fluent_count() > 8 || p.operator_count() > 8 ||
        p2.operator_count() > 8)
        throw TooLarge("brute force is guarded to 8 fluents and 8 operators per side");
    if (kind == MorphKind::SE) return brute_force_se(p, p2);
    return brute_force_iso_family(p, p2, kind);
}

FindResult find_morphism(const StripsInstance& p, const StripsInstance& p2, MorphKind kind,
                         const FindConfig& cfg) {
    FindResult result;

    if (kind == MorphKind::SI &&
        (p.fluent_count() != p2.fluent_count() || p.operator_count() != p2.operator_count())) {
        // Bijections cannot exist; by the simplification convention the whole
        // encoding counts as settled.
        result.outcome = FindResult::Outcome::NoMorphism;
        result.stats.early_unsat = true;
        result.stats.simplified_fraction = 1.0;
        return result;
    }

    std::optional<DomainTable> dt;
    auto cp_start = Clock::now();
    if (cfg.use_cp) {
        Ac3Stats ac3_stats;
        dt = ac3(p, p2, kind, &ac3_stats);
        result.stats.pruned_fluent_pairs = ac3_stats.pruned_fluent_pairs;
        result.stats.pruned_op_pairs = ac3_stats.pruned_op_pairs;
    } else {
        dt = init_domains(p, p2, kind);
    }
    result.stats.cp_seconds = seconds_since(cp_start);

    SimplificationStats simp = simplification_stats(p, p2, dt, kind);
    result.stats.clauses_baseline = simp.clauses_baseline;
    result.stats.simplified_fraction = simp.fraction;
    result.stats.early_unsat = simp.early_unsat;

    if (!dt) {
        result.outcome = FindResult::Outcome::NoMorphism;
        return result;
    }

    auto compile_start = Clock::now();
    CnfFormula formula = encode_cnf(p, p2, *dt, kind);
    result.stats.compile_seconds = seconds_since(compile_start);
    result.stats.clauses = static_cast<long>(formula.clauses.size());
    result.stats.vars = formula.num_vars;

    auto solve_start = Clock::now();
    SolveResult solved = solve(formula, cfg.solver);
    result.stats.solve_seconds = seconds_since(solve_start);
    result.stats.solver = solved.stats;

    switch (solved.kind) {
    case SolveResult::Kind::Unsat:
        result.outcome = FindResult::Outcome::NoMorphism;
        return result;
    case SolveResult::Kind::Timeout:
        result.outcome = FindResult::Outcome::Timeout;
        return result;
    case SolveResult::Kind::Sat: break;
    }

    Morphism m = decode_model(formula.catalog, solved.model);
    VerifyReport report = verify_morphism(p, p2, m);
    if (!report.valid())
        throw InternalInconsistency("decoded model fails verification: " +
                                    report.violations.front());
    result.outcome = FindResult::Outcome::Found;
    result.morphism = std::move(m);
    return result;
}

Morphism embedding_from_ssi(const StripsInstance& p, const StripsInstance& p2,
                            const Morphism& m) {
    if (m.kind != MorphKind::SSI) throw InvalidInput("expected a subinstance isomorphism");
    if (p.fluent_count() == 0) throw InvalidInput("the source instance has no fluents");
    VerifyReport report;
    try {
        report = verify_morphism(p, p2, m);
    } catch (const ShapeMismatch& e) {
        throw InvalidInput(std::string("malformed subinstance isomorphism: ") + e.what());
    }
    if (!report.valid())
        throw InvalidInput("subinstance isomorphism fails verification: " +
                           report.violations.front());

    Morphism out;
    out.kind = MorphKind::SE;
    // Inverse of the fluent map on its image; fluents of P2 outside it keep
    // no image (the arbitrary-fallback choice of the construction would break
    // injectivity, and no embedding condition ever needs those images).
    out.fluent_map.assign(p2.fluent_count(), std::nullopt);
    for (int f = 0; f < p.fluent_count(); ++f) out.fluent_map[*m.fluent_map[f]] = f;
    out.op_map.assign(p.operator_count(), std::nullopt);
    for (int o = 0; o < p.operator_count(); ++o) out.op_map[o] = m.op_map[o];
    return out;
}

std::string RunStats::to_json(MorphKind kind, const std::string& result) const {
    nlohmann::json j;
    j["kind"] = stripsmorph::to_string(kind);
    j["result"] = result;
    j["cp_seconds"] = cp_seconds;
    j["compile_seconds"] = compile_seconds;
    j["solve_seconds"] = solve_seconds;
    j["clauses"] = clauses;
    j["clauses_baseline"] = clauses_baseline;
    j["vars"] = vars;
    j["simplified_fraction"] = simplified_fraction;
    j["early_unsat"] = early_unsat;
    j["pruned_fluent_pairs"] = pruned_fluent_pairs;
    j["pruned_op_pairs"] = pruned_op_pairs;
    j["decisions"] = solver.decisions;
    j["conflicts"] = solver.conflicts;
    j["propagations"] = solver.propagations;
    return j.dump(2) + "\n";
}

std::string RunStats::to_table(MorphKind kind, const std::string& result) const {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-8s %10s %10s %10s %10s %10s %8s\n", "kind",
                  "result", "cp(s)", "comp(s)", "solve(s)", "clauses", "baseline", "simp");
    out << line;
    std::snprintf(line, sizeof line, "%-10s %-8s %10.3f %10.3f %10.3f %10ld %10ld %7.1f%%\n",
                  stripsmorph::to_string(kind), result.c_str(), cp_seconds, compile_seconds,
                  solve_seconds, clauses, clauses_baseline, simplified_fraction * 100.0);
    out << line;
    return out.str();
}

} // namespace stripsmorph
