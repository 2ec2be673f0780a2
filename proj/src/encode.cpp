#include "stripsmorph/encode.hpp"

#include <algorithm>

namespace stripsmorph {

VarCatalog::VarCatalog(MorphKind kind, int p_fluents, int p2_fluents, int p_ops, int p2_ops)
    : kind_(kind), p_fluents_(p_fluents), p2_fluents_(p2_fluents), p_ops_(p_ops),
      p2_ops_(p2_ops), fassoc_(static_cast<std::size_t>(p_fluents) * p2_fluents, -1),
      oassoc_(static_cast<std::size_t>(p_ops) * p2_ops, -1), fuseful_(p_fluents, -1),
      oactive_(p_ops, -1) {}

int VarCatalog::add(VarTag tag, int a, int b) {
    int id = size();
    vars_.push_back(CnfVar{tag, a, b});
    switch (tag) {
    case VarTag::FAssoc: fassoc_[a * p2_fluents_ + b] = id; break;
    case VarTag::OAssoc: oassoc_[a * p2_ops_ + b] = id; break;
    case VarTag::FUseful: fuseful_[a] = id; break;
    case VarTag::OActive: oactive_[a] = id; break;
    }
    return id;
}

namespace {

struct ClauseBuilder {
    CnfFormula* formula;

    // Literal helpers return false when the underlying variable was pruned
    // away (positive occurrence drops, negative occurrence satisfies the
    // clause), mirroring the substitution of false for pruned associations.
    void emit(std::vector<int>&& lits, bool satisfied) {
        if (satisfied) return;
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        formula->clauses.push_back(std::move(lits));
    }
};

int pos(int var) { return var + 1; }
int neg(int var) { return -(var + 1); }

const Bitset& section(const Operator& o, int s) {
    switch (s) {
    case 0: return o.pre;
    case 1: return o.add;
    default: return o.del;
    }
}

void encode_iso_family(const StripsInstance& p, const StripsInstance& p2, const DomainTable& dt,
                       MorphKind kind, CnfFormula& out) {
    VarCatalog& cat = out.catalog;
    for (int i = 0; i < p.fluent_count(); ++i)
        for (int j = dt.fluent_dom[i].next(); j != -1; j = dt.fluent_dom[i].next(j + 1))
            cat.add(VarTag::FAssoc, i, j);
    for (int r = 0; r < p.operator_count(); ++r)
        for (int s = dt.op_dom[r].next(); s != -1; s = dt.op_dom[r].next(s + 1))
            cat.add(VarTag::OAssoc, r, s);
    out.num_vars = cat.size();
    ClauseBuilder cb{&out};

    // Every fluent gets exactly one image.
    for (int i = 0; i < p.fluent_count(); ++i) {
        std::vector<int> image;
        auto ids = dt.fluent_dom[i].to_vector();
        for (int j : ids) image.push_back(pos(cat.fassoc(i, j)));
        cb.emit(std::move(image), false);
        for (std::size_t u = 0; u < ids.size(); ++u)
            for (std::size_t v = u + 1; v < ids.size(); ++v)
                cb.emit({neg(cat.fassoc(i, ids[u])), neg(cat.fassoc(i, ids[v]))}, false);
    }
    // Every operator gets exactly one image.
    for (int r = 0; r < p.operator_count(); ++r) {
        std::vector<int> image;
        auto ids = dt.op_dom[r].to_vector();
        for (int s : ids) image.push_back(pos(cat.oassoc(r, s)));
        cb.emit(std::move(image), false);
        for (std::size_t u = 0; u < ids.size(); ++u)
            for (std::size_t v = u + 1; v < ids.size(); ++v)
                cb.emit({neg(cat.oassoc(r, ids[u])), neg(cat.oassoc(r, ids[v]))}, false);
    }
    // Injectivity of the fluent map.
    for (int j = 0; j < p2.fluent_count(); ++j) {
        std::vector<int> holders;
        for (int i = 0; i < p.fluent_count(); ++i)
            if (cat.fassoc(i, j) >= 0) holders.push_back(i);
        for (std::size_t u = 0; u < holders.size(); ++u)
            for (std::size_t v = u + 1; v < holders.size(); ++v)
                cb.emit({neg(cat.fassoc(holders[u], j)), neg(cat.fassoc(holders[v], j))}, false);
    }
    // Injectivity of the operator map (kept for the whole family; it speeds
    // the search and only excludes maps that merge duplicate operators).
    for (int s = 0; s < p2.operator_count(); ++s) {
        std::vector<int> holders;
        for (int r = 0; r < p.operator_count(); ++r)
            if (cat.oassoc(r, s) >= 0) holders.push_back(r);
        for (std::size_t u = 0; u < holders.size(); ++u)
            for (std::size_t v = u + 1; v < holders.size(); ++v)
                cb.emit({neg(cat.oassoc(holders[u], s)), neg(cat.oassoc(holders[v], s))}, false);
    }
    // Morphism property, both inclusions, each section.
    for (int r = 0; r < p.operator_count(); ++r) {
        for (int s = dt.op_dom[r].next(); s != -1; s = dt.op_dom[r].next(s + 1)) {
            int guard = cat.oassoc(r, s);
            for (int sec = 0; sec < 3; ++sec) {
                const Bitset& mine = section(p.operators[r], sec);
                const Bitset& theirs = section(p2.operators[s], sec);
                for (int i = mine.next(); i != -1; i = mine.next(i + 1)) {
                    std::vector<int> clause{neg(guard)};
                    for (int j = theirs.next(); j != -1; j = theirs.next(j + 1))
                        if (int v = cat.fassoc(i, j); v >= 0) clause.push_back(pos(v));
                    cb.emit(std::move(clause), false);
                }
                for (int j = theirs.next(); j != -1; j = theirs.next(j + 1)) {
                    std::vector<int> clause{neg(guard)};
                    for (int i = mine.next(); i != -1; i = mine.next(i + 1))
                        if (int v = cat.fassoc(i, j); v >= 0) clause.push_back(pos(v));
                    cb.emit(std::move(clause), false);
                }
            }
        }
    }
    // The init and goal conditions demand set equality; the domain cells give
    // the forward inclusion, so target init/goal fluents also need a
    // preimage. Full surjectivity below subsumes this for isomorphisms.
    if (kind == MorphKind::SSI) {
        Bitset named = p2.init | p2.goal;
        for (int j = named.next(); j != -1; j = named.next(j + 1)) {
            std::vector<int> preimages;
            for (int i = 0; i < p.fluent_count(); ++i)
                if (int v = cat.fassoc(i, j); v >= 0) preimages.push_back(pos(v));
            cb.emit(std::move(preimages), false);
        }
    }
    // Isomorphism closes the bijection with surjectivity on both sides.
    if (kind == MorphKind::SI) {
        for (int j = 0; j < p2.fluent_count(); ++j) {
            std::vector<int> preimages;
            for (int i = 0; i < p.fluent_count(); ++i)
                if (int v = cat.fassoc(i, j); v >= 0) preimages.push_back(pos(v));
            cb.emit(std::move(preimages), false);
        }
        for (int s = 0; s < p2.operator_count(); ++s) {
            std::vector<int> preimages;
            for (int r = 0; r < p.operator_count(); ++r)
                if (int v = cat.oassoc(r, s); v >= 0) preimages.push_back(pos(v));
            cb.emit(std::move(preimages), false);
        }
    }
}

void encode_se(const StripsInstance& p, const StripsInstance& p2, const DomainTable& dt,
               CnfFormula& out) {
    VarCatalog& cat = out.catalog;
    // Association variables f(i,j) keep i in the host P and j in the embedded
    // P2 even though the fluent map runs the other way; enumeration follows
    // the domain owner.
    for (int j = 0; j < p2.fluent_count(); ++j)
        for (int i = dt.fluent_dom[j].next(); i != -1; i = dt.fluent_dom[j].next(i + 1))
            cat.add(VarTag::FAssoc, i, j);
    for (int r = 0; r < p.operator_count(); ++r)
        for (int s = dt.op_dom[r].next(); s != -1; s = dt.op_dom[r].next(s + 1))
            cat.add(VarTag::OAssoc, r, s);
    // Usefulness decided by propagation is substituted, not re-encoded.
    for (int i = 0; i < p.fluent_count(); ++i)
        if (dt.usefulness[i] == Usefulness::Unknown) cat.add(VarTag::FUseful, i);
    for (int r = 0; r < p.operator_count(); ++r) cat.add(VarTag::OActive, r);
    out.num_vars = cat.size();
    ClauseBuilder cb{&out};

    // u_i as a literal set: {} with `sat` when decided true, unit when open.
    auto useful_neg = [&](int i, std::vector<int>& clause, bool& satisfied) {
        switch (dt.usefulness[i]) {
        case Usefulness::Useful: break;                      // ~true drops
        case Usefulness::NotUseful: satisfied = true; break; // ~false satisfies
        case Usefulness::Unknown: clause.push_back(neg(cat.fuseful(i))); break;
        }
    };
    auto useful_pos = [&](int i, std::vector<int>& clause, bool& satisfied) {
        switch (dt.usefulness[i]) {
        case Usefulness::Useful: satisfied = true; break;
        case Usefulness::NotUseful: break;
        case Usefulness::Unknown: clause.push_back(pos(cat.fuseful(i))); break;
        }
    };

    // Each embedded fluent has exactly one image.
    for (int j = 0; j < p2.fluent_count(); ++j) {
        std::vector<int> image;
        auto ids = dt.fluent_dom[j].to_vector();
        for (int i : ids) image.push_back(pos(cat.fassoc(i, j)));
        cb.emit(std::move(image), false);
        for (std::size_t u = 0; u < ids.size(); ++u)
            for (std::size_t v = u + 1; v < ids.size(); ++v)
                cb.emit({neg(cat.fassoc(ids[u], j)), neg(cat.fassoc(ids[v], j))}, false);
    }
    // Active operators get an image; at most one either way.
    for (int r = 0; r < p.operator_count(); ++r) {
        std::vector<int> image{neg(cat.oactive(r))};
        auto ids = dt.op_dom[r].to_vector();
        for (int s : ids) image.push_back(pos(cat.oassoc(r, s)));
        cb.emit(std::move(image), false);
        for (std::size_t u = 0; u < ids.size(); ++u)
            for (std::size_t v = u + 1; v < ids.size(); ++v)
                cb.emit({neg(cat.oassoc(r, ids[u])), neg(cat.oassoc(r, ids[v]))}, false);
    }
    // Injectivity of the fluent map.
    for (int i = 0; i < p.fluent_count(); ++i) {
        std::vector<int> holders;
        for (int j = 0; j < p2.fluent_count(); ++j)
            if (cat.fassoc(i, j) >= 0) holders.push_back(j);
        for (std::size_t u = 0; u < holders.size(); ++u)
            for (std::size_t v = u + 1; v < holders.size(); ++v)
                cb.emit({neg(cat.fassoc(i, holders[u])), neg(cat.fassoc(i, holders[v]))}, false);
    }
    // Morphism property for active operators: images of the candidate's
    // sections must come from the host operator's sections...
    for (int r = 0; r < p.operator_count(); ++r) {
        for (int s = dt.op_dom[r].next(); s != -1; s = dt.op_dom[r].next(s + 1)) {
            int guard = cat.oassoc(r, s);
            for (int sec = 0; sec < 3; ++sec) {
                const Bitset& mine = section(p.operators[r], sec);
                const Bitset& theirs = section(p2.operators[s], sec);
                for (int j = theirs.next(); j != -1; j = theirs.next(j + 1)) {
                    std::vector<int> clause{neg(cat.oactive(r)), neg(guard)};
                    for (int i = mine.next(); i != -1; i = mine.next(i + 1))
                        if (int v = cat.fassoc(i, j); v >= 0) clause.push_back(pos(v));
                    cb.emit(std::move(clause), false);
                }
            }
            // ...and conversely every useful effect fluent of the host is
            // covered (effects only; preconditions are one-sided).
            for (int sec = 1; sec <= 2; ++sec) {
                const Bitset& mine = section(p.operators[r], sec);
                const Bitset& theirs = section(p2.operators[s], sec);
                for (int i = mine.next(); i != -1; i = mine.next(i + 1)) {
                    bool satisfied = false;
                    std::vector<int> clause{neg(cat.oactive(r)), neg(guard)};
                    useful_neg(i, clause, satisfied);
                    for (int j = theirs.next(); j != -1; j = theirs.next(j + 1))
                        if (int v = cat.fassoc(i, j); v >= 0) clause.push_back(pos(v));
                    cb.emit(std::move(clause), satisfied);
                }
            }
        }
    }
    // Useful host init fluents are covered by embedded init fluents.
    for (int i = p.init.next(); i != -1; i = p.init.next(i + 1)) {
        bool satisfied = false;
        std::vector<int> clause;
        useful_neg(i, clause, satisfied);
        for (int j = p2.init.next(); j != -1; j = p2.init.next(j + 1))
            if (int v = cat.fassoc(i, j); v >= 0) clause.push_back(pos(v));
        cb.emit(std::move(clause), satisfied);
    }
    // Usefulness is exactly membership in the image of the fluent map.
    for (int i = 0; i < p.fluent_count(); ++i) {
        bool satisfied = false;
        std::vector<int> clause;
        useful_neg(i, clause, satisfied);
        for (int j = 0; j < p2.fluent_count(); ++j)
            if (int v = cat.fassoc(i, j); v >= 0) clause.push_back(pos(v));
        cb.emit(std::move(clause), satisfied);
        for (int j = 0; j < p2.fluent_count(); ++j) {
            if (int v = cat.fassoc(i, j); v >= 0) {
                bool sat2 = false;
                std::vector<int> c2{neg(v)};
                useful_pos(i, c2, sat2);
                cb.emit(std::move(c2), sat2);
            }
        }
    }
    // A useful effect fluent forces the operator active (one direction
    // suffices: spuriously active operators only face vacuous conditions).
    for (int r = 0; r < p.operator_count(); ++r) {
        Bitset evars = p.operators[r].add | p.operators[r].del;
        for (int i = evars.next(); i != -1; i = evars.next(i + 1)) {
            bool satisfied = false;
            std::vector<int> clause{pos(cat.oactive(r))};
            useful_neg(i, clause, satisfied);
            cb.emit(std::move(clause), satisfied);
        }
    }
}

} // namespace

CnfFormula encode_cnf(const StripsInstance& p, const StripsInstance& p2, const DomainTable& dt,
                      MorphKind kind) {
    CnfFormula out;
    out.catalog =
        VarCatalog(kind, p.fluent_count(), p2.fluent_count(), p.operator_count(),
                   p2.operator_count());
    if (kind == MorphKind::SE)
        encode_se(p, p2, dt, out);
    else
        encode_iso_family(p, p2, dt, kind, out);
    return out;
}

SimplificationStats simplification_stats(const StripsInstance& p, const StripsInstance& p2,
                                         const std::optional<DomainTable>& dt, MorphKind kind) {
    SimplificationStats stats;
    CnfFormula baseline = encode_cnf(p, p2, init_domains(p, p2, kind), kind);
    stats.clauses_baseline = static_cast<long>(baseline.clauses.size());
    stats.vars_baseline = baseline.num_vars;
    if (!dt) {
        stats.early_unsat = true;
        stats.fraction = 1.0;
        return stats;
    }
    CnfFormula pruned = encode_cnf(p, p2, *dt, kind);
    stats.clauses = static_cast<long>(pruned.clauses.size());
    stats.vars = pruned.num_vars;
    stats.fraction = stats.clauses_baseline > 0
                         ? 1.0 - static_cast<double>(stats.clauses) / stats.clauses_baseline
                         : 0.0;
    return stats;
}

Morphism decode_model(const VarCatalog& catalog, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) < catalog.size())
        throw MalformedModel("assignment smaller than the variable catalog");
    Morphism m;
    m.kind = catalog.kind();
    const bool se = m.kind == MorphKind::SE;
    const int fluent_vars = se ? catalog.p2_fluents() : catalog.p_fluents();
    m.fluent_map.assign(fluent_vars, std::nullopt);
    m.op_map.assign(catalog.p_ops(), std::nullopt);

    std::vector<int> op_count(catalog.p_ops(), 0);
    std::vector<int> fluent_count(fluent_vars, 0);
    for (int id = 0; id < catalog.size(); ++id) {
        if (!assignment[id]) continue;
        const CnfVar& v = catalog.var(id);
        if (v.tag == VarTag::FAssoc) {
            int owner = se ? v.b : v.a;
            int target = se ? v.a : v.b;
            ++fluent_count[owner];
            if (fluent_count[owner] > 1)
                throw MalformedModel("fluent " + std::to_string(owner) +
                                     " has several images in the model");
            m.fluent_map[owner] = target;
        } else if (v.tag == VarTag::OAssoc) {
            ++op_count[v.a];
            if (op_count[v.a] > 1)
                throw MalformedModel("operator " + std::to_string(v.a) +
                                     " has several images in the model");
            m.op_map[v.a] = v.b;
        }
    }
    for (int f = 0; f < fluent_vars; ++f)
        if (fluent_count[f] == 0)
            throw MalformedModel("fluent " + std::to_string(f) + " has no image in the model");
    if (se) {
        for (int r = 0; r < catalog.p_ops(); ++r) {
            int active_var = catalog.oactive(r);
            bool active = active_var >= 0 && assignment[active_var];
            if (!active)
                m.op_map[r] = std::nullopt;
            else if (!m.op_map[r])
                throw MalformedModel("active operator " + std::to_string(r) +
                                     " has no image in the model");
        }
    } else {
        for (int r = 0; r < catalog.p_ops(); ++r)
            if (!m.op_map[r])
                throw MalformedModel("operator " + std::to_string(r) +
                                     " has no image in the model");
    }
    return m;
}

} // namespace stripsmorph
