#include "stripsmorph/model.hpp"

#include <algorithm>
#include <unordered_set>

namespace stripsmorph {

int StripsInstance::fluent_id(const std::string& n) const {
    for (int i = 0; i < fluent_count(); ++i)
        if (fluent_names[i] == n) return i;
    return -1;
}

int StripsInstance::operator_id(const std::string& n) const {
    for (int i = 0; i < operator_count(); ++i)
        if (operators[i].name == n) return i;
    return -1;
}

void validate(const StripsInstance& instance) {
    const int nf = instance.fluent_count();
    std::unordered_set<std::string> seen;
    for (const auto& n : instance.fluent_names) {
        if (!seen.insert(n).second)
            throw ValidationError("duplicate fluent name '" + n + "'");
    }
    seen.clear();
    auto check_set = [&](const Bitset& s, const char* what) {
        if (s.size() != nf)
            throw ValidationError(std::string(what) + " not sized to the fluent universe");
    };
    check_set(instance.init, "init");
    check_set(instance.goal, "goal");
    for (const auto& op : instance.operators) {
        if (!seen.insert(op.name).second)
            throw ValidationError("duplicate operator name '" + op.name + "'");
        check_set(op.pre, ("operator '" + op.name + "' pre").c_str());
        check_set(op.add, ("operator '" + op.name + "' add").c_str());
        check_set(op.del, ("operator '" + op.name + "' del").c_str());
        if (op.add.intersects(op.del))
            throw ValidationError("inconsistent effect in operator '" + op.name +
                                  "': add and del overlap");
    }
}

StripsInstance make_instance(std::string name, std::vector<std::string> fluents,
                             const std::vector<std::string>& init,
                             const std::vector<std::string>& goal,
                             const std::vector<std::tuple<std::string, std::vector<std::string>,
                                                          std::vector<std::string>,
                                                          std::vector<std::string>>>& ops) {
    StripsInstance out;
    out.name = std::move(name);
    out.fluent_names = std::move(fluents);
    const int nf = out.fluent_count();
    auto to_set = [&](const std::vector<std::string>& names) {
        Bitset s(nf);
        for (const auto& n : names) {
            int id = out.fluent_id(n);
            if (id < 0) throw ValidationError("unknown fluent '" + n + "'");
            s.set(id);
        }
        return s;
    };
    out.init = to_set(init);
    out.goal = to_set(goal);
    for (const auto& [opname, pre, add, del] : ops)
        out.operators.push_back(Operator{opname, to_set(pre), to_set(add), to_set(del)});
    validate(out);
    return out;
}

const char* to_string(MorphKind kind) {
    switch (kind) {
    case MorphKind::SI: return "si";
    case MorphKind::SSIH: return "ssih";
    case MorphKind::SSI: return "ssi";
    case MorphKind::SE: return "se";
    }
    return "?";
}

std::optional<MorphKind> morph_kind_from_string(const std::string& s) {
    if (s == "si") return MorphKind::SI;
    if (s == "ssih") return MorphKind::SSIH;
    if (s == "ssi") return MorphKind::SSI;
    if (s == "se") return MorphKind::SE;
    return std::nullopt;
}

bool is_applicable(const State& s, const Operator& o) { return o.pre.is_subset_of(s); }

State apply_operator(const State& s, const Operator& o) {
    if (!is_applicable(s, o))
        throw NotApplicable("operator '" + o.name + "' not applicable");
    return (s - o.del) | o.add;
}

bool validate_plan(const StripsInstance& instance, const Plan& plan, bool as_solution) {
    State s = instance.init;
    for (OperatorId id : plan) {
        const Operator& o = instance.operators[id];
        if (!is_applicable(s, o)) return false;
        s = (s - o.del) | o.add;
    }
    return !as_solution || instance.goal.is_subset_of(s);
}

Bitset fluent_image(const Morphism& m, int host_fluent_count) {
    Bitset image(host_fluent_count);
    for (const auto& t : m.fluent_map)
        if (t) image.set(*t);
    return image;
}

bool se_operator_active(const Operator& host_op, const Bitset& image) {
    return host_op.add.intersects(image) || host_op.del.intersects(image);
}

namespace {

Bitset map_set(const Bitset& src, const std::vector<std::optional<FluentId>>& fmap,
               int target_size, bool* all_defined) {
    Bitset out(target_size);
    for (int f = src.next(); f != -1; f = src.next(f + 1)) {
        if (!fmap[f]) {
            if (all_defined) *all_defined = false;
            continue;
        }
        out.set(*fmap[f]);
    }
    return out;
}

void check_shape_iso(const StripsInstance& p, const StripsInstance& p2, const Morphism& m) {
    if (static_cast<int>(m.fluent_map.size()) != p.fluent_count() ||
        static_cast<int>(m.op_map.size()) != p.operator_count())
        throw ShapeMismatch("morphism maps not indexed by the source instance");
    if (m.kind == MorphKind::SI &&
        (p.fluent_count() != p2.fluent_count() || p.operator_count() != p2.operator_count()))
        throw ShapeMismatch("isomorphism requires instances of identical size");
    for (int f = 0; f < p.fluent_count(); ++f) {
        if (!m.fluent_map[f]) throw ShapeMismatch("fluent map not total");
        if (*m.fluent_map[f] < 0 || *m.fluent_map[f] >= p2.fluent_count())
            throw ShapeMismatch("fluent map target out of range");
    }
    for (int o = 0; o < p.operator_count(); ++o) {
        if (!m.op_map[o]) throw ShapeMismatch("operator map not total");
        if (*m.op_map[o] < 0 || *m.op_map[o] >= p2.operator_count())
            throw ShapeMismatch("operator map target out of range");
    }
}

void verify_iso_family(const StripsInstance& p, const StripsInstance& p2, const Morphism& m,
                       VerifyReport& report) {
    check_shape_iso(p, p2, m);

    // Injectivity of the fluent map.
    {
        std::vector<int> preimage(p2.fluent_count(), -1);
        for (int f = 0; f < p.fluent_count(); ++f) {
            int t = *m.fluent_map[f];
            if (preimage[t] >= 0)
                report.violations.push_back("injectivity: fluents '" + p.fluent_names[preimage[t]] +
                                            "' and '" + p.fluent_names[f] + "' share image '" +
                                            p2.fluent_names[t] + "'");
            else
                preimage[t] = f;
        }
    }
    // Injectivity of the operator map (enforced for all three kinds, matching
    // the search semantics).
    {
        std::vector<int> preimage(p2.operator_count(), -1);
        for (int o = 0; o < p.operator_count(); ++o) {
            int t = *m.op_map[o];
            if (preimage[t] >= 0)
                report.violations.push_back("nu_injectivity: operators '" +
                                            p.operators[preimage[t]].name + "' and '" +
                                            p.operators[o].name + "' share image '" +
                                            p2.operators[t].name + "'");
            else
                preimage[t] = o;
        }
    }

    // Morphism condition: nu(o) = <v(pre(o)), v(eff(o))> for every operator.
    for (int o = 0; o < p.operator_count(); ++o) {
        const Operator& src = p.operators[o];
        const Operator& dst = p2.operators[*m.op_map[o]];
        auto img = [&](const Bitset& s) { return map_set(s, m.fluent_map, p2.fluent_count(), nullptr); };
        if (img(src.pre) != dst.pre)
            report.violations.push_back("morphism_pre(" + src.name + "): image differs from pre(" +
                                        dst.name + ")");
        if (img(src.add) != dst.add)
            report.violations.push_back("morphism_add(" + src.name + "): image differs from add(" +
                                        dst.name + ")");
        if (img(src.del) != dst.del)
            report.violations.push_back("morphism_del(" + src.name + "): image differs from del(" +
                                        dst.name + ")");
    }

    if (m.kind == MorphKind::SI || m.kind == MorphKind::SSI) {
        if (map_set(p.init, m.fluent_map, p2.fluent_count(), nullptr) != p2.init)
            report.violations.push_back("init_condition: image of init differs from target init");
        if (map_set(p.goal, m.fluent_map, p2.fluent_count(), nullptr) != p2.goal)
            report.violations.push_back("goal_condition: image of goal differs from target goal");
    }

    if (m.kind == MorphKind::SI) {
        Bitset fimg = fluent_image(m, p2.fluent_count());
        if (fimg.count() != p2.fluent_count())
            report.violations.push_back("surjectivity_fluents: some target fluent has no preimage");
        Bitset oimg(p2.operator_count());
        for (const auto& t : m.op_map)
            if (t) oimg.set(*t);
        if (oimg.count() != p2.operator_count())
            report.violations.push_back("surjectivity_operators: some target operator has no preimage");
    }
}

void verify_se(const StripsInstance& p, const StripsInstance& p2, const Morphism& m,
               VerifyReport& report) {
    // p is the host, p2 the embedded instance. fluent_map: F(p2) -> F(p);
    // op_map: O(p) -> O(p2), partial.
    if (static_cast<int>(m.fluent_map.size()) != p2.fluent_count() ||
        static_cast<int>(m.op_map.size()) != p.operator_count())
        throw ShapeMismatch("embedding maps not indexed by embedded fluents / host operators");
    for (const auto& t : m.fluent_map)
        if (t && (*t < 0 || *t >= p.fluent_count()))
            throw ShapeMismatch("fluent map target out of range");
    for (const auto& t : m.op_map)
        if (t && (*t < 0 || *t >= p2.operator_count()))
            throw ShapeMismatch("operator map target out of range");

    {
        std::vector<int> preimage(p.fluent_count(), -1);
        for (int f = 0; f < p2.fluent_count(); ++f) {
            if (!m.fluent_map[f]) continue;
            int t = *m.fluent_map[f];
            if (preimage[t] >= 0)
                report.violations.push_back("injectivity: fluents '" + p2.fluent_names[preimage[t]] +
                                            "' and '" + p2.fluent_names[f] + "' share image '" +
                                            p.fluent_names[t] + "'");
            else
                preimage[t] = f;
        }
    }

    Bitset image = fluent_image(m, p.fluent_count());

    for (int o = 0; o < p.operator_count(); ++o) {
        const Operator& host = p.operators[o];
        if (!se_operator_active(host, image)) continue; // inactive: no condition
        if (!m.op_map[o]) {
            report.violations.push_back("active_coverage(" + host.name +
                                        "): active operator has no image");
            continue;
        }
        const Operator& emb = p2.operators[*m.op_map[o]];
        bool defined = true;
        Bitset add_img = map_set(emb.add, m.fluent_map, p.fluent_count(), &defined);
        if (!defined || add_img != (host.add & image))
            report.violations.push_back("effp_equality(" + host.name + "): image of add(" +
                                        emb.name + ") differs from add within the image");
        defined = true;
        Bitset del_img = map_set(emb.del, m.fluent_map, p.fluent_count(), &defined);
        if (!defined || del_img != (host.del & image))
            report.violations.push_back("effm_equality(" + host.name + "): image of del(" +
                                        emb.name + ") differs from del within the image");
        defined = true;
        Bitset pre_img = map_set(emb.pre, m.fluent_map, p.fluent_count(), &defined);
        if (!defined || !pre_img.is_subset_of(host.pre & image))
            report.violations.push_back("pre_inclusion(" + host.name + "): image of pre(" +
                                        emb.name + ") not contained in pre within the image");
    }

    // v(G') must lie inside G (intersected with the image, which is automatic).
    for (int f = p2.goal.next(); f != -1; f = p2.goal.next(f + 1)) {
        if (!m.fluent_map[f]) {
            report.violations.push_back("goal_inclusion: goal fluent '" + p2.fluent_names[f] +
                                        "' has no image");
        } else if (!p.goal.test(*m.fluent_map[f])) {
            report.violations.push_back("goal_inclusion: image of '" + p2.fluent_names[f] +
                                        "' is not a goal of the host");
        }
    }

    // v(I') must cover I within the image.
    {
        bool defined = true;
        Bitset init_img = map_set(p2.init, m.fluent_map, p.fluent_count(), &defined);
        Bitset needed = p.init & image;
        if (!needed.is_subset_of(init_img))
            report.violations.push_back(
                "init_superset: host init fluents inside the image are not covered by the "
                "image of the embedded init");
    }
}

} // namespace

VerifyReport verify_morphism(const StripsInstance& p, const StripsInstance& p2,
                             const Morphism& m) {
    VerifyReport report;
    if (m.kind == MorphKind::SE)
        verify_se(p, p2, m, report);
    else
        verify_iso_family(p, p2, m, report);
    return report;
}

Plan translate_plan(const StripsInstance& p, const StripsInstance& p2, const Morphism& m,
                    const Plan& plan) {
    VerifyReport report = verify_morphism(p, p2, m);
    if (!report.valid())
        throw InvalidMorphism("morphism fails verification: " + report.violations.front());
    Plan out;
    if (m.kind == MorphKind::SE) {
        Bitset image = fluent_image(m, p.fluent_count());
        for (OperatorId o : plan) {
            if (!se_operator_active(p.operators[o], image)) continue;
            out.push_back(*m.op_map[o]);
        }
    } else {
        out.reserve(plan.size());
        for (OperatorId o : plan) out.push_back(*m.op_map[o]);
    }
    return out;
}

} // namespace stripsmorph
