#include "stripsmorph/generate.hpp"

#include <algorithm>

namespace stripsmorph {

std::vector<int> Rng::sample(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    shuffle(pool);
    pool.resize(std::min(n, k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

Graph random_graph(int vertices, int edge_percent, bool directed, Rng& rng) {
    Graph g;
    g.directed = directed;
    for (int i = 0; i < vertices; ++i) g.vertex_names.push_back("v" + std::to_string(i + 1));
    for (int u = 0; u < vertices; ++u) {
        for (int v = directed ? 0 : u + 1; v < vertices; ++v) {
            if (u == v) continue;
            if (rng.chance(edge_percent)) g.edges.emplace_back(u, v);
        }
    }
    return g;
}

namespace {

Bitset subset_from(const std::vector<int>& ids, int nf) {
    Bitset s(nf);
    for (int id : ids) s.set(id);
    return s;
}

} // namespace

StripsInstance random_instance(const RandomInstanceOptions& opts, Rng& rng,
                               const std::string& name) {
    StripsInstance p;
    p.name = name;
    const int nf = opts.fluents;
    for (int i = 0; i < nf; ++i) p.fluent_names.push_back("f" + std::to_string(i));
    p.init = Bitset(nf);
    p.goal = Bitset(nf);

    std::vector<std::vector<int>> layers;
    if (opts.layered && nf >= 4) {
        // Split fluents into a chain of small layers; operators consume one
        // layer and produce the next, which gives propagation real structure.
        int layer_count = std::max(3, nf / 6);
        layers.assign(layer_count, {});
        for (int f = 0; f < nf; ++f) layers[f * layer_count / nf].push_back(f);
        for (int f : layers.front())
            if (rng.chance(70)) p.init.set(f);
        for (int f : layers.back())
            if (rng.chance(60)) p.goal.set(f);
    } else {
        for (int f = 0; f < nf; ++f) {
            if (rng.chance(opts.init_percent)) p.init.set(f);
            if (rng.chance(opts.goal_percent)) p.goal.set(f);
        }
    }

    for (int o = 0; o < opts.ops; ++o) {
        Operator op;
        op.name = "o" + std::to_string(o);
        if (!layers.empty()) {
            int l = rng.below(static_cast<int>(layers.size()) - 1);
            const auto& from = layers[l];
            const auto& to = layers[l + 1];
            auto pick = [&](const std::vector<int>& pool, int count) {
                std::vector<int> out;
                for (int i : rng.sample(static_cast<int>(pool.size()), count))
                    out.push_back(pool[i]);
                return out;
            };
            auto pre = pick(from, 1 + rng.below(std::min<int>(opts.max_pre, from.size())));
            auto add = pick(to, 1 + rng.below(std::min<int>(opts.max_add, to.size())));
            op.pre = subset_from(pre, nf);
            op.add = subset_from(add, nf);
            // Deletes drawn from the preconditions keep profiles varied
            // through the strict-delete count.
            std::vector<int> del;
            for (int f : pre)
                if (rng.chance(50)) del.push_back(f);
            op.del = subset_from(del, nf);
        } else {
            op.pre = subset_from(rng.sample(nf, rng.below(opts.max_pre + 1)), nf);
            op.add = subset_from(rng.sample(nf, rng.below(opts.max_add + 1)), nf);
            std::vector<int> del;
            for (int i : rng.sample(nf, rng.below(opts.max_del + 1)))
                if (!op.add.test(i)) del.push_back(i);
            op.del = subset_from(del, nf);
        }
        p.operators.push_back(std::move(op));
    }
    validate(p);
    return p;
}

namespace {

// Renames and reorders an instance; out_fluent_perm[i] is the position of
// old fluent i in the new instance.
StripsInstance scramble(const StripsInstance& src, const std::string& prefix, Rng& rng,
                        std::vector<int>& fluent_pos, std::vector<int>& op_pos) {
    const int nf = src.fluent_count();
    std::vector<int> order(nf);
    for (int i = 0; i < nf; ++i) order[i] = i;
    rng.shuffle(order); // order[new] = old
    fluent_pos.assign(nf, -1);
    for (int pos = 0; pos < nf; ++pos) fluent_pos[order[pos]] = pos;

    StripsInstance out;
    out.name = src.name + "_scrambled";
    out.fluent_names.resize(nf);
    for (int pos = 0; pos < nf; ++pos)
        out.fluent_names[pos] = prefix + std::to_string(pos) + "_" + src.fluent_names[order[pos]];
    auto remap = [&](const Bitset& s) {
        Bitset t(nf);
        for (int f = s.next(); f != -1; f = s.next(f + 1)) t.set(fluent_pos[f]);
        return t;
    };
    out.init = remap(src.init);
    out.goal = remap(src.goal);

    std::vector<int> oorder(src.operator_count());
    for (int i = 0; i < src.operator_count(); ++i) oorder[i] = i;
    rng.shuffle(oorder);
    op_pos.assign(src.operator_count(), -1);
    for (int pos = 0; pos < src.operator_count(); ++pos) op_pos[oorder[pos]] = pos;
    out.operators.resize(src.operator_count());
    for (int pos = 0; pos < src.operator_count(); ++pos) {
        const Operator& o = src.operators[oorder[pos]];
        out.operators[pos] =
            Operator{prefix + "op" + std::to_string(pos) + "_" + o.name, remap(o.pre),
                     remap(o.add), remap(o.del)};
    }
    validate(out);
    return out;
}

} // namespace

PositivePair positive_pair_ssi(const RandomInstanceOptions& base, Rng& rng) {
    StripsInstance big = random_instance(base, rng, "target");

    // Keep every init/goal fluent; drop some of the others, then keep only
    // operators confined to the surviving fluents, minus a few more.
    const int nf = big.fluent_count();
    std::vector<int> keep_ids;
    for (int f = 0; f < nf; ++f) {
        if (big.init.test(f) || big.goal.test(f) || !rng.chance(25)) keep_ids.push_back(f);
    }
    Bitset kept = subset_from(keep_ids, nf);
    std::vector<int> new_id(nf, -1);
    for (std::size_t i = 0; i < keep_ids.size(); ++i) new_id[keep_ids[i]] = static_cast<int>(i);

    StripsInstance small;
    small.name = "source";
    for (int f : keep_ids) small.fluent_names.push_back(big.fluent_names[f]);
    auto restrict_set = [&](const Bitset& s) {
        Bitset t(static_cast<int>(keep_ids.size()));
        for (int f = s.next(); f != -1; f = s.next(f + 1))
            if (new_id[f] >= 0) t.set(new_id[f]);
        return t;
    };
    small.init = restrict_set(big.init);
    small.goal = restrict_set(big.goal);
    std::vector<int> kept_ops;
    for (int o = 0; o < big.operator_count(); ++o) {
        const Operator& op = big.operators[o];
        Bitset vars = op.pre | op.add | op.del;
        if (!vars.is_subset_of(kept)) continue;
        if (rng.chance(20)) continue;
        kept_ops.push_back(o);
        small.operators.push_back(
            Operator{op.name, restrict_set(op.pre), restrict_set(op.add), restrict_set(op.del)});
    }
    validate(small);

    std::vector<int> fluent_pos, op_pos;
    StripsInstance scrambled = scramble(small, "u", rng, fluent_pos, op_pos);

    PositivePair pair;
    pair.a = std::move(scrambled);
    pair.b = std::move(big);
    pair.witness.kind = MorphKind::SSI;
    pair.witness.fluent_map.assign(pair.a.fluent_count(), std::nullopt);
    pair.witness.op_map.assign(pair.a.operator_count(), std::nullopt);
    for (std::size_t i = 0; i < keep_ids.size(); ++i)
        pair.witness.fluent_map[fluent_pos[i]] = keep_ids[i];
    for (std::size_t i = 0; i < kept_ops.size(); ++i) pair.witness.op_map[op_pos[i]] = kept_ops[i];
    return pair;
}

PositivePair positive_pair_se(const RandomInstanceOptions& base, Rng& rng) {
    StripsInstance host = random_instance(base, rng, "host");

    // Project onto a random fluent subset, weaken goals, drop preconditions,
    // possibly strengthen the init, and share derived operators between host
    // operators with the same restriction.
    const int nf = host.fluent_count();
    std::vector<int> keep_ids;
    for (int f = 0; f < nf; ++f)
        if (!rng.chance(30)) keep_ids.push_back(f);
    if (keep_ids.empty()) keep_ids.push_back(0);
    Bitset kept = subset_from(keep_ids, nf);
    std::vector<int> new_id(nf, -1);
    for (std::size_t i = 0; i < keep_ids.size(); ++i) new_id[keep_ids[i]] = static_cast<int>(i);
    const int nf2 = static_cast<int>(keep_ids.size());

    StripsInstance emb;
    emb.name = "embedded";
    for (int f : keep_ids) emb.fluent_names.push_back("e" + std::to_string(new_id[f]) + "_" +
                                                      host.fluent_names[f]);
    auto restrict_set = [&](const Bitset& s) {
        Bitset t(nf2);
        for (int f = s.next(); f != -1; f = s.next(f + 1))
            if (new_id[f] >= 0) t.set(new_id[f]);
        return t;
    };
    emb.init = restrict_set(host.init);
    for (int i = 0; i < nf2; ++i)
        if (!emb.init.test(i) && rng.chance(15)) emb.init.set(i); // strengthen
    Bitset goal_all = restrict_set(host.goal);
    emb.goal = Bitset(nf2);
    for (int f = goal_all.next(); f != -1; f = goal_all.next(f + 1))
        if (!rng.chance(30)) emb.goal.set(f); // weaken

    PositivePair pair;
    pair.witness.kind = MorphKind::SE;
    pair.witness.fluent_map.assign(nf2, std::nullopt);
    for (int i = 0; i < nf2; ++i) pair.witness.fluent_map[i] = keep_ids[i];
    pair.witness.op_map.assign(host.operator_count(), std::nullopt);

    std::vector<Operator> derived;
    for (int o = 0; o < host.operator_count(); ++o) {
        const Operator& op = host.operators[o];
        if (!op.add.intersects(kept) && !op.del.intersects(kept)) continue; // inactive
        Bitset pre = restrict_set(op.pre);
        for (int f = pre.next(); f != -1; f = pre.next(f + 1))
            if (rng.chance(30)) pre.reset(f); // drop preconditions
        Operator cand{"", pre, restrict_set(op.add), restrict_set(op.del)};
        int found = -1;
        for (std::size_t d = 0; d < derived.size(); ++d) {
            if (derived[d].pre == cand.pre && derived[d].add == cand.add &&
                derived[d].del == cand.del) {
                found = static_cast<int>(d);
                break;
            }
        }
        if (found < 0) {
            found = static_cast<int>(derived.size());
            cand.name = "m" + std::to_string(found);
            derived.push_back(std::move(cand));
        }
        pair.witness.op_map[o] = found;
    }
    emb.operators = std::move(derived);
    validate(emb);

    pair.a = std::move(host);
    pair.b = std::move(emb);
    return pair;
}

} // namespace stripsmorph
