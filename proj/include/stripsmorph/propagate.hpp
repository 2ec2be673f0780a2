#pragma once

#include "stripsmorph/model.hpp"

#include <optional>
#include <vector>

namespace stripsmorph {

// (|pre|, |add|, |del|, #strict-delete); a fluent is strict-delete when it is
// both a precondition and a delete effect.
struct Profile {
    int pre = 0, add = 0, del = 0, strict_del = 0;

    friend bool operator==(const Profile&, const Profile&) = default;
};

Profile profile(const Operator& o);

// Componentwise order used by the SE domain initialization.
bool profile_leq(const Profile& a, const Profile& b);

enum class Usefulness { Unknown, Useful, NotUseful };

// Candidate sets for one direction of search.
//
// SI/SSI-H/SSI: fluent_dom is indexed by fluents of P with candidates in P2;
// op_dom likewise. usefulness is unused.
//
// SE: fluent_dom is indexed by fluents of the embedded instance P2 with
// candidates in the host P; op_dom is indexed by host operators with
// candidates in P2; usefulness is the tri-state per host fluent.
struct DomainTable {
    MorphKind kind = MorphKind::SSI;
    std::vector<Bitset> fluent_dom;
    std::vector<Bitset> op_dom;
    std::vector<Usefulness> usefulness;

    bool any_empty() const {
        for (const auto& d : fluent_dom)
            if (d.none()) return true;
        for (const auto& d : op_dom)
            if (d.none()) return true;
        return false;
    }

    long fluent_pairs() const {
        long n = 0;
        for (const auto& d : fluent_dom) n += d.count();
        return n;
    }
    long op_pairs() const {
        long n = 0;
        for (const auto& d : op_dom) n += d.count();
        return n;
    }
};

// Per-rule initialization only, no propagation: the I/G partition for fluent
// domains (full domains for SSI-H), profile equality for SSI-family operator
// domains, componentwise profile dominance for SE, all usefulness unknown.
DomainTable init_domains(const StripsInstance& p, const StripsInstance& p2, MorphKind kind);

// Single revisions; each returns whether the domain shrank.
bool revise_fluent(DomainTable& dt, const StripsInstance& p, const StripsInstance& p2, int f);
bool revise_operator(DomainTable& dt, const StripsInstance& p, const StripsInstance& p2, int o);
bool revise_usefulness(DomainTable& dt, const StripsInstance& p, const StripsInstance& p2, int f);

struct ScanResult {
    bool contradiction = false;
    std::vector<int> newly_useful;
};

// Groups embedded fluents by identical domain U: n fluents sharing U with
// |U| = n makes every member of U useful; |U| < n admits no embedding.
ScanResult usefulness_scan(DomainTable& dt);

struct Ac3Stats {
    long revisions = 0;
    long pruned_fluent_pairs = 0;
    long pruned_op_pairs = 0;
};

// AC3-style fixpoint: seeds the queue with all fluents, the usefulness-scan
// token (SE only), then all operators; re-enqueues related variables after
// each shrinking revision. Returns nullopt as soon as any domain empties or
// the usefulness scan finds a contradiction (EarlyUnsat).
std::optional<DomainTable> ac3(const StripsInstance& p, const StripsInstance& p2, MorphKind kind,
                               Ac3Stats* stats = nullptr);

} // namespace stripsmorph
