#pragma once

#include "stripsmorph/encode.hpp"
#include "stripsmorph/sat.hpp"

#include <optional>
#include <string>

namespace stripsmorph {

// Instance beyond the exhaustive-search guard.
struct TooLarge : ModelError {
    using ModelError::ModelError;
};

// A precondition on a passed-in morphism failed.
struct InvalidInput : ModelError {
    using ModelError::ModelError;
};

// A solver model failed verification: encoder or solver defect.
struct InternalInconsistency : ModelError {
    using ModelError::ModelError;
};

struct RunStats {
    double cp_seconds = 0.0;
    double compile_seconds = 0.0;
    double solve_seconds = 0.0;
    long clauses = 0;
    long clauses_baseline = 0;
    long vars = 0;
    double simplified_fraction = 0.0;
    bool early_unsat = false;
    long pruned_fluent_pairs = 0;
    long pruned_op_pairs = 0;
    SolveStats solver;

    std::string to_json(MorphKind kind, const std::string& result) const;
    std::string to_table(MorphKind kind, const std::string& result) const;
};

struct FindConfig {
    bool use_cp = true;
    SolverConfig solver;
};

struct FindResult {
    enum class Outcome { Found, NoMorphism, Timeout };

    Outcome outcome = Outcome::NoMorphism;
    std::optional<Morphism> morphism;
    RunStats stats;

    const char* outcome_name() const {
        switch (outcome) {
        case Outcome::Found: return "found";
        case Outcome::NoMorphism: return "none";
        default: return "timeout";
        }
    }
};

// The two-phase pipeline: constraint propagation (unless disabled), CNF
// compilation over the surviving domains, SAT search, decoding, and a final
// verification of the witness. For SE, p is the host and p2 the embedded
// instance. Throws InternalInconsistency if a model fails verification.
FindResult find_morphism(const StripsInstance& p, const StripsInstance& p2, MorphKind kind,
                         const FindConfig& cfg = {});

// Independent exhaustive oracle: enumerates injective fluent maps in
// lexicographic order and, per fluent map, operator maps; returns the first
// mapping that verifies. Guarded to at most 8 fluents and operators per side.
std::optional<Morphism> brute_force(const StripsInstance& p, const StripsInstance& p2,
                                    MorphKind kind);

// From a verified subinstance isomorphism m: P -> P2, builds the induced
// embedding of P2 in P: the fluent map is the inverse of m's restricted to
// its image, the operator map is reused. Throws InvalidInput when m does not
// verify as an SSI or P has no fluents.
Morphism embedding_from_ssi(const StripsInstance& p, const StripsInstance& p2,
                            const Morphism& m);

} // namespace stripsmorph
