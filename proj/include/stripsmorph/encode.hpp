#pragma once

#include "stripsmorph/model.hpp"
#include "stripsmorph/propagate.hpp"

#include <optional>
#include <vector>

namespace stripsmorph {

// Solver returned an assignment violating the image clauses; encoder or
// solver bug, never a user error.
struct MalformedModel : ModelError {
    using ModelError::ModelError;
};

enum class VarTag { FAssoc, OAssoc, FUseful, OActive };

// One propositional variable. For FAssoc/OAssoc, `a` is always the element
// of P and `b` the element of P2, for both directions of SE maps. For the
// unary tags, `a` is the element of P and `b` is -1.
struct CnfVar {
    VarTag tag;
    int a;
    int b;
};

class VarCatalog {
public:
    VarCatalog() = default;
    VarCatalog(MorphKind kind, int p_fluents, int p2_fluents, int p_ops, int p2_ops);

    int add(VarTag tag, int a, int b = -1);

    // -1 when the pair/element has no variable.
    int fassoc(int i, int j) const { return fassoc_[i * p2_fluents_ + j]; }
    int oassoc(int r, int s) const { return oassoc_[r * p2_ops_ + s]; }
    int fuseful(int i) const { return fuseful_[i]; }
    int oactive(int r) const { return oactive_[r]; }

    int size() const { return static_cast<int>(vars_.size()); }
    const CnfVar& var(int id) const { return vars_[id]; }
    MorphKind kind() const { return kind_; }
    int p_fluents() const { return p_fluents_; }
    int p2_fluents() const { return p2_fluents_; }
    int p_ops() const { return p_ops_; }
    int p2_ops() const { return p2_ops_; }

private:
    MorphKind kind_ = MorphKind::SSI;
    int p_fluents_ = 0, p2_fluents_ = 0, p_ops_ = 0, p2_ops_ = 0;
    std::vector<CnfVar> vars_;
    std::vector<int> fassoc_, oassoc_, fuseful_, oactive_;
};

// Clauses are lists of literals; literal l > 0 means variable l-1 true,
// l < 0 means variable -l-1 false. No duplicate literals within a clause.
// An empty clause marks a formula concluded unsatisfiable at encoding time.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    VarCatalog catalog;
};

// Builds the propositional formula whose models are exactly the morphisms of
// the given kind, instantiated only over pairs surviving the domain table.
// SI reuses the SSI clauses plus surjectivity on both target sides.
CnfFormula encode_cnf(const StripsInstance& p, const StripsInstance& p2, const DomainTable& dt,
                      MorphKind kind);

struct SimplificationStats {
    long clauses = 0;          // clause count under the given table
    long clauses_baseline = 0; // clause count under init-only domains
    long vars = 0;
    long vars_baseline = 0;
    bool early_unsat = false;
    double fraction = 0.0; // eliminated fraction: 1 - clauses/baseline
};

// dt == nullopt means propagation concluded by itself (EarlyUnsat); by
// convention the whole encoding counts as simplified (fraction 1.0).
SimplificationStats simplification_stats(const StripsInstance& p, const StripsInstance& p2,
                                         const std::optional<DomainTable>& dt, MorphKind kind);

// Reads a total assignment back into a morphism. For SE, the operator map is
// left undefined wherever the activity variable is false.
Morphism decode_model(const VarCatalog& catalog, const std::vector<bool>& assignment);

} // namespace stripsmorph
