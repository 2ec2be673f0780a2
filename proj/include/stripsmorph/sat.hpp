#pragma once

#include "stripsmorph/encode.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stripsmorph {

struct ExternalSolverFailure : ModelError {
    using ModelError::ModelError;
};

using Assignment = std::vector<bool>;

struct SolverConfig {
    enum class Backend { Internal, External };

    Backend backend = Backend::Internal;
    std::string external_path;
    double timeout_seconds = 1e9; // must stay positive
    std::uint64_t seed = 0;
};

struct SolveStats {
    long decisions = 0;
    long conflicts = 0;
    long propagations = 0;
};

struct SolveResult {
    enum class Kind { Sat, Unsat, Timeout };

    Kind kind = Kind::Unsat;
    Assignment model; // total over the formula's variables when Sat
    SolveStats stats;
};

// Complete decision procedure. The internal backend is a small CDCL solver
// (watched literals, first-UIP learning, activity heap, Luby restarts),
// deterministic for a fixed (formula, seed). Models are re-checked before
// being returned. The external backend round-trips through DIMACS and the
// SAT-competition output conventions ('s ...' and 'v ...' lines).
SolveResult solve(const CnfFormula& formula, const SolverConfig& cfg);

bool check_model(const CnfFormula& formula, const Assignment& assignment);

} // namespace stripsmorph
