#pragma once

#include "stripsmorph/search.hpp"

#include <string>
#include <vector>

namespace stripsmorph {

struct BenchOptions {
    std::string corpus_dir;
    std::vector<MorphKind> kinds;
    double timeout_seconds = 300.0;
    int jobs = 1;
    SolverConfig solver; // backend/seed template; timeout comes from above
};

struct BenchRow {
    std::string pair;
    MorphKind kind = MorphKind::SSI;
    std::string result;       // with propagation
    std::string nocp_result;  // without
    RunStats cp;
    RunStats nocp;
    bool witness_verified = false; // found mappings re-checked
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::string csv() const;
    std::string summary() const;
};

// Runs every (pair, kind) with and without propagation over a corpus of
// <name>.a.strips / <name>.b.strips files. Workers share nothing; rows come
// back in corpus order regardless of the job count.
BenchReport run_bench(const BenchOptions& options);

} // namespace stripsmorph
