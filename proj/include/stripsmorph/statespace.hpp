#pragma once

#include "stripsmorph/model.hpp"
#include "stripsmorph/search.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace stripsmorph {

// Explicit labeled transition system over a fluent subset. States are all
// 2^k subsets of the tracked fluents, encoded as bit masks over the compact
// local ordering in `fluents` (ascending global ids).
struct Lts {
    std::vector<int> fluents;
    std::vector<std::tuple<std::uint32_t, int, std::uint32_t>> transitions;
    std::uint32_t initial = 0;
    std::vector<bool> is_goal; // indexed by state mask

    int fluent_count() const { return static_cast<int>(fluents.size()); }
    std::uint64_t state_count() const { return std::uint64_t{1} << fluents.size(); }
};

// Full state space; throws TooLarge beyond the cap.
Lts build_lts(const StripsInstance& p, int cap = 15);

// Abstract state space under the projection onto E: states are restricted to
// E, each concrete transition maps to a (deduplicated) abstract one.
Lts project_lts(const StripsInstance& p, const Bitset& fluents, int cap = 15);

struct AbstractionReport {
    bool bijection_ok = false;
    bool transitions_ok = false;
    bool path_ok = false;
    std::vector<std::string> counterexamples;

    bool ok() const { return bijection_ok && transitions_ok && path_ok; }
    std::string to_json() const;
};

// Executable form of the abstraction lemma: with m a verified embedding of p2
// in the host p, (i) states of the projection of p onto the image of the
// fluent map are in bijection with states of p2's state space, (ii) every
// non-reflexive abstract transition has a counterpart in p2, (iii) a
// goal-reaching path in the projection implies one in p2. Throws InvalidInput
// when m fails SE verification or its fluent map is not total (the bijection
// needs the full image).
AbstractionReport check_embedding_abstraction(const StripsInstance& p, const StripsInstance& p2,
                                              const Morphism& m, int cap = 15);

// Shortest solution plan by breadth-first search over the explicit LTS.
std::optional<Plan> find_solution_plan(const StripsInstance& p, int cap = 15);

std::string lts_to_dot(const Lts& lts, const StripsInstance& p);

} // namespace stripsmorph
