#pragma once

#include "stripsmorph/graphs.hpp"
#include "stripsmorph/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stripsmorph {

// Self-contained xorshift generator so outputs depend only on the seed, not
// on standard-library distribution details.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed * 0x9e3779b97f4a7c15ULL + 1) {
        for (int i = 0; i < 8; ++i) next();
    }

    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }

    int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % n); }
    bool chance(int percent) { return below(100) < percent; }

    template <typename T> void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[i], v[below(i + 1)]);
    }

    // Distinct draw of k elements out of [0, n).
    std::vector<int> sample(int n, int k);

private:
    std::uint64_t state_;
};

Graph random_graph(int vertices, int edge_percent, bool directed, Rng& rng);

struct RandomInstanceOptions {
    int fluents = 5;
    int ops = 5;
    int max_pre = 2;
    int max_add = 2;
    int max_del = 2;
    int init_percent = 40; // chance per fluent
    int goal_percent = 30;
    bool layered = false; // chain structure: ops consume a layer, produce the next
};

StripsInstance random_instance(const RandomInstanceOptions& opts, Rng& rng,
                               const std::string& name = "random");

// A pair in checking order plus a witness that must verify: for SSI/SSI-H the
// first instance is a renamed restriction of the second; for SE the first is
// the host and the second a weakened, renamed projection of it.
struct PositivePair {
    StripsInstance a;
    StripsInstance b;
    Morphism witness;
};

PositivePair positive_pair_ssi(const RandomInstanceOptions& base, Rng& rng);
PositivePair positive_pair_se(const RandomInstanceOptions& base, Rng& rng);

} // namespace stripsmorph
