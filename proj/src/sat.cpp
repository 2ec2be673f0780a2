#include "stripsmorph/sat.hpp"

#include "stripsmorph/textio.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

namespace stripsmorph {

namespace {

// Literal encoding: 2*var for the positive literal, 2*var+1 for the negative.
inline int to_lit(int dimacs) {
    int var = dimacs > 0 ? dimacs - 1 : -dimacs - 1;
    return 2 * var + (dimacs < 0 ? 1 : 0);
}
inline int lit_var(int lit) { return lit >> 1; }
inline bool lit_sign(int lit) { return lit & 1; } // true = negative
inline int lit_neg(int lit) { return lit ^ 1; }

class Cdcl {
public:
    Cdcl(const CnfFormula& formula, const SolverConfig& cfg)
        : num_vars_(formula.num_vars), cfg_(cfg) {
        value_.assign(num_vars_, -1);
        level_.assign(num_vars_, 0);
        reason_.assign(num_vars_, -1);
        activity_.assign(num_vars_, 0.0);
        polarity_.assign(num_vars_, 1); // try false first
        heap_index_.assign(num_vars_, -1);
        watches_.assign(2 * num_vars_, {});
        seen_.assign(num_vars_, 0);

        std::uint64_t x = cfg.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
        auto next_rand = [&x]() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            return x;
        };
        for (int v = 0; v < num_vars_; ++v) activity_[v] = (next_rand() % 1024) * 1e-9;
        for (int v = 0; v < num_vars_; ++v) heap_insert(v);

        for (const auto& clause : formula.clauses) {
            std::vector<int> lits;
            lits.reserve(clause.size());
            for (int d : clause) lits.push_back(to_lit(d));
            if (!add_clause(std::move(lits))) {
                unsat_at_root_ = true;
                return;
            }
        }
    }

    SolveResult::Kind run() {
        if (unsat_at_root_) return SolveResult::Kind::Unsat;
        auto start = std::chrono::steady_clock::now();
        long restart_conflicts = 256 * luby(restarts_++);
        long conflicts_here = 0;
        while (true) {
            int confl = propagate();
            if (confl >= 0) {
                ++stats.conflicts;
                ++conflicts_here;
                if (decision_level() == 0) return SolveResult::Kind::Unsat;
                std::vector<int> learnt;
                int back_level = analyze(confl, learnt);
                backtrack(back_level);
                attach_learnt(std::move(learnt));
                decay_activities();
                if ((stats.conflicts & 1023) == 0 && timed_out(start))
                    return SolveResult::Kind::Timeout;
            } else {
                if (conflicts_here >= restart_conflicts) {
                    conflicts_here = 0;
                    restart_conflicts = 256 * luby(restarts_++);
                    backtrack(0);
                }
                int var = pick_branch_variable();
                if (var < 0) return SolveResult::Kind::Sat;
                ++stats.decisions;
                if ((stats.decisions & 4095) == 0 && timed_out(start))
                    return SolveResult::Kind::Timeout;
                trail_lim_.push_back(static_cast<int>(trail_.size()));
                enqueue(2 * var + polarity_[var], -1);
            }
        }
    }

    Assignment model() const {
        Assignment m(num_vars_, false);
        for (int v = 0; v < num_vars_; ++v) m[v] = value_[v] == 1;
        return m;
    }

    SolveStats stats;

private:
    bool timed_out(std::chrono::steady_clock::time_point start) const {
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
        return elapsed.count() > cfg_.timeout_seconds;
    }

    static long luby(long x) {
        // Luby restart sequence 1 1 2 1 1 2 4 ..., 0-based index.
        long size = 1, seq = 0;
        while (size < x + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        while (size - 1 != x) {
            size = (size - 1) >> 1;
            --seq;
            x %= size;
        }
        return 1L << seq;
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    signed char lit_value(int lit) const {
        signed char v = value_[lit_var(lit)];
        if (v < 0) return -1;
        return lit_sign(lit) ? static_cast<signed char>(1 - v) : v;
    }

    bool add_clause(std::vector<int> lits) {
        // Root-level simplification: drop false literals, detect tautologies.
        std::vector<int> out;
        for (int lit : lits) {
            if (lit_value(lit) == 1) return true;
            bool dup = false, taut = false;
            for (int other : out) {
                if (other == lit) dup = true;
                if (other == lit_neg(lit)) taut = true;
            }
            if (taut) return true;
            if (dup) continue;
            if (lit_value(lit) == -1) out.push_back(lit);
        }
        if (out.empty()) return false;
        if (out.size() == 1) return enqueue(out[0], -1) && propagate() < 0;
        attach(std::move(out));
        return true;
    }

    void attach(std::vector<int> lits) {
        int id = static_cast<int>(clauses_.size());
        watches_[lits[0]].push_back(id);
        watches_[lits[1]].push_back(id);
        clauses_.push_back(std::move(lits));
    }

    void attach_learnt(std::vector<int> lits) {
        if (lits.size() == 1) {
            enqueue(lits[0], -1);
            return;
        }
        // Watch the asserting literal and the highest-level other literal.
        int best = 1;
        for (std::size_t i = 2; i < lits.size(); ++i)
            if (level_[lit_var(lits[i])] > level_[lit_var(lits[best])]) best = static_cast<int>(i);
        std::swap(lits[1], lits[best]);
        int id = static_cast<int>(clauses_.size());
        int assert_lit = lits[0];
        watches_[lits[0]].push_back(id);
        watches_[lits[1]].push_back(id);
        clauses_.push_back(std::move(lits));
        enqueue(assert_lit, id);
    }

    bool enqueue(int lit, int reason) {
        int var = lit_var(lit);
        if (value_[var] != -1) return lit_value(lit) == 1;
        value_[var] = lit_sign(lit) ? 0 : 1;
        level_[var] = decision_level();
        reason_[var] = reason;
        trail_.push_back(lit);
        return true;
    }

    // Returns the index of a conflicting clause, or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            int lit = trail_[qhead_++];
            ++stats.propagations;
            int falsified = lit_neg(lit);
            auto& watch_list = watches_[falsified];
            std::size_t keep = 0;
            for (std::size_t wi = 0; wi < watch_list.size(); ++wi) {
                int ci = watch_list[wi];
                auto& clause = clauses_[ci];
                if (clause[0] == falsified) std::swap(clause[0], clause[1]);
                if (lit_value(clause[0]) == 1) {
                    watch_list[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < clause.size(); ++k) {
                    if (lit_value(clause[k]) != 0) {
                        std::swap(clause[1], clause[k]);
                        watches_[clause[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                watch_list[keep++] = ci;
                if (lit_value(clause[0]) == 0) {
                    // Conflict: keep the remaining watches in place.
                    for (std::size_t rest = wi + 1; rest < watch_list.size(); ++rest)
                        watch_list[keep++] = watch_list[rest];
                    watch_list.resize(keep);
                    qhead_ = trail_.size();
                    return ci;
                }
                enqueue(clause[0], ci);
            }
            watch_list.resize(keep);
        }
        return -1;
    }

    int analyze(int confl, std::vector<int>& learnt) {
        learnt.push_back(0); // slot for the asserting literal
        int counter = 0;
        int lit = -1;
        std::size_t index = trail_.size();
        std::vector<int> to_clear;
        do {
            const auto& clause = clauses_[confl];
            for (std::size_t k = (lit == -1 ? 0 : 1); k < clause.size(); ++k) {
                int q = clause[k];
                int v = lit_var(q);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    to_clear.push_back(v);
                    bump_activity(v);
                    if (level_[v] == decision_level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[lit_var(trail_[--index])]) {}
            lit = trail_[index];
            seen_[lit_var(lit)] = 0;
            confl = reason_[lit_var(lit)];
            --counter;
        } while (counter > 0);
        learnt[0] = lit_neg(lit);

        int back_level = 0;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            back_level = std::max(back_level, level_[lit_var(learnt[i])]);
        for (int v : to_clear) seen_[v] = 0;
        return back_level;
    }

    void backtrack(int target_level) {
        if (decision_level() <= target_level) return;
        int bound = trail_lim_[target_level];
        for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
            int var = lit_var(trail_[i]);
            polarity_[var] = lit_sign(trail_[i]) ? 1 : 0;
            value_[var] = -1;
            reason_[var] = -1;
            if (heap_index_[var] < 0) heap_insert(var);
        }
        trail_.resize(bound);
        trail_lim_.resize(target_level);
        qhead_ = trail_.size();
    }

    int pick_branch_variable() {
        while (!heap_.empty()) {
            int var = heap_[0];
            heap_remove_top();
            if (value_[var] == -1) return var;
        }
        return -1;
    }

    void bump_activity(int var) {
        activity_[var] += activity_inc_;
        if (activity_[var] > 1e100) {
            for (auto& a : activity_) a *= 1e-100;
            activity_inc_ *= 1e-100;
        }
        if (heap_index_[var] >= 0) heap_up(heap_index_[var]);
    }

    void decay_activities() { activity_inc_ /= 0.95; }

    // Indexed max-heap ordered by activity with variable index as tiebreak,
    // which keeps runs reproducible.
    bool heap_less(int a, int b) const {
        if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
        return a < b;
    }
    void heap_insert(int var) {
        heap_index_[var] = static_cast<int>(heap_.size());
        heap_.push_back(var);
        heap_up(heap_index_[var]);
    }
    void heap_up(int i) {
        int var = heap_[i];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (!heap_less(var, heap_[parent])) break;
            heap_[i] = heap_[parent];
            heap_index_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = var;
        heap_index_[var] = i;
    }
    void heap_down(int i) {
        int var = heap_[i];
        int size = static_cast<int>(heap_.size());
        while (true) {
            int child = 2 * i + 1;
            if (child >= size) break;
            if (child + 1 < size && heap_less(heap_[child + 1], heap_[child])) ++child;
            if (!heap_less(heap_[child], var)) break;
            heap_[i] = heap_[child];
            heap_index_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = var;
        heap_index_[var] = i;
    }
    void heap_remove_top() {
        int last = heap_.back();
        heap_index_[heap_[0]] = -1;
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_[0] = last;
            heap_index_[last] = 0;
            heap_down(0);
        }
    }

    int num_vars_;
    SolverConfig cfg_;
    bool unsat_at_root_ = false;

    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<signed char> value_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double activity_inc_ = 1.0;
    std::vector<signed char> polarity_;
    std::vector<int> heap_;
    std::vector<int> heap_index_;
    std::vector<signed char> seen_;
    long restarts_ = 0;
};

SolveResult solve_external(const CnfFormula& formula, const SolverConfig& cfg) {
    namespace fs = std::filesystem;
    static int counter = 0;
    fs::path dir = fs::temp_directory_path();
    fs::path cnf_path =
        dir / ("strips-morph-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) +
               ".cnf");
    {
        std::ofstream out(cnf_path);
        if (!out) throw ExternalSolverFailure("cannot write " + cnf_path.string());
        out << write_dimacs(formula);
    }
    std::string command = cfg.external_path + " " + cnf_path.string() + " 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) {
        fs::remove(cnf_path);
        throw ExternalSolverFailure("cannot run '" + cfg.external_path + "'");
    }
    std::string output;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, got);
    int status = ::pclose(pipe);
    fs::remove(cnf_path);

    SolveResult result;
    if (output.find("s SATISFIABLE") != std::string::npos) {
        result.kind = SolveResult::Kind::Sat;
        try {
            result.model = parse_model(output, formula.num_vars);
        } catch (const ParseError& e) {
            throw ExternalSolverFailure(std::string("unparsable model: ") + e.what());
        }
        if (!check_model(formula, result.model))
            throw ExternalSolverFailure("external solver returned a non-model");
    } else if (output.find("s UNSATISFIABLE") != std::string::npos) {
        result.kind = SolveResult::Kind::Unsat;
    } else {
        throw ExternalSolverFailure("no status line from external solver (exit " +
                                    std::to_string(status) + ")");
    }
    return result;
}

} // namespace

bool check_model(const CnfFormula& formula, const Assignment& assignment) {
    if (static_cast<int>(assignment.size()) < formula.num_vars) return false;
    for (const auto& clause : formula.clauses) {
        bool satisfied = false;
        for (int lit : clause) {
            int var = lit > 0 ? lit - 1 : -lit - 1;
            if ((lit > 0) == static_cast<bool>(assignment[var])) {
                satisfied = true;
                break;
            }
        }
        if (!satisfied) return false;
    }
    return true;
}

SolveResult solve(const CnfFormula& formula, const SolverConfig& cfg) {
    if (cfg.timeout_seconds <= 0) throw std::invalid_argument("time budget must be positive");
    if (cfg.backend == SolverConfig::Backend::External) return solve_external(formula, cfg);

    Cdcl solver(formula, cfg);
    SolveResult result;
    result.kind = solver.run();
    result.stats = solver.stats;
    if (result.kind == SolveResult::Kind::Sat) {
        result.model = solver.model();
        if (!check_model(formula, result.model))
            throw std::logic_error("internal solver produced a non-model");
    }
    return result;
}

} // namespace stripsmorph
