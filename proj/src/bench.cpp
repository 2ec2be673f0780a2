#include "stripsmorph/bench.hpp"

#include "stripsmorph/textio.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace stripsmorph {

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

BenchReport run_bench(const BenchOptions& options) {
    namespace fs = std::filesystem;
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(options.corpus_dir)) {
        std::string file = entry.path().filename().string();
        const std::string suffix = ".a.strips";
        if (file.size() > suffix.size() &&
            file.compare(file.size() - suffix.size(), suffix.size(), suffix) == 0)
            names.push_back(file.substr(0, file.size() - suffix.size()));
    }
    std::sort(names.begin(), names.end());

    struct Task {
        std::string name;
        MorphKind kind;
    };
    std::vector<Task> tasks;
    for (const auto& name : names)
        for (MorphKind kind : options.kinds) tasks.push_back({name, kind});

    BenchReport report;
    report.rows.resize(tasks.size());
    std::atomic<std::size_t> cursor{0};

    auto worker = [&]() {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            fs::path dir(options.corpus_dir);
            StripsInstance a = parse_instance(slurp(dir / (task.name + ".a.strips")));
            StripsInstance b = parse_instance(slurp(dir / (task.name + ".b.strips")));

            BenchRow row;
            row.pair = task.name;
            row.kind = task.kind;
            FindConfig cfg;
            cfg.solver = options.solver;
            cfg.solver.timeout_seconds = options.timeout_seconds;
            cfg.use_cp = true;
            FindResult with_cp = find_morphism(a, b, task.kind, cfg);
            cfg.use_cp = false;
            FindResult without_cp = find_morphism(a, b, task.kind, cfg);
            row.result = with_cp.outcome_name();
            row.nocp_result = without_cp.outcome_name();
            row.cp = with_cp.stats;
            row.nocp = without_cp.stats;
            row.witness_verified = true;
            if (with_cp.morphism)
                row.witness_verified = verify_morphism(a, b, *with_cp.morphism).valid();
            if (without_cp.morphism)
                row.witness_verified =
                    row.witness_verified && verify_morphism(a, b, *without_cp.morphism).valid();
            report.rows[i] = std::move(row);
        }
    };

    int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return report;
}

std::string BenchReport::csv() const {
    std::ostringstream out;
    out << "pair,kind,result,cp_seconds,compile_seconds,solve_seconds,clauses_cp,"
        << "clauses_nocp,simplified_fraction,nocp_result,nocp_compile_seconds,"
        << "nocp_solve_seconds,witness_verified\n";
    for (const auto& row : rows) {
        char buffer[256];
        std::snprintf(buffer, sizeof buffer, "%.4f,%.4f,%.4f", row.cp.cp_seconds,
                      row.cp.compile_seconds, row.cp.solve_seconds);
        out << row.pair << ',' << to_string(row.kind) << ',' << row.result << ',' << buffer << ','
            << row.cp.clauses << ',' << row.nocp.clauses << ',';
        std::snprintf(buffer, sizeof buffer, "%.4f", row.cp.simplified_fraction);
        out << buffer << ',' << row.nocp_result << ',';
        std::snprintf(buffer, sizeof buffer, "%.4f,%.4f", row.nocp.compile_seconds,
                      row.nocp.solve_seconds);
        out << buffer << ',' << (row.witness_verified ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string BenchReport::summary() const {
    std::map<MorphKind, std::tuple<int, int, double, int>> per_kind; // cp, nocp, simp, count
    double cp_total = 0.0, nocp_total = 0.0;
    for (const auto& row : rows) {
        auto& [cp, nocp, simp, count] = per_kind[row.kind];
        if (row.result == "found" || row.result == "none") ++cp;
        if (row.nocp_result == "found" || row.nocp_result == "none") ++nocp;
        simp += row.cp.simplified_fraction;
        ++count;
        cp_total += row.cp.cp_seconds + row.cp.compile_seconds + row.cp.solve_seconds;
        nocp_total += row.nocp.cp_seconds + row.nocp.compile_seconds + row.nocp.solve_seconds;
    }
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %8s %8s %10s\n", "kind", "CP", "NoCP", "Av.Simp");
    out << line;
    for (const auto& [kind, data] : per_kind) {
        const auto& [cp, nocp, simp, count] = data;
        std::snprintf(line, sizeof line, "%-8s %8d %8d %9.1f%%\n", to_string(kind), cp, nocp,
                      count ? simp / count * 100.0 : 0.0);
        out << line;
    }
    std::snprintf(line, sizeof line, "wall-clock: with CP %.2fs, without CP %.2fs\n", cp_total,
                  nocp_total);
    out << line;
    return out.str();
}

} // namespace stripsmorph
