// fragmap command-line front end. Links the C API of the shared library
// only; output formatting, benchmark orchestration and CSV/JSON emission
// live here.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fragmap/fragmap.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitProven = 0;
constexpr int kExitError = 1;
constexpr int kExitLimit = 2;

struct InstanceHandle {
    fragmap_instance* ptr = nullptr;
    ~InstanceHandle() { fragmap_instance_free(ptr); }
};

struct SolutionsHandle {
    fragmap_solutions* ptr = nullptr;
    ~SolutionsHandle() { fragmap_solutions_free(ptr); }
};

[[noreturn]] void fail(const std::string& message)
{
    std::cerr << "error: " << message << "\n";
    std::exit(kExitError);
}

void check_status(fragmap_status status)
{
    if (status != FRAGMAP_OK)
        fail(fragmap_last_error());
}

std::vector<int> parse_fixed(const std::string& text)
{
    // "q=t,q=t,..."; t may be "-" or "-1" for the dummy target
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            fail("bad --fix entry '" + item + "': expected q=t");
        try {
            out.push_back(std::stoi(item.substr(0, eq)));
            std::string rhs = item.substr(eq + 1);
            out.push_back(rhs == "-" ? -1 : std::stoi(rhs));
        }
        catch (const std::exception&) {
            fail("bad --fix entry '" + item + "'");
        }
    }
    return out;
}

std::string mapping_to_text(const std::vector<int>& mapping)
{
    std::string out;
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (i)
            out += ' ';
        out += mapping[i] < 0 ? std::string("-") : std::to_string(mapping[i]);
    }
    return out;
}

std::vector<int> solution_mapping(const fragmap_solutions* sols, int idx, int n_query)
{
    std::vector<int> mapping(n_query);
    if (fragmap_solutions_mapping(sols, idx, mapping.data(), n_query) != FRAGMAP_OK)
        fail(fragmap_last_error());
    return mapping;
}

const char* outcome_name(fragmap_outcome outcome)
{
    switch (outcome) {
    case FRAGMAP_PROVEN_OPTIMAL: return "optimal";
    case FRAGMAP_PROVEN_INFEASIBLE: return "infeasible";
    case FRAGMAP_LIMIT_REACHED: return "limit";
    }
    return "unknown";
}

void write_output(const std::string& text, const std::string& output_path)
{
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail("cannot open output file: " + output_path);
    out << text;
}

std::uint64_t seed_with_env_override(std::uint64_t seed)
{
    if (const char* env = std::getenv("FRAGMAP_SEED")) {
        try {
            return std::stoull(env);
        }
        catch (const std::exception&) {
            fail("FRAGMAP_SEED is not a valid unsigned integer");
        }
    }
    return seed;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveRow {
    int nlink = 0;
    fragmap_outcome outcome = FRAGMAP_PROVEN_INFEASIBLE;
    long cost = 0;
    std::vector<int> mapping;
    std::vector<std::vector<int>> all_optimal; // extra mappings when enumerating
    std::int64_t backtracks = 0;
    std::int64_t nodes = 0;
    double time_ms = 0.0;
};

// infeasible rows sort after feasible ones; feasible by cost/nlink
bool ratio_less(const SolveRow& a, const SolveRow& b)
{
    bool a_feasible = !a.mapping.empty();
    bool b_feasible = !b.mapping.empty();
    if (a_feasible != b_feasible)
        return a_feasible;
    if (a_feasible) {
        long lhs = a.cost * b.nlink;
        long rhs = b.cost * a.nlink;
        if (lhs != rhs)
            return lhs < rhs;
    }
    return a.nlink < b.nlink;
}

SolveRow run_one(const fragmap_instance* inst, fragmap_options opts, bool all_optimal)
{
    SolutionsHandle sols;
    check_status(all_optimal ? fragmap_solve_all_optimal(inst, &opts, &sols.ptr)
                             : fragmap_solve(inst, &opts, &sols.ptr));
    SolveRow row;
    row.nlink = opts.nlink;
    row.outcome = fragmap_solutions_outcome(sols.ptr);
    row.backtracks = fragmap_solutions_backtracks(sols.ptr);
    row.nodes = fragmap_solutions_nodes(sols.ptr);
    row.time_ms = fragmap_solutions_time_ms(sols.ptr);
    int count = fragmap_solutions_count(sols.ptr);
    int nq = fragmap_instance_query_size(inst);
    for (int i = 0; i < count; ++i) {
        auto mapping = solution_mapping(sols.ptr, i, nq);
        if (i == 0) {
            row.cost = fragmap_solutions_cost(sols.ptr, 0);
            row.mapping = mapping;
        }
        if (all_optimal)
            row.all_optimal.push_back(std::move(mapping));
    }
    return row;
}

ordered_json row_to_json(const SolveRow& row)
{
    ordered_json j;
    j["nlink"] = row.nlink;
    j["status"] = outcome_name(row.outcome);
    if (!row.mapping.empty()) {
        j["cost"] = row.cost;
        j["ratio"] = static_cast<double>(row.cost) / row.nlink;
        j["mapping"] = row.mapping;
        if (!row.all_optimal.empty())
            j["solutions"] = row.all_optimal;
    }
    j["stats"] = {{"backtracks", row.backtracks},
                  {"nodes", row.nodes},
                  {"time_ms", row.time_ms},
                  {"proven", row.outcome != FRAGMAP_LIMIT_REACHED}};
    return j;
}

int cmd_solve(const std::string& instance_path, int nlink, bool sweep, bool all_optimal,
              const std::string& fix, std::int64_t time_limit, std::int64_t backtracks,
              bool strong_alldiff, const std::string& output_path, const std::string& format)
{
    InstanceHandle inst;
    check_status(fragmap_instance_load(instance_path.c_str(), &inst.ptr));

    std::vector<int> fixed = parse_fixed(fix);
    fragmap_options opts;
    fragmap_options_init(&opts);
    opts.time_limit_ms = time_limit;
    opts.backtrack_limit = backtracks;
    opts.strong_alldiff = strong_alldiff ? 1 : 0;
    opts.fixed = fixed.data();
    opts.fixed_count = static_cast<int>(fixed.size() / 2);

    std::vector<SolveRow> rows;
    if (sweep) {
        for (int k = 1; k <= fragmap_instance_query_size(inst.ptr); ++k) {
            opts.nlink = k;
            rows.push_back(run_one(inst.ptr, opts, all_optimal));
        }
        std::sort(rows.begin(), rows.end(), ratio_less);
    }
    else {
        opts.nlink = nlink; // 0 falls back to the instance default
        rows.push_back(run_one(inst.ptr, opts, all_optimal));
    }

    std::ostringstream out;
    if (format == "json") {
        ordered_json j;
        j["instance"] = instance_path;
        j["mode"] = sweep ? "sweep" : "solve";
        j["results"] = ordered_json::array();
        for (const auto& row : rows)
            j["results"].push_back(row_to_json(row));
        out << j.dump(2) << "\n";
    }
    else {
        out << "nlink  status      cost  cost/nlink  backtracks  time_ms  mapping\n";
        for (const auto& row : rows) {
            char line[128];
            if (!row.mapping.empty())
                std::snprintf(line, sizeof(line), "%-6d %-10s %5ld  %10.3f  %10lld  %7.1f  ",
                              row.nlink, outcome_name(row.outcome), row.cost,
                              static_cast<double>(row.cost) / row.nlink,
                              static_cast<long long>(row.backtracks), row.time_ms);
            else
                std::snprintf(line, sizeof(line), "%-6d %-10s %5s  %10s  %10lld  %7.1f  ",
                              row.nlink, outcome_name(row.outcome), "-", "-",
                              static_cast<long long>(row.backtracks), row.time_ms);
            out << line << (row.mapping.empty() ? "-" : mapping_to_text(row.mapping)) << "\n";
            for (std::size_t extra = 1; extra < row.all_optimal.size(); ++extra)
                out << "                                                             "
                    << mapping_to_text(row.all_optimal[extra]) << "\n";
        }
    }
    write_output(out.str(), output_path);

    bool any_limit = std::any_of(rows.begin(), rows.end(), [](const SolveRow& r) {
        return r.outcome == FRAGMAP_LIMIT_REACHED;
    });
    return any_limit ? kExitLimit : kExitProven;
}

// ---------------------------------------------------------------------------
// diverse
// ---------------------------------------------------------------------------

int cmd_diverse(const std::string& instance_path, int nlink, int k, std::optional<long> gap,
                std::optional<int> gap_pct, bool widen, std::int64_t time_limit,
                std::int64_t backtracks, bool strong_alldiff, const std::string& output_path,
                const std::string& format)
{
    if (gap.has_value() == gap_pct.has_value())
        fail("exactly one of --gap and --gap-pct is required");

    InstanceHandle inst;
    check_status(fragmap_instance_load(instance_path.c_str(), &inst.ptr));

    fragmap_options opts;
    fragmap_options_init(&opts);
    opts.nlink = nlink;
    opts.time_limit_ms = time_limit;
    opts.backtrack_limit = backtracks;
    opts.strong_alldiff = strong_alldiff ? 1 : 0;

    SolutionsHandle sols;
    check_status(fragmap_diverse(inst.ptr, &opts, k, gap.value_or(0), gap_pct.value_or(-1),
                                 widen ? 1 : 0, &sols.ptr));

    const int count = fragmap_solutions_count(sols.ptr);
    const int nq = fragmap_instance_query_size(inst.ptr);
    std::ostringstream out;
    if (format == "json") {
        ordered_json j;
        j["instance"] = instance_path;
        j["mode"] = "diverse";
        j["nlink"] = nlink;
        j["k"] = k;
        if (gap)
            j["gap"] = *gap;
        else
            j["gap_pct"] = *gap_pct;
        j["widen_distance_cap"] = widen;
        j["status"] = outcome_name(fragmap_solutions_outcome(sols.ptr));
        j["solutions"] = ordered_json::array();
        for (int i = 0; i < count; ++i) {
            ordered_json s;
            s["cost"] = fragmap_solutions_cost(sols.ptr, i);
            long distance = fragmap_solutions_distance(sols.ptr, i);
            if (distance >= 0)
                s["distance"] = distance;
            s["hamming_to_first"] = fragmap_solutions_hamming_to_first(sols.ptr, i);
            s["duplicate"] = fragmap_solutions_is_duplicate(sols.ptr, i) != 0;
            s["mapping"] = solution_mapping(sols.ptr, i, nq);
            j["solutions"].push_back(std::move(s));
        }
        j["stats"] = {{"backtracks", fragmap_solutions_backtracks(sols.ptr)},
                      {"nodes", fragmap_solutions_nodes(sols.ptr)},
                      {"time_ms", fragmap_solutions_time_ms(sols.ptr)}};
        out << j.dump(2) << "\n";
    }
    else {
        if (widen)
            out << "(distance cap widened to |archive| * n_query)\n";
        out << "#   cost  distance  hamming  dup  mapping\n";
        for (int i = 0; i < count; ++i) {
            long distance = fragmap_solutions_distance(sols.ptr, i);
            char line[96];
            std::snprintf(line, sizeof(line), "%-3d %5ld  %8s  %7d  %3s  ", i + 1,
                          fragmap_solutions_cost(sols.ptr, i),
                          distance < 0 ? "-" : std::to_string(distance).c_str(),
                          fragmap_solutions_hamming_to_first(sols.ptr, i),
                          fragmap_solutions_is_duplicate(sols.ptr, i) ? "yes" : "no");
            out << line << mapping_to_text(solution_mapping(sols.ptr, i, nq)) << "\n";
        }
        if (count == 0)
            out << "no solution\n";
    }
    write_output(out.str(), output_path);
    return fragmap_solutions_outcome(sols.ptr) == FRAGMAP_LIMIT_REACHED ? kExitLimit
                                                                        : kExitProven;
}

// ---------------------------------------------------------------------------
// gen / score
// ---------------------------------------------------------------------------

int cmd_gen(int nq, int nt, int smax, int delta, std::uint64_t seed, const std::string& out_path)
{
    seed = seed_with_env_override(seed);
    InstanceHandle inst;
    check_status(fragmap_instance_generate(nq, nt, smax, delta, seed, &inst.ptr));
    check_status(fragmap_instance_save(inst.ptr, out_path.c_str()));
    std::cout << "wrote " << out_path << ": query " << nq << " fragments, target " << nt
              << " fragments, scores in [1, " << smax << "], delta " << delta << ", seed "
              << seed << "\n";
    return kExitProven;
}

int cmd_score(const std::string& query_hist, const std::string& target_hist,
              const std::string& query_edges, const std::string& target_edges, int delta,
              const std::string& out_path)
{
    InstanceHandle inst;
    check_status(fragmap_instance_from_histograms(query_hist.c_str(), target_hist.c_str(),
                                                  query_edges.c_str(), target_edges.c_str(),
                                                  delta, &inst.ptr));
    check_status(fragmap_instance_save(inst.ptr, out_path.c_str()));
    std::cout << "wrote " << out_path << ": " << fragmap_instance_query_size(inst.ptr)
              << " x " << fragmap_instance_target_size(inst.ptr)
              << " score matrix, delta " << delta << "\n";
    return kExitProven;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchRow {
    int instance_id = 0;
    int n_q = 0;
    int n_t = 0;
    int nlink = 0;
    fragmap_outcome outcome = FRAGMAP_PROVEN_INFEASIBLE;
    long cost = 0;
    std::int64_t backtracks = 0;
    double time_ms = 0.0;
};

struct Aggregate {
    double mean = 0, stddev = 0, min = 0, median = 0, max = 0;
};

Aggregate aggregate_of(std::vector<double> values)
{
    Aggregate a;
    if (values.empty())
        return a;
    std::sort(values.begin(), values.end());
    double sum = 0;
    for (double v : values)
        sum += v;
    a.mean = sum / values.size();
    double var = 0;
    for (double v : values)
        var += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(var / values.size());
    a.min = values.front();
    a.max = values.back();
    std::size_t mid = values.size() / 2;
    a.median = values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return a;
}

int cmd_bench(int sets, int nq_min, int nq_max, int nq_step, int nt, int smax, int delta,
              std::uint64_t seed, int jobs, const std::string& csv_path)
{
    seed = seed_with_env_override(seed);
    if (nq_min < 1 || nq_max < nq_min || nq_step < 1)
        fail("bad query size range");

    std::vector<int> sizes;
    for (int nq = nq_min; nq <= nq_max; nq += nq_step)
        sizes.push_back(nq);

    struct Task {
        int instance_id;
        int nq;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int set = 0; set < sets; ++set)
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            int id = static_cast<int>(tasks.size());
            tasks.push_back({id, sizes[s], seed + static_cast<std::uint64_t>(id)});
        }

    std::vector<std::vector<BenchRow>> per_instance(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load())
                return;
            const Task& task = tasks[i];
            InstanceHandle inst;
            if (fragmap_instance_generate(task.nq, nt, smax, delta, task.seed, &inst.ptr)
                != FRAGMAP_OK) {
                failure_message = fragmap_last_error();
                failed.store(true);
                return;
            }
            std::vector<BenchRow>& rows = per_instance[i];
            for (int nlink = 1; nlink <= task.nq; ++nlink) {
                fragmap_options opts;
                fragmap_options_init(&opts);
                opts.nlink = nlink;
                SolutionsHandle sols;
                if (fragmap_solve(inst.ptr, &opts, &sols.ptr) != FRAGMAP_OK) {
                    failure_message = fragmap_last_error();
                    failed.store(true);
                    return;
                }
                BenchRow row;
                row.instance_id = task.instance_id;
                row.n_q = task.nq;
                row.n_t = nt;
                row.nlink = nlink;
                row.outcome = fragmap_solutions_outcome(sols.ptr);
                row.cost = fragmap_solutions_count(sols.ptr) > 0
                    ? fragmap_solutions_cost(sols.ptr, 0)
                    : -1;
                row.backtracks = fragmap_solutions_backtracks(sols.ptr);
                row.time_ms = fragmap_solutions_time_ms(sols.ptr);
                rows.push_back(row);
            }
        }
    };

    if (jobs <= 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failed.load())
        fail(failure_message);

    std::vector<BenchRow> rows;
    for (const auto& chunk : per_instance)
        rows.insert(rows.end(), chunk.begin(), chunk.end());

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv)
            fail("cannot open CSV file: " + csv_path);
        csv << "instance_id,n_q,n_t,nlink,status,cost,backtracks,time_ms\n";
        for (const auto& r : rows) {
            csv << r.instance_id << ',' << r.n_q << ',' << r.n_t << ',' << r.nlink << ','
                << outcome_name(r.outcome) << ',';
            if (r.outcome != FRAGMAP_PROVEN_INFEASIBLE)
                csv << r.cost;
            csv << ',' << r.backtracks << ',' << r.time_ms << "\n";
        }
    }

    std::vector<double> backtracks, times;
    long with_solution = 0, proven = 0;
    for (const auto& r : rows) {
        backtracks.push_back(static_cast<double>(r.backtracks));
        times.push_back(r.time_ms);
        with_solution += r.outcome == FRAGMAP_PROVEN_OPTIMAL;
        proven += r.outcome != FRAGMAP_LIMIT_REACHED;
    }
    Aggregate b = aggregate_of(backtracks);
    Aggregate t = aggregate_of(times);

    std::printf("problems: %zu   with solution: %ld   proven: %ld\n", rows.size(),
                with_solution, proven);
    std::printf("%-8s  %12s  %12s\n", "", "backtracks", "time_ms");
    std::printf("%-8s  %12.2f  %12.2f\n", "mean", b.mean, t.mean);
    std::printf("%-8s  %12.2f  %12.2f\n", "stddev", b.stddev, t.stddev);
    std::printf("%-8s  %12.0f  %12.2f\n", "min", b.min, t.min);
    std::printf("%-8s  %12.1f  %12.2f\n", "median", b.median, t.median);
    std::printf("%-8s  %12.0f  %12.2f\n", "max", b.max, t.max);
    return kExitProven;
}

// ---------------------------------------------------------------------------
// oracle (hidden debugging aid)
// ---------------------------------------------------------------------------

int cmd_oracle(const std::string& instance_path, int nlink, bool all, int diverse_k,
               long diverse_gap)
{
    InstanceHandle inst;
    check_status(fragmap_instance_load(instance_path.c_str(), &inst.ptr));
    const int nq = fragmap_instance_query_size(inst.ptr);

    SolutionsHandle sols;
    if (diverse_k > 0)
        check_status(
            fragmap_oracle_diverse(inst.ptr, nlink, diverse_k, diverse_gap, &sols.ptr));
    else
        check_status(fragmap_oracle_feasible_set(inst.ptr, nlink, &sols.ptr));

    int count = fragmap_solutions_count(sols.ptr);
    if (count == 0) {
        std::cout << "no feasible solution\n";
        return kExitProven;
    }
    int shown = all || diverse_k > 0 ? count : 1;
    for (int i = 0; i < shown; ++i)
        std::cout << fragmap_solutions_cost(sols.ptr, i) << "  "
                  << mapping_to_text(solution_mapping(sols.ptr, i, nq)) << "\n";
    if (shown < count)
        std::cout << "(" << count << " feasible solutions; optimum first)\n";
    return kExitProven;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fragmap: minimum-cost partial mapping of fragmented molecules"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fragmap 1.0.0");

    // solve
    std::string instance_path, fix, output_path, format = "table";
    int nlink = 0;
    bool sweep = false, all_optimal = false, strong_alldiff = false;
    std::int64_t time_limit = 0, backtrack_limit = 0;
    auto* solve = app.add_subcommand("solve", "find optimal mappings");
    solve->add_option("--instance", instance_path, "instance file")->required();
    auto* nlink_opt = solve->add_option("--nlink", nlink, "number of mapped query fragments");
    auto* sweep_opt = solve->add_flag("--sweep", sweep, "solve every nlink from 1 to n_query");
    nlink_opt->excludes(sweep_opt);
    sweep_opt->excludes(nlink_opt);
    solve->add_flag("--all-optimal", all_optimal, "enumerate every optimal mapping");
    solve->add_option("--fix", fix, "fixed associations q=t,... (t = - for the dummy)");
    solve->add_option("--time-limit", time_limit, "per-solve time limit in ms");
    solve->add_option("--backtracks", backtrack_limit, "per-solve backtrack limit");
    solve->add_flag("--strong-alldiff", strong_alldiff, "matching-based distinctness filtering");
    solve->add_option("--output", output_path, "write the report to a file");
    solve->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    // diverse
    std::string d_instance, d_output, d_format = "table";
    int d_nlink = 0, d_k = 1;
    bool d_widen = false, d_strong = false;
    std::int64_t d_time = 0, d_backtracks = 0;
    std::optional<long> d_gap;
    std::optional<int> d_gap_pct;
    auto* diverse = app.add_subcommand("diverse", "maximally diverse near-optimal solutions");
    diverse->add_option("--instance", d_instance, "instance file")->required();
    diverse->add_option("--nlink", d_nlink, "number of mapped query fragments")->required();
    diverse->add_option("--k", d_k, "number of solutions to generate")->required();
    auto* gap_opt = diverse->add_option("--gap", d_gap, "absolute cost slack");
    auto* gap_pct_opt = diverse->add_option("--gap-pct", d_gap_pct, "cost slack in percent");
    gap_opt->excludes(gap_pct_opt);
    gap_pct_opt->excludes(gap_opt);
    diverse->add_flag("--widen-distance-cap", d_widen,
                      "cap the distance variable at |archive| * n_query instead of n_query");
    diverse->add_option("--time-limit", d_time, "per-iteration time limit in ms");
    diverse->add_option("--backtracks", d_backtracks, "per-iteration backtrack limit");
    diverse->add_flag("--strong-alldiff", d_strong, "matching-based distinctness filtering");
    diverse->add_option("--output", d_output, "write the report to a file");
    diverse->add_option("--format", d_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    // gen
    int g_nq = 0, g_nt = 0, g_smax = 0, g_delta = 0;
    std::uint64_t g_seed = 0;
    std::string g_out;
    auto* gen = app.add_subcommand("gen", "generate a random benchmark instance");
    gen->add_option("--nq", g_nq, "query fragments")->required();
    gen->add_option("--nt", g_nt, "real target fragments")->required();
    gen->add_option("--smax", g_smax, "maximum score value")->required();
    gen->add_option("--delta", g_delta, "score threshold")->required();
    gen->add_option("--seed", g_seed, "generator seed (FRAGMAP_SEED overrides)")->required();
    gen->add_option("--out", g_out, "output instance file")->required();

    // score
    std::string s_query, s_target, s_qedges, s_tedges, s_out;
    int s_delta = 0;
    auto* score = app.add_subcommand("score", "build an instance from histogram files");
    score->add_option("--query-hist", s_query, "query histogram file")->required();
    score->add_option("--target-hist", s_target, "target histogram file")->required();
    score->add_option("--query-edges", s_qedges, "query edges, e.g. 0-1,1-2");
    score->add_option("--target-edges", s_tedges, "target edges, e.g. 0-1,1-2");
    score->add_option("--delta", s_delta, "score threshold")->required();
    score->add_option("--out", s_out, "output instance file")->required();

    // bench
    int b_sets = 0, b_nq_min = 5, b_nq_max = 25, b_nq_step = 5, b_nt = 50, b_smax = 100,
        b_delta = 101, b_jobs = 1;
    std::uint64_t b_seed = 0;
    std::string b_csv;
    auto* bench = app.add_subcommand("bench", "generate instance sets and sweep nlink");
    bench->add_option("--sets", b_sets, "number of instance sets")->required();
    bench->add_option("--nq-min", b_nq_min, "smallest query size");
    bench->add_option("--nq-max", b_nq_max, "largest query size");
    bench->add_option("--nq-step", b_nq_step, "query size step within a set");
    bench->add_option("--nt", b_nt, "real target fragments");
    bench->add_option("--smax", b_smax, "maximum score value");
    bench->add_option("--delta", b_delta, "score threshold");
    bench->add_option("--seed", b_seed, "base seed (FRAGMAP_SEED overrides)")->required();
    bench->add_option("--jobs", b_jobs, "parallel workers (instances are independent)");
    bench->add_option("--csv", b_csv, "write per-problem rows to a CSV file");

    // oracle (hidden)
    std::string o_instance;
    int o_nlink = 0, o_diverse_k = 0;
    long o_gap = 0;
    bool o_all = false;
    auto* oracle = app.add_subcommand("oracle", "exhaustive reference solver");
    oracle->group(""); // hidden from help
    oracle->add_option("--instance", o_instance)->required();
    oracle->add_option("--nlink", o_nlink)->required();
    oracle->add_flag("--all", o_all);
    oracle->add_option("--diverse", o_diverse_k);
    oracle->add_option("--gap", o_gap);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (solve->parsed()) {
            if (!sweep && nlink == 0 && !*nlink_opt) {
                // permitted when the instance file stores a default
            }
            return cmd_solve(instance_path, nlink, sweep, all_optimal, fix, time_limit,
                             backtrack_limit, strong_alldiff, output_path, format);
        }
        if (diverse->parsed())
            return cmd_diverse(d_instance, d_nlink, d_k, d_gap, d_gap_pct, d_widen, d_time,
                               d_backtracks, d_strong, d_output, d_format);
        if (gen->parsed())
            return cmd_gen(g_nq, g_nt, g_smax, g_delta, g_seed, g_out);
        if (score->parsed())
            return cmd_score(s_query, s_target, s_qedges, s_tedges, s_delta, s_out);
        if (bench->parsed())
            return cmd_bench(b_sets, b_nq_min, b_nq_max, b_nq_step, b_nt, b_smax, b_delta,
                             b_seed, b_jobs, b_csv);
        if (oracle->parsed())
            return cmd_oracle(o_instance, o_nlink, o_all, o_diverse_k, o_gap);
    }
    catch (const std::exception& e) {
        fail(e.what());
    }
    return kExitError;
}
