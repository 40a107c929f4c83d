#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fragmap/model.hpp"

namespace fragmap {

struct SearchConfig {
    std::optional<std::int64_t> time_limit_ms;
    std::optional<std::int64_t> backtrack_limit;
    bool strong_alldiff = false;
};

struct SearchStats {
    std::int64_t backtracks = 0; // retreats from failed nodes
    std::int64_t nodes = 0;      // branching decisions taken
    double time_ms = 0.0;
    bool proven = false; // search exhausted without hitting a limit
};

// One feasible mapping. `mapping` holds, per query fragment, the real
// target's file index or -1 for the dummy.
struct SolutionRecord {
    std::vector<int> mapping;
    long cost = 0;
    SearchStats stats;
};

enum class SolveStatus {
    Optimal,    // optimum found and proven
    Infeasible, // proven to have no solution
    Limit,      // stopped by a time or backtrack limit
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<SolutionRecord> best; // present whenever a solution was found
    SearchStats stats;
};

// Generic depth-first search over a network. Primary variables branch
// with dom/wdeg + last-conflict and minimum-value splitting; tail
// variables are assigned afterwards in the given order (an objective
// variable branched in Maximize mode takes its maximum value instead).
class Searcher {
public:
    enum class Mode { FindAll, Minimize, Maximize };

    struct Options {
        Mode mode = Mode::FindAll;
        VarId objective = -1; // required for Minimize / Maximize
        std::optional<std::int64_t> time_limit_ms;
        std::optional<std::int64_t> backtrack_limit;
    };

    // Called at every solution (FindAll) or every improving incumbent
    // (Minimize/Maximize); return false to stop the search.
    using SolutionCallback = std::function<bool(const Network&)>;

    struct Outcome {
        bool exhausted = false; // proof completed (no limit hit, not stopped)
        SearchStats stats;
    };

    Searcher(Network& net, std::vector<VarId> primary, std::vector<VarId> tail, Options options);

    Outcome run(const SolutionCallback& on_solution);

private:
    enum class Step { Done, Stop };

    Step dive();
    VarId select_variable();
    bool apply_objective_bound();
    bool limits_hit();

    Network& net_;
    std::vector<VarId> primary_;
    std::vector<VarId> tail_;
    std::vector<char> is_primary_;
    Options options_;

    SearchStats stats_;
    VarId last_conflict_ = -1;
    bool have_incumbent_ = false;
    long incumbent_value_ = 0;
    bool stop_requested_ = false;
    bool limit_hit_ = false;
    const SolutionCallback* callback_ = nullptr;
    std::int64_t deadline_check_counter_ = 0;
    double deadline_ms_ = 0.0;
    std::int64_t started_ns_ = 0;
};

// --- instance-level drivers -------------------------------------------

SolveResult minimize(const Instance& inst, int nlink, const SearchConfig& cfg = {},
                     const std::vector<FixedPair>& extra_fixed = {});

// All optimal mappings at the proven optimal cost, deduplicated.
std::vector<SolutionRecord> enumerate_optimal(const Instance& inst, int nlink, long optimal_cost,
                                              const SearchConfig& cfg = {},
                                              const std::vector<FixedPair>& extra_fixed = {});

// Independent minimize run per nlink in [1, n_query]; entry k-1 holds the
// outcome for nlink = k.
std::vector<SolveResult> sweep_nlink(const Instance& inst, const SearchConfig& cfg = {},
                                     const std::vector<FixedPair>& extra_fixed = {});

} // namespace fragmap
