#include "fragmap/diversity.hpp"

#include <algorithm>
#include <optional>

#include "fragmap/error.hpp"

namespace fragmap {

int hamming_distance(std::span<const int> a, std::span<const int> b)
{
    int distance = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        distance += a[i] != b[i];
    return distance;
}

long gap_from_percent(long optimal_cost, int percent)
{
    return optimal_cost * percent / 100;
}

namespace {

std::vector<int> to_internal(const std::vector<int>& mapping)
{
    std::vector<int> internal(mapping.size());
    for (std::size_t i = 0; i < mapping.size(); ++i)
        internal[i] = to_internal_target(mapping[i]);
    return internal;
}

std::vector<VarId> primary_vars(const ModelVariables& vars)
{
    std::vector<VarId> primary = vars.assignment;
    primary.insert(primary.end(), vars.row_score.begin(), vars.row_score.end());
    return primary;
}

} // namespace

std::vector<DiverseSolution> diverse_solutions(const Instance& inst, int nlink,
                                               const DiversityConfig& cfg,
                                               const std::vector<FixedPair>& extra_fixed)
{
    if (cfg.k < 1)
        throw Error(ErrorKind::Invalid, "k must be >= 1");
    if (cfg.gap < 0 || (cfg.gap_percent && *cfg.gap_percent < 0))
        throw Error(ErrorKind::Invalid, "gap must be >= 0");

    std::vector<DiverseSolution> out;
    SolveResult first = minimize(inst, nlink, cfg.search, extra_fixed);
    if (!first.best)
        return out;
    out.push_back({*first.best, -1, 0, false});

    const int nq = inst.query_size();
    const long gap =
        cfg.gap_percent ? gap_from_percent(first.best->cost, *cfg.gap_percent) : cfg.gap;
    const long cost_cap = first.best->cost + gap;
    std::vector<std::vector<int>> archive{to_internal(first.best->mapping)};
    long carry = 0; // sum of the achieved distance values so far

    for (int iteration = 1; iteration < cfg.k; ++iteration) {
        BuildOptions bo;
        bo.nlink = nlink;
        bo.strong_alldiff = cfg.search.strong_alldiff;
        bo.cost_upper_bound = cost_cap;
        bo.extra_fixed = extra_fixed;
        BuiltModel m = build_network(inst, bo);

        const long distance_cap =
            (cfg.widen_distance_cap ? static_cast<long>(archive.size()) * nq : nq) + carry;
        VarId distance_var = m.net.add_range_variable(0, static_cast<int>(distance_cap));
        m.net.post_diversity(m.vars.assignment, distance_var, archive,
                             static_cast<int>(carry));

        Searcher::Options so;
        so.mode = Searcher::Mode::Maximize;
        so.objective = distance_var;
        so.time_limit_ms = cfg.search.time_limit_ms;
        so.backtrack_limit = cfg.search.backtrack_limit;
        Searcher searcher(m.net, primary_vars(m.vars),
                          {m.vars.dummy_count, m.vars.cost_var, distance_var}, so);

        std::optional<DecodedSolution> best;
        long best_distance = -1;
        Searcher::Outcome outcome = searcher.run([&](const Network& net) {
            best = decode_solution(inst, m.vars, net);
            best_distance = net.assigned_value(distance_var);
            return true;
        });
        if (!best)
            break;

        carry += best_distance;

        DiverseSolution entry;
        entry.record = SolutionRecord{best->mapping, best->cost, outcome.stats};
        entry.achieved_distance = best_distance;
        entry.hamming_to_first = hamming_distance(best->mapping, out.front().record.mapping);
        entry.duplicate = std::any_of(out.begin(), out.end(), [&](const DiverseSolution& s) {
            return s.record.mapping == best->mapping;
        });
        out.push_back(std::move(entry));
        archive.push_back(to_internal(out.back().record.mapping));
    }
    return out;
}

} // namespace fragmap
