#include "fragmap/fragmap.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "fragmap/diversity.hpp"
#include "fragmap/error.hpp"
#include "fragmap/instance.hpp"
#include "fragmap/oracle.hpp"
#include "fragmap/search.hpp"

namespace {

thread_local std::string g_last_error;

fragmap_status set_error(fragmap_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

fragmap_status from_kind(fragmap::ErrorKind kind)
{
    switch (kind) {
    case fragmap::ErrorKind::Io: return FRAGMAP_ERR_IO;
    case fragmap::ErrorKind::Parse: return FRAGMAP_ERR_PARSE;
    case fragmap::ErrorKind::Invalid: return FRAGMAP_ERR_INVALID;
    }
    return FRAGMAP_ERR_INTERNAL;
}

// Runs fn inside the exception barrier of the C boundary.
template <typename Fn> fragmap_status guarded(Fn&& fn)
{
    try {
        return fn();
    }
    catch (const fragmap::Error& e) {
        return set_error(from_kind(e.kind()), e.what());
    }
    catch (const std::exception& e) {
        return set_error(FRAGMAP_ERR_INTERNAL, e.what());
    }
    catch (...) {
        return set_error(FRAGMAP_ERR_INTERNAL, "unknown error");
    }
}

struct SolutionEntry {
    std::vector<int> mapping;
    long cost = 0;
    long distance = -1;
    int hamming_to_first = 0;
    int duplicate = 0;
};

std::vector<std::pair<int, int>> parse_edge_list(const char* text)
{
    std::vector<std::pair<int, int>> edges;
    if (text == nullptr)
        return edges;
    std::string s(text);
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? s.size() : comma + 1;
        if (item.empty())
            continue;
        std::size_t dash = item.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 >= item.size())
            throw fragmap::Error(fragmap::ErrorKind::Parse,
                                 "bad edge '" + item + "': expected the form a-b");
        try {
            int a = std::stoi(item.substr(0, dash));
            int b = std::stoi(item.substr(dash + 1));
            edges.emplace_back(a, b);
        }
        catch (const std::exception&) {
            throw fragmap::Error(fragmap::ErrorKind::Parse, "bad edge '" + item + "'");
        }
    }
    return edges;
}

} // namespace

struct fragmap_instance {
    fragmap::Instance impl;
};

struct fragmap_solutions {
    fragmap_outcome outcome = FRAGMAP_PROVEN_INFEASIBLE;
    int query_size = 0;
    int64_t backtracks = 0;
    int64_t nodes = 0;
    double time_ms = 0.0;
    std::vector<SolutionEntry> entries;
};

namespace {

struct ResolvedOptions {
    int nlink = 0;
    fragmap::SearchConfig search;
    std::vector<fragmap::FixedPair> fixed;
};

ResolvedOptions resolve(const fragmap_instance* inst, const fragmap_options* opts)
{
    ResolvedOptions r;
    r.nlink = opts && opts->nlink > 0 ? opts->nlink : inst->impl.nlink.value_or(0);
    if (r.nlink <= 0)
        throw fragmap::Error(fragmap::ErrorKind::Invalid,
                             "nlink not given and the instance stores no default");
    if (opts) {
        if (opts->time_limit_ms > 0)
            r.search.time_limit_ms = opts->time_limit_ms;
        if (opts->backtrack_limit > 0)
            r.search.backtrack_limit = opts->backtrack_limit;
        r.search.strong_alldiff = opts->strong_alldiff != 0;
        for (int i = 0; i < opts->fixed_count; ++i)
            r.fixed.push_back({opts->fixed[2 * i], opts->fixed[2 * i + 1]});
    }
    return r;
}

fragmap_solutions* from_solve_result(const fragmap_instance* inst,
                                     const fragmap::SolveResult& result)
{
    auto* sols = new fragmap_solutions;
    sols->query_size = inst->impl.query_size();
    sols->backtracks = result.stats.backtracks;
    sols->nodes = result.stats.nodes;
    sols->time_ms = result.stats.time_ms;
    switch (result.status) {
    case fragmap::SolveStatus::Optimal: sols->outcome = FRAGMAP_PROVEN_OPTIMAL; break;
    case fragmap::SolveStatus::Infeasible: sols->outcome = FRAGMAP_PROVEN_INFEASIBLE; break;
    case fragmap::SolveStatus::Limit: sols->outcome = FRAGMAP_LIMIT_REACHED; break;
    }
    if (result.best)
        sols->entries.push_back({result.best->mapping, result.best->cost, -1, 0, 0});
    return sols;
}

} // namespace

extern "C" {

const char* fragmap_last_error(void)
{
    return g_last_error.c_str();
}

int fragmap_abi_version(void)
{
    return 1;
}

fragmap_status fragmap_instance_load(const char* path, fragmap_instance** out)
{
    return guarded([&]() {
        *out = new fragmap_instance{fragmap::load_instance(path)};
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_instance_save(const fragmap_instance* inst, const char* path)
{
    return guarded([&]() {
        fragmap::save_instance(inst->impl, path);
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_instance_generate(int n_query, int n_target, int score_max, int delta,
                                         uint64_t seed, fragmap_instance** out)
{
    return guarded([&]() {
        fragmap::GeneratorConfig cfg;
        cfg.n_query = n_query;
        cfg.n_target_real = n_target;
        cfg.score_max = score_max;
        cfg.delta = delta;
        cfg.seed = seed;
        *out = new fragmap_instance{fragmap::generate_instance(cfg)};
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_instance_from_histograms(const char* query_hist_path,
                                                const char* target_hist_path,
                                                const char* query_edges, const char* target_edges,
                                                int delta, fragmap_instance** out)
{
    return guarded([&]() {
        auto query_hists = fragmap::load_histograms(query_hist_path);
        auto target_hists = fragmap::load_histograms(target_hist_path);
        fragmap::Instance inst;
        inst.query = fragmap::FragmentTree(static_cast<int>(query_hists.size()),
                                           parse_edge_list(query_edges));
        inst.target = fragmap::FragmentTree(static_cast<int>(target_hists.size()),
                                            parse_edge_list(target_edges));
        inst.scores = fragmap::build_score_matrix(query_hists, target_hists);
        inst.delta = delta;
        inst.validate();
        *out = new fragmap_instance{std::move(inst)};
        return FRAGMAP_OK;
    });
}

void fragmap_instance_free(fragmap_instance* inst)
{
    delete inst;
}

int fragmap_instance_query_size(const fragmap_instance* inst)
{
    return inst->impl.query_size();
}

int fragmap_instance_target_size(const fragmap_instance* inst)
{
    return inst->impl.target_real_size();
}

int fragmap_instance_delta(const fragmap_instance* inst)
{
    return inst->impl.delta;
}

int fragmap_instance_default_nlink(const fragmap_instance* inst)
{
    return inst->impl.nlink.value_or(0);
}

int fragmap_instance_score(const fragmap_instance* inst, int query, int target)
{
    if (query < 0 || query >= inst->impl.query_size() || target < 0
        || target >= inst->impl.target_real_size())
        return -1;
    return inst->impl.scores.at(query, target + 1);
}

void fragmap_options_init(fragmap_options* opts)
{
    std::memset(opts, 0, sizeof(*opts));
}

fragmap_status fragmap_solve(const fragmap_instance* inst, const fragmap_options* opts,
                             fragmap_solutions** out)
{
    return guarded([&]() {
        ResolvedOptions r = resolve(inst, opts);
        fragmap::SolveResult result = fragmap::minimize(inst->impl, r.nlink, r.search, r.fixed);
        *out = from_solve_result(inst, result);
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_solve_all_optimal(const fragmap_instance* inst,
                                         const fragmap_options* opts, fragmap_solutions** out)
{
    return guarded([&]() {
        ResolvedOptions r = resolve(inst, opts);
        fragmap::SolveResult first = fragmap::minimize(inst->impl, r.nlink, r.search, r.fixed);
        if (first.status != fragmap::SolveStatus::Optimal) {
            *out = from_solve_result(inst, first);
            return FRAGMAP_OK;
        }
        auto records = fragmap::enumerate_optimal(inst->impl, r.nlink, first.best->cost,
                                                  r.search, r.fixed);
        auto* sols = new fragmap_solutions;
        sols->query_size = inst->impl.query_size();
        sols->outcome = FRAGMAP_PROVEN_OPTIMAL;
        for (const auto& record : records) {
            sols->backtracks = first.stats.backtracks + record.stats.backtracks;
            sols->nodes = first.stats.nodes + record.stats.nodes;
            sols->time_ms = first.stats.time_ms + record.stats.time_ms;
            sols->entries.push_back({record.mapping, record.cost, -1, 0, 0});
        }
        *out = sols;
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_diverse(const fragmap_instance* inst, const fragmap_options* opts, int k,
                               long gap_absolute, int gap_percent, int widen_distance_cap,
                               fragmap_solutions** out)
{
    return guarded([&]() {
        ResolvedOptions r = resolve(inst, opts);
        fragmap::DiversityConfig cfg;
        cfg.k = k;
        if (gap_percent >= 0)
            cfg.gap_percent = gap_percent;
        else
            cfg.gap = gap_absolute;
        cfg.widen_distance_cap = widen_distance_cap != 0;
        cfg.search = r.search;
        auto solutions = fragmap::diverse_solutions(inst->impl, r.nlink, cfg, r.fixed);

        auto* sols = new fragmap_solutions;
        sols->query_size = inst->impl.query_size();
        sols->outcome = solutions.empty() ? FRAGMAP_PROVEN_INFEASIBLE : FRAGMAP_PROVEN_OPTIMAL;
        for (const auto& s : solutions) {
            sols->backtracks += s.record.stats.backtracks;
            sols->nodes += s.record.stats.nodes;
            sols->time_ms += s.record.stats.time_ms;
            if (!s.record.stats.proven)
                sols->outcome = FRAGMAP_LIMIT_REACHED;
            sols->entries.push_back({s.record.mapping, s.record.cost, s.achieved_distance,
                                     s.hamming_to_first, s.duplicate ? 1 : 0});
        }
        *out = sols;
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_oracle_feasible_set(const fragmap_instance* inst, int nlink,
                                           fragmap_solutions** out)
{
    return guarded([&]() {
        auto feasible = fragmap::oracle::solve(inst->impl, nlink);
        auto* sols = new fragmap_solutions;
        sols->query_size = inst->impl.query_size();
        sols->outcome =
            feasible.empty() ? FRAGMAP_PROVEN_INFEASIBLE : FRAGMAP_PROVEN_OPTIMAL;
        for (const auto& s : feasible)
            sols->entries.push_back({s.mapping, s.cost, -1, 0, 0});
        *out = sols;
        return FRAGMAP_OK;
    });
}

fragmap_status fragmap_oracle_diverse(const fragmap_instance* inst, int nlink, int k, long gap,
                                      fragmap_solutions** out)
{
    return guarded([&]() {
        auto picks = fragmap::oracle::diverse(inst->impl, nlink, k, gap);
        auto* sols = new fragmap_solutions;
        sols->query_size = inst->impl.query_size();
        sols->outcome = picks.empty() ? FRAGMAP_PROVEN_INFEASIBLE : FRAGMAP_PROVEN_OPTIMAL;
        for (std::size_t i = 0; i < picks.size(); ++i) {
            int hamming = i == 0 ? 0
                                 : fragmap::oracle::hamming_distance(picks[i].mapping,
                                                                     picks[0].mapping);
            int duplicate = 0;
            for (std::size_t j = 0; j < i; ++j)
                if (picks[j].mapping == picks[i].mapping)
                    duplicate = 1;
            sols->entries.push_back({picks[i].mapping, picks[i].cost, -1, hamming, duplicate});
        }
        *out = sols;
        return FRAGMAP_OK;
    });
}

void fragmap_solutions_free(fragmap_solutions* sols)
{
    delete sols;
}

fragmap_outcome fragmap_solutions_outcome(const fragmap_solutions* sols)
{
    return sols->outcome;
}

int fragmap_solutions_count(const fragmap_solutions* sols)
{
    return static_cast<int>(sols->entries.size());
}

int64_t fragmap_solutions_backtracks(const fragmap_solutions* sols)
{
    return sols->backtracks;
}

int64_t fragmap_solutions_nodes(const fragmap_solutions* sols)
{
    return sols->nodes;
}

double fragmap_solutions_time_ms(const fragmap_solutions* sols)
{
    return sols->time_ms;
}

long fragmap_solutions_cost(const fragmap_solutions* sols, int idx)
{
    return sols->entries[idx].cost;
}

fragmap_status fragmap_solutions_mapping(const fragmap_solutions* sols, int idx, int* buf,
                                         int buf_len)
{
    if (idx < 0 || idx >= static_cast<int>(sols->entries.size()))
        return set_error(FRAGMAP_ERR_INVALID, "solution index out of range");
    if (buf_len < sols->query_size)
        return set_error(FRAGMAP_ERR_INVALID, "mapping buffer too small");
    const auto& mapping = sols->entries[idx].mapping;
    for (int i = 0; i < sols->query_size; ++i)
        buf[i] = mapping[i];
    return FRAGMAP_OK;
}

long fragmap_solutions_distance(const fragmap_solutions* sols, int idx)
{
    return sols->entries[idx].distance;
}

int fragmap_solutions_hamming_to_first(const fragmap_solutions* sols, int idx)
{
    return sols->entries[idx].hamming_to_first;
}

int fragmap_solutions_is_duplicate(const fragmap_solutions* sols, int idx)
{
    return sols->entries[idx].duplicate;
}

} // extern "C"
