#include "fragmap/search.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace fragmap {

namespace {

double now_ms()
{
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

} // namespace

Searcher::Searcher(Network& net, std::vector<VarId> primary, std::vector<VarId> tail,
                   Options options)
    : net_(net), primary_(std::move(primary)), tail_(std::move(tail)), options_(options)
{
    is_primary_.assign(net_.num_variables(), 0);
    for (VarId v : primary_)
        is_primary_[v] = 1;
}

bool Searcher::apply_objective_bound()
{
    if (!have_incumbent_ || options_.mode == Mode::FindAll)
        return true;
    if (options_.mode == Mode::Minimize)
        return net_.remove_above(options_.objective, static_cast<int>(incumbent_value_ - 1));
    return net_.remove_below(options_.objective, static_cast<int>(incumbent_value_ + 1));
}

bool Searcher::limits_hit()
{
    if (options_.backtrack_limit && stats_.backtracks >= *options_.backtrack_limit)
        return true;
    if (options_.time_limit_ms && (++deadline_check_counter_ & 0xFF) == 0
        && now_ms() >= deadline_ms_)
        return true;
    return false;
}

VarId Searcher::select_variable()
{
    if (last_conflict_ != -1 && !net_.is_assigned(last_conflict_))
        return last_conflict_;

    // dom/wdeg: smallest domain-size over summed failure weight; ties go
    // to the smallest variable id (primary_ is ordered by id).
    VarId best = -1;
    std::int64_t best_size = 0;
    std::int64_t best_weight = 1;
    for (VarId v : primary_) {
        if (net_.is_assigned(v))
            continue;
        std::int64_t size = net_.domain_size(v);
        std::int64_t weight = std::max<std::int64_t>(1, net_.var_weight(v));
        if (best == -1 || size * best_weight < best_size * weight) {
            best = v;
            best_size = size;
            best_weight = weight;
        }
    }
    if (best != -1)
        return best;
    for (VarId v : tail_)
        if (!net_.is_assigned(v))
            return v;
    return -1;
}

Searcher::Step Searcher::dive()
{
    if (limits_hit()) {
        limit_hit_ = true;
        return Step::Stop;
    }

    VarId v = select_variable();
    if (v == -1) {
        if (options_.mode != Mode::FindAll) {
            have_incumbent_ = true;
            incumbent_value_ = net_.assigned_value(options_.objective);
        }
        if (!(*callback_)(net_)) {
            stop_requested_ = true;
            return Step::Stop;
        }
        return Step::Done;
    }

    const bool primary = is_primary_[v];
    const int value = (options_.mode == Mode::Maximize && v == options_.objective)
        ? net_.domain_max(v)
        : net_.domain_min(v);

    // left child: v = value
    net_.push_depth();
    ++stats_.nodes;
    Step step = Step::Done;
    bool ok = net_.assign(v, value) && apply_objective_bound()
        && net_.propagate_to_fixpoint().consistent;
    if (!ok) {
        ++stats_.backtracks;
        last_conflict_ = primary ? v : -1;
    }
    else {
        if (last_conflict_ == v)
            last_conflict_ = -1;
        step = dive();
    }
    net_.pop_depth();
    if (step == Step::Stop)
        return Step::Stop;

    // right child: v != value
    net_.push_depth();
    ++stats_.nodes;
    ok = net_.remove_value(v, value) && apply_objective_bound()
        && net_.propagate_to_fixpoint().consistent;
    if (!ok) {
        ++stats_.backtracks;
        last_conflict_ = primary ? v : -1;
    }
    else {
        step = dive();
    }
    net_.pop_depth();
    return step;
}

Searcher::Outcome Searcher::run(const SolutionCallback& on_solution)
{
    callback_ = &on_solution;
    stats_ = {};
    last_conflict_ = -1;
    have_incumbent_ = false;
    stop_requested_ = false;
    limit_hit_ = false;
    deadline_check_counter_ = 0;

    const double start = now_ms();
    if (options_.time_limit_ms)
        deadline_ms_ = start + static_cast<double>(*options_.time_limit_ms);

    if (apply_objective_bound() && net_.propagate_to_fixpoint().consistent)
        dive();

    stats_.time_ms = now_ms() - start;
    stats_.proven = !limit_hit_ && !stop_requested_;
    return {stats_.proven, stats_};
}

// ---------------------------------------------------------------------------
// Instance-level drivers
// ---------------------------------------------------------------------------

namespace {

std::vector<VarId> primary_vars(const ModelVariables& vars)
{
    std::vector<VarId> primary = vars.assignment;
    primary.insert(primary.end(), vars.row_score.begin(), vars.row_score.end());
    return primary;
}

} // namespace

SolveResult minimize(const Instance& inst, int nlink, const SearchConfig& cfg,
                     const std::vector<FixedPair>& extra_fixed)
{
    BuildOptions bo;
    bo.nlink = nlink;
    bo.strong_alldiff = cfg.strong_alldiff;
    bo.extra_fixed = extra_fixed;
    BuiltModel m = build_network(inst, bo);

    Searcher::Options so;
    so.mode = Searcher::Mode::Minimize;
    so.objective = m.vars.cost_var;
    so.time_limit_ms = cfg.time_limit_ms;
    so.backtrack_limit = cfg.backtrack_limit;
    Searcher searcher(m.net, primary_vars(m.vars), {m.vars.dummy_count, m.vars.cost_var}, so);

    std::optional<SolutionRecord> best;
    Searcher::Outcome outcome = searcher.run([&](const Network& net) {
        DecodedSolution d = decode_solution(inst, m.vars, net);
        best = SolutionRecord{std::move(d.mapping), d.cost, {}};
        return true;
    });

    SolveResult result;
    result.stats = outcome.stats;
    if (best) {
        best->stats = outcome.stats;
        result.best = std::move(best);
    }
    result.status = !outcome.exhausted ? SolveStatus::Limit
        : result.best                  ? SolveStatus::Optimal
                                       : SolveStatus::Infeasible;
    return result;
}

std::vector<SolutionRecord> enumerate_optimal(const Instance& inst, int nlink, long optimal_cost,
                                              const SearchConfig& cfg,
                                              const std::vector<FixedPair>& extra_fixed)
{
    BuildOptions bo;
    bo.nlink = nlink;
    bo.strong_alldiff = cfg.strong_alldiff;
    bo.cost_upper_bound = optimal_cost;
    bo.extra_fixed = extra_fixed;
    BuiltModel m = build_network(inst, bo);
    if (!m.net.root_failed())
        m.net.assign(m.vars.cost_var, static_cast<int>(optimal_cost));

    Searcher::Options so;
    so.mode = Searcher::Mode::FindAll;
    so.time_limit_ms = cfg.time_limit_ms;
    so.backtrack_limit = cfg.backtrack_limit;
    Searcher searcher(m.net, primary_vars(m.vars), {m.vars.dummy_count, m.vars.cost_var}, so);

    std::vector<SolutionRecord> out;
    std::set<std::vector<int>> seen;
    Searcher::Outcome outcome = searcher.run([&](const Network& net) {
        DecodedSolution d = decode_solution(inst, m.vars, net);
        if (seen.insert(d.mapping).second)
            out.push_back(SolutionRecord{std::move(d.mapping), d.cost, {}});
        return true;
    });
    for (auto& record : out)
        record.stats = outcome.stats;
    return out;
}

std::vector<SolveResult> sweep_nlink(const Instance& inst, const SearchConfig& cfg,
                                     const std::vector<FixedPair>& extra_fixed)
{
    std::vector<SolveResult> out;
    out.reserve(inst.query_size());
    for (int nlink = 1; nlink <= inst.query_size(); ++nlink)
        out.push_back(minimize(inst, nlink, cfg, extra_fixed));
    return out;
}

} // namespace fragmap
