#include "fragmap/engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fragmap {

// ---------------------------------------------------------------------------
// Domains and trail
// ---------------------------------------------------------------------------

VarId Network::register_domain(Domain&& d)
{
    domains_.push_back(std::move(d));
    watchers_.emplace_back();
    var_weights_.push_back(0);
    return static_cast<VarId>(domains_.size() - 1);
}

VarId Network::add_variable(std::vector<int> values)
{
    if (values.empty())
        throw std::logic_error("variable created with an empty domain");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    Domain d;
    d.offset = values.front();
    d.min = values.front();
    d.max = values.back();
    d.size = static_cast<int>(values.size());
    d.dense = std::move(values);
    d.sparse.assign(d.max - d.offset + 1, -1);
    for (int i = 0; i < d.size; ++i)
        d.sparse[d.dense[i] - d.offset] = i;
    return register_domain(std::move(d));
}

VarId Network::add_range_variable(int lo, int hi)
{
    if (lo > hi)
        throw std::logic_error("variable created with an empty range");
    Domain d;
    d.offset = lo;
    d.min = lo;
    d.max = hi;
    d.size = hi - lo + 1;
    d.dense.resize(d.size);
    d.sparse.resize(d.size);
    for (int i = 0; i < d.size; ++i) {
        d.dense[i] = lo + i;
        d.sparse[i] = i;
    }
    return register_domain(std::move(d));
}

bool Network::domain_contains(VarId v, int value) const
{
    const Domain& d = domains_[v];
    if (value < d.offset || value > d.offset + static_cast<int>(d.sparse.size()) - 1)
        return false;
    int pos = d.sparse[value - d.offset];
    return pos >= 0 && pos < d.size;
}

std::vector<int> Network::domain_values(VarId v) const
{
    const Domain& d = domains_[v];
    std::vector<int> out(d.dense.begin(), d.dense.begin() + d.size);
    std::sort(out.begin(), out.end());
    return out;
}

void Network::trail_write(int* slot, int new_value)
{
    if (*slot == new_value)
        return;
    if (!level_marks_.empty())
        trail_.push_back({slot, *slot});
    *slot = new_value;
}

void Network::push_depth()
{
    level_marks_.push_back(trail_.size());
}

void Network::pop_depth()
{
    if (level_marks_.empty())
        throw std::logic_error("pop_depth without a matching push_depth");
    std::size_t mark = level_marks_.back();
    level_marks_.pop_back();
    while (trail_.size() > mark) {
        TrailEntry& e = trail_.back();
        *e.slot = e.old_value;
        trail_.pop_back();
    }
}

// Swap-removes dense[pos]. The dense array stays a permutation of the
// universe, so restoring `size` restores the domain as a set.
bool Network::remove_at(Domain& d, int pos)
{
    int last = d.size - 1;
    int value = d.dense[pos];
    int moved = d.dense[last];
    d.dense[pos] = moved;
    d.dense[last] = value;
    d.sparse[moved - d.offset] = pos;
    d.sparse[value - d.offset] = last;
    trail_write(&d.size, last);
    return d.size > 0;
}

void Network::refresh_min(Domain& d)
{
    int m = d.dense[0];
    for (int i = 1; i < d.size; ++i)
        m = std::min(m, d.dense[i]);
    trail_write(&d.min, m);
}

void Network::refresh_max(Domain& d)
{
    int m = d.dense[0];
    for (int i = 1; i < d.size; ++i)
        m = std::max(m, d.dense[i]);
    trail_write(&d.max, m);
}

bool Network::remove_value(VarId v, int value)
{
    if (!domain_contains(v, value))
        return true;
    Domain& d = domains_[v];
    if (!remove_at(d, d.sparse[value - d.offset]))
        return false;
    if (value == d.min)
        refresh_min(d);
    if (value == d.max)
        refresh_max(d);
    wake_watchers(v);
    return true;
}

bool Network::remove_below(VarId v, int bound)
{
    Domain& d = domains_[v];
    if (d.min >= bound)
        return true;
    for (int i = d.size - 1; i >= 0; --i)
        if (d.dense[i] < bound && !remove_at(d, i))
            return false;
    refresh_min(d);
    wake_watchers(v);
    return true;
}

bool Network::remove_above(VarId v, int bound)
{
    Domain& d = domains_[v];
    if (d.max <= bound)
        return true;
    for (int i = d.size - 1; i >= 0; --i)
        if (d.dense[i] > bound && !remove_at(d, i))
            return false;
    refresh_max(d);
    wake_watchers(v);
    return true;
}

bool Network::assign(VarId v, int value)
{
    if (!domain_contains(v, value))
        return false;
    Domain& d = domains_[v];
    if (d.size == 1)
        return true;
    int pos = d.sparse[value - d.offset];
    int front = d.dense[0];
    d.dense[0] = value;
    d.dense[pos] = front;
    d.sparse[value - d.offset] = 0;
    d.sparse[front - d.offset] = pos;
    trail_write(&d.size, 1);
    trail_write(&d.min, value);
    trail_write(&d.max, value);
    wake_watchers(v);
    return true;
}

// ---------------------------------------------------------------------------
// Propagation queue
// ---------------------------------------------------------------------------

void Network::wake_watchers(VarId v)
{
    for (int cid : watchers_[v]) {
        if (!queued_[cid]) {
            queued_[cid] = 1;
            queue_.push_back(cid);
        }
    }
}

int Network::register_propagator(std::unique_ptr<Propagator> p)
{
    int cid = static_cast<int>(propagators_.size());
    for (VarId v : p->scope()) {
        watchers_[v].push_back(cid);
        var_weights_[v] += 1;
    }
    propagators_.push_back(std::move(p));
    weights_.push_back(1);
    queued_.push_back(1);
    queue_.push_back(cid);
    return cid;
}

PropagateResult Network::propagate_to_fixpoint()
{
    if (root_failed_) {
        for (int cid : queue_)
            queued_[cid] = 0;
        queue_.clear();
        return {false, root_fail_cid_};
    }
    while (!queue_.empty()) {
        int cid = queue_.front();
        queue_.pop_front();
        queued_[cid] = 0;
        if (!propagators_[cid]->propagate(*this)) {
            weights_[cid] += 1;
            for (VarId v : propagators_[cid]->scope())
                var_weights_[v] += 1;
            for (int other : queue_)
                queued_[other] = 0;
            queue_.clear();
            return {false, cid};
        }
    }
    return {true, -1};
}

// ---------------------------------------------------------------------------
// Propagators
// ---------------------------------------------------------------------------

namespace {

// GAC on a binary relation, AC-3 style with per-value support lists and
// residual supports.
class BinaryTablePropagator final : public Propagator {
public:
    BinaryTablePropagator(Network& net, VarId x, VarId y,
                          const std::vector<std::pair<int, int>>& allowed)
        : Propagator(Kind::BinaryTable, {x, y}), x_(x), y_(y)
    {
        x_offset_ = net.domain_min(x);
        y_offset_ = net.domain_min(y);
        x_supports_.resize(net.domain_max(x) - x_offset_ + 1);
        y_supports_.resize(net.domain_max(y) - y_offset_ + 1);
        for (const auto& [vx, vy] : allowed) {
            if (!net.domain_contains(x, vx) || !net.domain_contains(y, vy))
                continue;
            x_supports_[vx - x_offset_].push_back(vy);
            y_supports_[vy - y_offset_].push_back(vx);
        }
        x_residue_.assign(x_supports_.size(), 0);
        y_residue_.assign(y_supports_.size(), 0);
    }

    bool propagate(Network& net) override
    {
        return revise(net, x_, y_, x_offset_, x_supports_, x_residue_)
            && revise(net, y_, x_, y_offset_, y_supports_, y_residue_);
    }

private:
    static bool revise(Network& net, VarId self, VarId other, int offset,
                       const std::vector<std::vector<int>>& supports,
                       std::vector<int>& residue)
    {
        for (int i = net.domain_size(self) - 1; i >= 0; --i) {
            int value = net.domain_value_at(self, i);
            const auto& sup = supports[value - offset];
            int r = residue[value - offset];
            if (r < static_cast<int>(sup.size()) && net.domain_contains(other, sup[r]))
                continue;
            bool found = false;
            for (int k = 0; k < static_cast<int>(sup.size()); ++k) {
                if (net.domain_contains(other, sup[k])) {
                    residue[value - offset] = k;
                    found = true;
                    break;
                }
            }
            if (!found && !net.remove_value(self, value))
                return false;
        }
        return true;
    }

    VarId x_, y_;
    int x_offset_, y_offset_;
    std::vector<std::vector<int>> x_supports_, y_supports_;
    std::vector<int> x_residue_, y_residue_;
};

// Pairwise-distinct values except that any number of variables may take 0.
// Default filtering prunes an assigned nonzero value from the other
// domains; the optional matching filter additionally runs Regin-style
// filtering where each variable that may take 0 owns a private copy of it.
class AllDifferentExcept0Propagator final : public Propagator {
public:
    AllDifferentExcept0Propagator(Network& net, std::vector<VarId> vars, bool matching_filter)
        : Propagator(Kind::AllDifferentExcept0, vars), vars_(std::move(vars)),
          matching_filter_(matching_filter)
    {
        if (matching_filter_) {
            int lo = std::numeric_limits<int>::max();
            int hi = std::numeric_limits<int>::min();
            for (VarId v : vars_) {
                lo = std::min(lo, net.domain_min(v));
                hi = std::max(hi, net.domain_max(v));
            }
            value_offset_ = lo;
            value_count_ = hi - lo + 1;
        }
    }

    bool propagate(Network& net) override
    {
        const int n = static_cast<int>(vars_.size());
        for (int a = 0; a < n; ++a) {
            if (!net.is_assigned(vars_[a]))
                continue;
            int value = net.assigned_value(vars_[a]);
            if (value == 0)
                continue;
            for (int b = 0; b < n; ++b)
                if (b != a && !net.remove_value(vars_[b], value))
                    return false;
        }
        if (matching_filter_)
            return matching_filter(net);
        return true;
    }

private:
    // Bipartite nodes: variables 0..n-1, then one node per nonzero value of
    // the combined universe, then one private zero node per variable.
    bool matching_filter(Network& net)
    {
        const int n = static_cast<int>(vars_.size());
        const int first_value_node = n;
        const int first_zero_node = n + value_count_;
        const int node_count = first_zero_node + n;

        auto value_node = [&](int value) { return first_value_node + value - value_offset_; };

        // Maximum matching covering every variable (Kuhn).
        std::vector<int> match_of_var(n, -1);    // var -> value node
        std::vector<int> match_of_value(node_count, -1);
        std::vector<int> visited(node_count, 0);
        int stamp = 0;

        auto adjacency = [&](int var, auto&& fn) {
            VarId x = vars_[var];
            for (int i = 0; i < net.domain_size(x); ++i) {
                int value = net.domain_value_at(x, i);
                fn(value == 0 ? first_zero_node + var : value_node(value));
            }
        };

        std::function<bool(int)> augment = [&](int var) -> bool {
            bool found = false;
            adjacency(var, [&](int vn) {
                if (found || visited[vn] == stamp)
                    return;
                visited[vn] = stamp;
                if (match_of_value[vn] == -1 || augment(match_of_value[vn])) {
                    match_of_var[var] = vn;
                    match_of_value[vn] = var;
                    found = true;
                }
            });
            return found;
        };

        for (int var = 0; var < n; ++var) {
            ++stamp;
            if (!augment(var))
                return false; // some variable cannot take any value
        }

        // Orientation: matched edges var->value, other edges value->var.
        // An edge is viable iff it is matched, joins nodes of one strongly
        // connected component, or its value is reachable from a free value.
        std::vector<std::vector<int>> out(node_count);
        for (int var = 0; var < n; ++var) {
            adjacency(var, [&](int vn) {
                if (match_of_var[var] == vn)
                    out[var].push_back(vn);
                else
                    out[vn].push_back(var);
            });
        }

        std::vector<char> reach(node_count, 0);
        std::vector<int> stack;
        for (int vn = first_value_node; vn < node_count; ++vn) {
            if (match_of_value[vn] == -1 && !reach[vn]) {
                reach[vn] = 1;
                stack.push_back(vn);
            }
        }
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : out[u]) {
                if (!reach[w]) {
                    reach[w] = 1;
                    stack.push_back(w);
                }
            }
        }

        std::vector<int> scc(node_count, -1);
        tarjan_scc(out, scc);

        for (int var = 0; var < n; ++var) {
            VarId x = vars_[var];
            for (int i = net.domain_size(x) - 1; i >= 0; --i) {
                int value = net.domain_value_at(x, i);
                if (value == 0)
                    continue; // a private zero is never in conflict
                int vn = value_node(value);
                if (match_of_var[var] == vn || scc[var] == scc[vn] || reach[vn])
                    continue;
                if (!net.remove_value(x, value))
                    return false;
            }
        }
        return true;
    }

    static void tarjan_scc(const std::vector<std::vector<int>>& out, std::vector<int>& scc)
    {
        const int n = static_cast<int>(out.size());
        std::vector<int> index(n, -1), low(n, 0);
        std::vector<char> on_stack(n, 0);
        std::vector<int> stack;
        int next_index = 0, next_scc = 0;

        // Iterative DFS: frames of (node, next edge position).
        std::vector<std::pair<int, std::size_t>> frames;
        for (int root = 0; root < n; ++root) {
            if (index[root] != -1)
                continue;
            frames.emplace_back(root, 0);
            while (!frames.empty()) {
                auto& [u, pos] = frames.back();
                if (pos == 0) {
                    index[u] = low[u] = next_index++;
                    stack.push_back(u);
                    on_stack[u] = 1;
                }
                bool descended = false;
                while (pos < out[u].size()) {
                    int w = out[u][pos++];
                    if (index[w] == -1) {
                        frames.emplace_back(w, 0);
                        descended = true;
                        break;
                    }
                    if (on_stack[w])
                        low[u] = std::min(low[u], index[w]);
                }
                if (descended)
                    continue;
                if (low[u] == index[u]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        scc[w] = next_scc;
                    } while (w != u);
                    ++next_scc;
                }
                int finished = u;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().first] = std::min(low[frames.back().first], low[finished]);
            }
        }
    }

    std::vector<VarId> vars_;
    bool matching_filter_;
    int value_offset_ = 0;
    int value_count_ = 0;
};

// Counting consistency for "exactly occ variables take `value`".
class CountValuePropagator final : public Propagator {
public:
    CountValuePropagator(int value, std::vector<VarId> vars, VarId occ)
        : Propagator(Kind::CountValue, with_occ(vars, occ)), value_(value),
          vars_(std::move(vars)), occ_(occ)
    {
    }

    bool propagate(Network& net) override
    {
        int assigned = 0, possible = 0;
        for (VarId x : vars_) {
            if (net.domain_contains(x, value_)) {
                ++possible;
                if (net.is_assigned(x))
                    ++assigned;
            }
        }
        if (!net.remove_below(occ_, assigned) || !net.remove_above(occ_, possible))
            return false;
        if (net.domain_max(occ_) == assigned) {
            // the count is saturated: no unassigned variable may take it
            for (VarId x : vars_)
                if (!net.is_assigned(x) && !net.remove_value(x, value_))
                    return false;
        }
        if (net.domain_min(occ_) == possible) {
            // every remaining candidate is needed
            for (VarId x : vars_)
                if (net.domain_contains(x, value_) && !net.assign(x, value_))
                    return false;
        }
        return true;
    }

private:
    static std::vector<VarId> with_occ(const std::vector<VarId>& vars, VarId occ)
    {
        std::vector<VarId> scope = vars;
        scope.push_back(occ);
        return scope;
    }

    int value_;
    std::vector<VarId> vars_;
    VarId occ_;
};

// Bounds consistency on sum(vars) == total.
class LinearSumEqPropagator final : public Propagator {
public:
    LinearSumEqPropagator(std::vector<VarId> vars, VarId total)
        : Propagator(Kind::LinearSumEq, with_total(vars, total)), vars_(std::move(vars)),
          total_(total)
    {
    }

    bool propagate(Network& net) override
    {
        std::int64_t sum_min = 0, sum_max = 0;
        for (VarId x : vars_) {
            sum_min += net.domain_min(x);
            sum_max += net.domain_max(x);
        }
        if (!net.remove_below(total_, clamp(sum_min)) || !net.remove_above(total_, clamp(sum_max)))
            return false;
        const std::int64_t total_min = net.domain_min(total_);
        const std::int64_t total_max = net.domain_max(total_);
        for (VarId x : vars_) {
            std::int64_t others_min = sum_min - net.domain_min(x);
            std::int64_t others_max = sum_max - net.domain_max(x);
            int old_min = net.domain_min(x), old_max = net.domain_max(x);
            if (!net.remove_below(x, clamp(total_min - others_max))
                || !net.remove_above(x, clamp(total_max - others_min)))
                return false;
            sum_min += net.domain_min(x) - old_min;
            sum_max += net.domain_max(x) - old_max;
        }
        return true;
    }

private:
    static int clamp(std::int64_t v)
    {
        constexpr std::int64_t lo = std::numeric_limits<int>::min() / 2;
        constexpr std::int64_t hi = std::numeric_limits<int>::max() / 2;
        return static_cast<int>(std::clamp(v, lo, hi));
    }

    static std::vector<VarId> with_total(const std::vector<VarId>& vars, VarId total)
    {
        std::vector<VarId> scope = vars;
        scope.push_back(total);
        return scope;
    }

    std::vector<VarId> vars_;
    VarId total_;
};

// a == 0  or  b == 0  or  no path variable takes 0.
class PathZeroLinkPropagator final : public Propagator {
public:
    PathZeroLinkPropagator(VarId a, VarId b, std::vector<VarId> path)
        : Propagator(Kind::PathZeroLink, with_endpoints(a, b, path)), a_(a), b_(b),
          path_(std::move(path))
    {
    }

    bool propagate(Network& net) override
    {
        const bool a_zero = net.is_assigned(a_) && net.assigned_value(a_) == 0;
        const bool b_zero = net.is_assigned(b_) && net.assigned_value(b_) == 0;
        if (a_zero || b_zero)
            return true; // disjunction satisfied
        const bool a_can_zero = net.domain_contains(a_, 0);
        const bool b_can_zero = net.domain_contains(b_, 0);
        if (!a_can_zero && !b_can_zero) {
            // both endpoints are mapped: the whole path must be mapped
            for (VarId p : path_)
                if (!net.remove_value(p, 0))
                    return false;
            return true;
        }
        for (VarId p : path_) {
            if (net.is_assigned(p) && net.assigned_value(p) == 0) {
                // a broken path: one endpoint has to drop out
                if (!a_can_zero)
                    return net.assign(b_, 0);
                if (!b_can_zero)
                    return net.assign(a_, 0);
                return true;
            }
        }
        return true;
    }

private:
    static std::vector<VarId> with_endpoints(VarId a, VarId b, const std::vector<VarId>& path)
    {
        std::vector<VarId> scope{a, b};
        scope.insert(scope.end(), path.begin(), path.end());
        return scope;
    }

    VarId a_, b_;
    std::vector<VarId> path_;
};

// distance_var <= base + sum over reference assignments of the Hamming
// distance between vars and that assignment. Bound filtering: the upper
// bound of distance_var is the number of coordinates still free to
// mismatch; when its lower bound needs all of them, mismatches are forced.
class DiversityPropagator final : public Propagator {
public:
    DiversityPropagator(std::vector<VarId> vars, VarId distance_var,
                        std::vector<std::vector<int>> references, int base)
        : Propagator(Kind::DiversityLowerBound, with_distance(vars, distance_var)),
          vars_(std::move(vars)), distance_var_(distance_var),
          references_(std::move(references)), base_(base)
    {
    }

    bool propagate(Network& net) override
    {
        std::int64_t cap = base_;
        for (const auto& ref : references_)
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (can_mismatch(net, vars_[i], ref[i]))
                    ++cap;
        if (!net.remove_above(distance_var_, static_cast<int>(cap)))
            return false;
        if (net.domain_min(distance_var_) == cap) {
            // reaching the bound needs every remaining coordinate to differ
            for (const auto& ref : references_)
                for (std::size_t i = 0; i < vars_.size(); ++i)
                    if (can_mismatch(net, vars_[i], ref[i])
                        && !net.remove_value(vars_[i], ref[i]))
                        return false;
        }
        return true;
    }

private:
    static bool can_mismatch(const Network& net, VarId x, int ref)
    {
        return !(net.is_assigned(x) && net.assigned_value(x) == ref);
    }

    static std::vector<VarId> with_distance(const std::vector<VarId>& vars, VarId d)
    {
        std::vector<VarId> scope = vars;
        scope.push_back(d);
        return scope;
    }

    std::vector<VarId> vars_;
    VarId distance_var_;
    std::vector<std::vector<int>> references_;
    int base_;
};

} // namespace

// ---------------------------------------------------------------------------
// Posting
// ---------------------------------------------------------------------------

int Network::post_binary_table(VarId x, VarId y, const std::vector<std::pair<int, int>>& allowed)
{
    auto p = std::make_unique<BinaryTablePropagator>(*this, x, y, allowed);
    int cid = register_propagator(std::move(p));
    bool any = false;
    for (const auto& [vx, vy] : allowed)
        if (domain_contains(x, vx) && domain_contains(y, vy)) {
            any = true;
            break;
        }
    if (!any)
        fail_at_root(cid);
    return cid;
}

int Network::post_all_different_except_0(std::span<const VarId> vars, bool matching_filter)
{
    if (vars.size() < 2)
        throw std::logic_error("all_different_except_0 needs at least two variables");
    return register_propagator(std::make_unique<AllDifferentExcept0Propagator>(
        *this, std::vector<VarId>(vars.begin(), vars.end()), matching_filter));
}

int Network::post_count_value(int value, std::span<const VarId> vars, VarId occ)
{
    return register_propagator(std::make_unique<CountValuePropagator>(
        value, std::vector<VarId>(vars.begin(), vars.end()), occ));
}

int Network::post_linear_sum_eq(std::span<const VarId> vars, VarId total)
{
    return register_propagator(std::make_unique<LinearSumEqPropagator>(
        std::vector<VarId>(vars.begin(), vars.end()), total));
}

int Network::post_path_zero_link(VarId a, VarId b, std::span<const VarId> path)
{
    if (path.empty())
        throw std::logic_error("path_zero_link posted with an empty path");
    return register_propagator(std::make_unique<PathZeroLinkPropagator>(
        a, b, std::vector<VarId>(path.begin(), path.end())));
}

int Network::post_diversity(std::span<const VarId> vars, VarId distance_var,
                            std::vector<std::vector<int>> reference_assignments, int base)
{
    if (reference_assignments.empty())
        throw std::logic_error("diversity posted with an empty reference archive");
    for (const auto& ref : reference_assignments)
        if (ref.size() != vars.size())
            throw std::logic_error("diversity reference of mismatched arity");
    return register_propagator(std::make_unique<DiversityPropagator>(
        std::vector<VarId>(vars.begin(), vars.end()), distance_var,
        std::move(reference_assignments), base));
}

} // namespace fragmap
