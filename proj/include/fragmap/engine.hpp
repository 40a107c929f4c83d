#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace fragmap {

// Dense 0-based handle into a Network's variable table.
using VarId = int;

class Network;

// Incremental filtering procedure attached to one constraint. propagate()
// returns false to signal failure (some domain was or would be emptied).
class Propagator {
public:
    enum class Kind {
        BinaryTable,
        AllDifferentExcept0,
        CountValue,
        LinearSumEq,
        PathZeroLink,
        DiversityLowerBound,
    };

    Propagator(Kind kind, std::vector<VarId> scope) : kind_(kind), scope_(std::move(scope)) {}
    virtual ~Propagator() = default;

    virtual bool propagate(Network& net) = 0;

    Kind kind() const { return kind_; }
    const std::vector<VarId>& scope() const { return scope_; }

private:
    Kind kind_;
    std::vector<VarId> scope_;
};

struct PropagateResult {
    bool consistent = true;
    int failed_constraint = -1; // set when consistent == false
};

// A constraint network: integer variables over reversible sparse-set
// domains, a trail for chronological backtracking, a FIFO propagation
// queue, and per-constraint failure weights feeding the dom/wdeg search
// heuristic. Strictly single-threaded; independent instances are fully
// isolated.
class Network {
public:
    Network() = default;
    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    // --- variables -------------------------------------------------------

    // Values may arrive unsorted/duplicated; the initial domain is their set.
    VarId add_variable(std::vector<int> values);
    VarId add_range_variable(int lo, int hi); // inclusive

    int num_variables() const { return static_cast<int>(domains_.size()); }
    int num_constraints() const { return static_cast<int>(propagators_.size()); }

    int domain_size(VarId v) const { return domains_[v].size; }
    int domain_min(VarId v) const { return domains_[v].min; }
    int domain_max(VarId v) const { return domains_[v].max; }
    bool domain_contains(VarId v, int value) const;
    bool is_assigned(VarId v) const { return domains_[v].size == 1; }
    int assigned_value(VarId v) const { return domains_[v].min; }
    // Element of the domain's internal order; stable between mutations.
    int domain_value_at(VarId v, int idx) const { return domains_[v].dense[idx]; }
    std::vector<int> domain_values(VarId v) const; // sorted snapshot

    // --- domain mutation (used by propagators and by search) -------------
    // All return false if the change empties the domain; the domain is
    // then in a failed state and must be unwound via pop_depth.

    bool remove_value(VarId v, int value);
    bool remove_below(VarId v, int bound); // remove all values < bound
    bool remove_above(VarId v, int bound); // remove all values > bound
    bool assign(VarId v, int value);

    // --- constraints ------------------------------------------------------
    // Each post returns the constraint id. Posting a constraint that is
    // already inconsistent (e.g. an empty table) records root-level
    // infeasibility rather than throwing.

    int post_binary_table(VarId x, VarId y, const std::vector<std::pair<int, int>>& allowed);
    int post_all_different_except_0(std::span<const VarId> vars, bool matching_filter = false);
    int post_count_value(int value, std::span<const VarId> vars, VarId occ);
    int post_linear_sum_eq(std::span<const VarId> vars, VarId total);
    int post_path_zero_link(VarId a, VarId b, std::span<const VarId> path);
    // Enforces distance_var <= base + sum over reference assignments of the
    // Hamming distance between vars and that assignment.
    int post_diversity(std::span<const VarId> vars, VarId distance_var,
                       std::vector<std::vector<int>> reference_assignments, int base);

    // Runs queued propagators to fixpoint. On failure the failing
    // constraint's weight is incremented and the queue is flushed.
    PropagateResult propagate_to_fixpoint();

    bool root_failed() const { return root_failed_; }
    void fail_at_root(int cid = -1)
    {
        root_failed_ = true;
        root_fail_cid_ = cid;
    }

    // --- trail ------------------------------------------------------------

    void push_depth();
    void pop_depth();
    int depth() const { return static_cast<int>(level_marks_.size()); }

    // --- failure weights (dom/wdeg bookkeeping) ---------------------------

    std::int64_t constraint_weight(int cid) const { return weights_[cid]; }
    std::int64_t var_weight(VarId v) const { return var_weights_[v]; }

    // Internal hooks for propagator implementations.
    void trail_write(int* slot, int new_value);
    void wake_watchers(VarId v);

private:
    struct Domain {
        std::vector<int> dense;  // permutation of the universe; first `size` are current
        std::vector<int> sparse; // (value - offset) -> position in dense, or -1
        int offset = 0;
        int size = 0;
        int min = 0;
        int max = 0;
    };

    struct TrailEntry {
        int* slot;
        int old_value;
    };

    VarId register_domain(Domain&& d);
    int register_propagator(std::unique_ptr<Propagator> p);
    bool remove_at(Domain& d, int pos);
    void refresh_min(Domain& d);
    void refresh_max(Domain& d);

    std::deque<Domain> domains_; // deque: trailed int slots must stay put
    std::vector<std::unique_ptr<Propagator>> propagators_;
    std::vector<std::vector<int>> watchers_; // var -> constraint ids
    std::vector<std::int64_t> weights_;      // per constraint, starts at 1
    std::vector<std::int64_t> var_weights_;  // sum of attached constraint weights

    std::vector<TrailEntry> trail_;
    std::vector<std::size_t> level_marks_;

    std::deque<int> queue_;
    std::vector<char> queued_;
    bool root_failed_ = false;
    int root_fail_cid_ = -1;
};

} // namespace fragmap
