#include "fragmap/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fragmap {

std::vector<int> tree_path(const FragmentTree& tree, int from, int to)
{
    const int n = tree.size();
    if (from == to || from < 0 || from >= n || to < 0 || to >= n)
        throw std::logic_error("tree_path: invalid endpoints");

    std::vector<int> parent(n, -1);
    std::vector<int> stack{from};
    parent[from] = from;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == to)
            break;
        for (int w : tree.neighbors(v)) {
            if (parent[w] == -1) {
                parent[w] = v;
                stack.push_back(w);
            }
        }
    }

    std::vector<int> interior;
    for (int v = parent[to]; v != from; v = parent[v])
        interior.push_back(v);
    std::reverse(interior.begin(), interior.end());
    return interior;
}

BuiltModel build_network(const Instance& inst, const BuildOptions& opts)
{
    inst.validate();
    const int nq = inst.query_size();
    const int nt = inst.target_internal_size();
    const int delta = inst.delta;
    const ScoreMatrix& scores = inst.scores;

    if (opts.nlink < 1 || opts.nlink > nq)
        throw Error(ErrorKind::Invalid,
                    "nlink must lie in [1, " + std::to_string(nq) + "], got "
                        + std::to_string(opts.nlink));

    BuiltModel m;
    Network& net = m.net;
    ModelVariables& vars = m.vars;

    // Assignment variables: target indices whose score is under the
    // threshold (the dummy, scored 0, always qualifies).
    for (int i = 0; i < nq; ++i) {
        std::vector<int> values;
        for (int j = 0; j < nt; ++j)
            if (scores.at(i, j) < delta)
                values.push_back(j);
        vars.assignment.push_back(net.add_variable(std::move(values)));
    }

    // Score variables: the in-threshold score values of the row.
    for (int i = 0; i < nq; ++i) {
        std::vector<int> values;
        for (int j = 0; j < nt; ++j)
            if (scores.at(i, j) < delta)
                values.push_back(scores.at(i, j));
        vars.row_score.push_back(net.add_variable(std::move(values)));
    }

    vars.dummy_count = net.add_variable({nq - opts.nlink});

    long cost_ub = static_cast<long>(opts.nlink) * (delta - 1);
    if (opts.cost_upper_bound)
        cost_ub = std::min(cost_ub, *opts.cost_upper_bound);
    if (cost_ub < 0) {
        // an impossible cap; record infeasibility instead of building a var
        vars.cost_var = net.add_variable({0});
        net.fail_at_root();
        return m;
    }
    vars.cost_var = net.add_range_variable(0, static_cast<int>(cost_ub));

    // Channeling: assignment[i] = j forces row_score[i] = S[i][j].
    for (int i = 0; i < nq; ++i) {
        std::vector<std::pair<int, int>> allowed;
        for (int j = 0; j < nt; ++j)
            if (scores.at(i, j) < delta)
                allowed.emplace_back(j, scores.at(i, j));
        net.post_binary_table(vars.assignment[i], vars.row_score[i], allowed);
    }

    if (nq >= 2)
        net.post_all_different_except_0(vars.assignment, opts.strong_alldiff);
    net.post_count_value(0, vars.assignment, vars.dummy_count);
    net.post_linear_sum_eq(vars.row_score, vars.cost_var);

    // Edge preservation: two linked query fragments map to linked target
    // fragments unless at least one of them takes the dummy.
    for (const auto& [q1, q2] : inst.query.edges()) {
        std::vector<std::pair<int, int>> allowed;
        auto in_domain = [&](int i, int j) { return scores.at(i, j) < delta; };
        for (const auto& [t1, t2] : inst.target.edges()) {
            int a = t1 + 1, b = t2 + 1;
            if (in_domain(q1, a) && in_domain(q2, b))
                allowed.emplace_back(a, b);
            if (in_domain(q1, b) && in_domain(q2, a))
                allowed.emplace_back(b, a);
        }
        for (int j = 0; j < nt; ++j) {
            if (in_domain(q2, j))
                allowed.emplace_back(0, j);
            if (in_domain(q1, j))
                allowed.emplace_back(j, 0);
        }
        std::sort(allowed.begin(), allowed.end());
        allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
        net.post_binary_table(vars.assignment[q1], vars.assignment[q2], allowed);
    }

    // Connectivity: for each fragment pair, a mapped pair forbids the
    // dummy on the unique path between them.
    for (int i1 = 0; i1 < nq; ++i1) {
        for (int i2 = i1 + 1; i2 < nq; ++i2) {
            std::vector<int> interior = tree_path(inst.query, i1, i2);
            if (interior.empty())
                continue;
            std::vector<VarId> path_vars;
            path_vars.reserve(interior.size());
            for (int node : interior)
                path_vars.push_back(vars.assignment[node]);
            net.post_path_zero_link(vars.assignment[i1], vars.assignment[i2], path_vars);
        }
    }

    // Fixed associations become root-level assignments.
    std::vector<FixedPair> fixed = inst.fixed;
    fixed.insert(fixed.end(), opts.extra_fixed.begin(), opts.extra_fixed.end());
    {
        std::vector<char> seen_query(nq, 0);
        std::vector<char> seen_target(nt, 0);
        for (const auto& [q, t] : fixed) {
            if (q < 0 || q >= nq)
                throw Error(ErrorKind::Invalid, "fixed association query index out of range");
            if (t < -1 || t >= inst.target_real_size())
                throw Error(ErrorKind::Invalid, "fixed association target index out of range");
            if (seen_query[q])
                throw Error(ErrorKind::Invalid,
                            "query fragment " + std::to_string(q) + " fixed more than once");
            seen_query[q] = 1;
            int internal = to_internal_target(t);
            if (internal != 0) {
                if (seen_target[internal])
                    throw Error(ErrorKind::Invalid,
                                "target fragment " + std::to_string(t) + " fixed more than once");
                seen_target[internal] = 1;
                if (scores.at(q, internal) >= delta)
                    throw Error(ErrorKind::Invalid,
                                "fixed association " + std::to_string(q) + "=" + std::to_string(t)
                                    + " has score " + std::to_string(scores.at(q, internal))
                                    + " >= delta (" + std::to_string(delta) + ")");
            }
            if (!net.assign(vars.assignment[q], internal))
                net.fail_at_root();
        }
    }

    return m;
}

DecodedSolution decode_solution(const Instance& inst, const ModelVariables& vars,
                                const Network& net)
{
    const int nq = inst.query_size();
    DecodedSolution out;
    out.mapping.resize(nq);
    long recomputed = 0;
    for (int i = 0; i < nq; ++i) {
        if (!net.is_assigned(vars.assignment[i]))
            throw std::logic_error("decode_solution on a partial assignment");
        int internal = net.assigned_value(vars.assignment[i]);
        out.mapping[i] = to_file_target(internal);
        recomputed += inst.scores.at(i, internal);
    }
    if (!net.is_assigned(vars.cost_var))
        throw std::logic_error("decode_solution: cost variable not assigned");
    out.cost = net.assigned_value(vars.cost_var);
    if (out.cost != recomputed)
        throw std::logic_error("engine bug: objective value " + std::to_string(out.cost)
                               + " differs from the score sum " + std::to_string(recomputed));
    return out;
}

} // namespace fragmap
