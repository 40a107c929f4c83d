#include "fragmap/oracle.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fragmap/error.hpp"

namespace fragmap::oracle {

namespace {

void guard_size(const Instance& inst)
{
    if (inst.query_size() > kMaxQuerySize)
        throw Error(ErrorKind::Invalid,
                    "oracle refuses queries larger than " + std::to_string(kMaxQuerySize)
                        + " fragments (exhaustive enumeration)");
}

} // namespace

std::vector<std::vector<int>> enumerate_connected_subsets(const FragmentTree& tree, int size)
{
    const int n = tree.size();
    if (size < 1 || size > n)
        throw Error(ErrorKind::Invalid, "subset size out of range");
    if (n > 30)
        throw Error(ErrorKind::Invalid, "tree too large for subset enumeration");

    // Grow connected sets one adjacent node at a time; the bitmask set
    // dedups the different growth orders.
    std::set<std::uint32_t> current;
    for (int v = 0; v < n; ++v)
        current.insert(std::uint32_t{1} << v);
    for (int round = 1; round < size; ++round) {
        std::set<std::uint32_t> next;
        for (std::uint32_t mask : current) {
            for (int v = 0; v < n; ++v) {
                if (!(mask & (std::uint32_t{1} << v)))
                    continue;
                for (int w : tree.neighbors(v))
                    if (!(mask & (std::uint32_t{1} << w)))
                        next.insert(mask | (std::uint32_t{1} << w));
            }
        }
        current = std::move(next);
    }

    std::vector<std::vector<int>> out;
    out.reserve(current.size());
    for (std::uint32_t mask : current) {
        std::vector<int> nodes;
        for (int v = 0; v < n; ++v)
            if (mask & (std::uint32_t{1} << v))
                nodes.push_back(v);
        out.push_back(std::move(nodes));
    }
    return out;
}

namespace {

// Recursively enumerates injective, edge-preserving, in-threshold
// placements of the ordered subset into the real target fragments.
// earlier_adjacent[d] lists positions < d whose query node is linked to
// order[d]; their images must be linked in the target.
void place(const Instance& inst, const std::vector<int>& order,
           const std::vector<std::vector<int>>& earlier_adjacent, std::vector<int>& image,
           std::vector<char>& used, std::size_t depth, long cost, FeasibleSet& out)
{
    if (depth == order.size()) {
        OracleSolution sol;
        sol.mapping.assign(inst.query_size(), -1);
        for (std::size_t i = 0; i < order.size(); ++i)
            sol.mapping[order[i]] = image[i];
        sol.cost = cost;
        out.push_back(std::move(sol));
        return;
    }

    const int q = order[depth];
    for (int t = 0; t < inst.target_real_size(); ++t) {
        if (used[t])
            continue;
        const int score = inst.scores.at(q, t + 1);
        if (score >= inst.delta)
            continue;
        bool edges_ok = true;
        for (int pos : earlier_adjacent[depth]) {
            if (!inst.target.adjacent(image[pos], t)) {
                edges_ok = false;
                break;
            }
        }
        if (!edges_ok)
            continue;
        used[t] = 1;
        image[depth] = t;
        place(inst, order, earlier_adjacent, image, used, depth + 1, cost + score, out);
        used[t] = 0;
    }
}

} // namespace

FeasibleSet solve(const Instance& inst, int nlink)
{
    guard_size(inst);
    inst.validate();
    if (nlink < 1 || nlink > inst.query_size())
        throw Error(ErrorKind::Invalid, "nlink out of range");

    FeasibleSet out;
    for (const auto& subset : enumerate_connected_subsets(inst.query, nlink)) {
        // Connected growth order: every node after the first is adjacent
        // to some earlier one.
        std::vector<char> in_subset(inst.query_size(), 0);
        for (int v : subset)
            in_subset[v] = 1;
        std::vector<int> order{subset[0]};
        std::vector<char> placed(inst.query_size(), 0);
        placed[subset[0]] = 1;
        while (order.size() < subset.size()) {
            for (int v : subset) {
                if (placed[v])
                    continue;
                bool touches = false;
                for (int w : inst.query.neighbors(v))
                    if (placed[w]) {
                        touches = true;
                        break;
                    }
                if (touches) {
                    order.push_back(v);
                    placed[v] = 1;
                }
            }
        }

        std::vector<std::vector<int>> earlier_adjacent(order.size());
        for (std::size_t d = 0; d < order.size(); ++d)
            for (std::size_t e = 0; e < d; ++e)
                if (inst.query.adjacent(order[e], order[d]))
                    earlier_adjacent[d].push_back(static_cast<int>(e));

        std::vector<int> image(order.size(), -1);
        std::vector<char> used(inst.target_real_size(), 0);
        place(inst, order, earlier_adjacent, image, used, 0, 0, out);
    }

    std::sort(out.begin(), out.end(), [](const OracleSolution& a, const OracleSolution& b) {
        return a.cost != b.cost ? a.cost < b.cost : a.mapping < b.mapping;
    });
    return out;
}

std::optional<long> optimal_cost(const Instance& inst, int nlink)
{
    FeasibleSet all = solve(inst, nlink);
    if (all.empty())
        return std::nullopt;
    return all.front().cost;
}

bool is_feasible_mapping(const Instance& inst, int nlink, std::span<const int> mapping,
                         long* cost_out)
{
    const int nq = inst.query_size();
    if (static_cast<int>(mapping.size()) != nq)
        return false;

    std::vector<int> selected;
    std::vector<char> target_used(inst.target_real_size(), 0);
    long cost = 0;
    for (int q = 0; q < nq; ++q) {
        int t = mapping[q];
        if (t == -1)
            continue;
        if (t < 0 || t >= inst.target_real_size())
            return false;
        if (target_used[t])
            return false; // not injective
        target_used[t] = 1;
        int score = inst.scores.at(q, t + 1);
        if (score >= inst.delta)
            return false;
        cost += score;
        selected.push_back(q);
    }
    if (static_cast<int>(selected.size()) != nlink)
        return false;

    // connectivity of the selected query nodes, by traversal
    std::vector<char> in_selected(nq, 0);
    for (int q : selected)
        in_selected[q] = 1;
    std::vector<int> stack{selected.front()};
    std::vector<char> seen(nq, 0);
    seen[selected.front()] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : inst.query.neighbors(v)) {
            if (in_selected[w] && !seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != nlink)
        return false;

    // edge preservation between selected nodes
    for (const auto& [a, b] : inst.query.edges())
        if (in_selected[a] && in_selected[b] && !inst.target.adjacent(mapping[a], mapping[b]))
            return false;

    if (cost_out)
        *cost_out = cost;
    return true;
}

int hamming_distance(std::span<const int> a, std::span<const int> b)
{
    int distance = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        distance += a[i] != b[i];
    return distance;
}

std::optional<long> max_accumulated_distance(const FeasibleSet& feasible, long cost_cap,
                                             const std::vector<std::vector<int>>& archive)
{
    std::optional<long> best;
    for (const auto& sol : feasible) {
        if (sol.cost > cost_cap)
            continue;
        long total = 0;
        for (const auto& ref : archive)
            total += hamming_distance(sol.mapping, ref);
        if (!best || total > *best)
            best = total;
    }
    return best;
}

std::vector<OracleSolution> diverse(const Instance& inst, int nlink, int k, long gap)
{
    guard_size(inst);
    if (k < 1)
        throw Error(ErrorKind::Invalid, "k must be >= 1");
    if (gap < 0)
        throw Error(ErrorKind::Invalid, "gap must be >= 0");

    FeasibleSet feasible = solve(inst, nlink);
    std::vector<OracleSolution> out;
    if (feasible.empty())
        return out;

    out.push_back(feasible.front()); // min cost, lexicographically smallest
    const long cap = feasible.front().cost + gap;
    std::vector<std::vector<int>> archive{feasible.front().mapping};

    for (int i = 1; i < k; ++i) {
        const OracleSolution* pick = nullptr;
        long pick_distance = -1;
        for (const auto& sol : feasible) {
            if (sol.cost > cap)
                continue;
            long total = 0;
            for (const auto& ref : archive)
                total += hamming_distance(sol.mapping, ref);
            if (total > pick_distance
                || (total == pick_distance && pick && sol.mapping < pick->mapping)) {
                pick = &sol;
                pick_distance = total;
            }
        }
        if (!pick)
            break;
        out.push_back(*pick);
        archive.push_back(pick->mapping);
    }
    return out;
}

} // namespace fragmap::oracle
