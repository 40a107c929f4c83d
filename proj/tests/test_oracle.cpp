#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "fragmap/oracle.hpp"
#include "fragmap/rng.hpp"

using namespace fragmap;

namespace {

Instance make_instance(int nq, std::vector<std::pair<int, int>> q_edges, int nt,
                       std::vector<std::pair<int, int>> t_edges,
                       std::vector<std::vector<int>> real_cells, int delta)
{
    Instance inst;
    inst.query = FragmentTree(nq, std::move(q_edges));
    inst.target = FragmentTree(nt, std::move(t_edges));
    inst.scores = ScoreMatrix::from_real_cells(real_cells);
    inst.delta = delta;
    inst.validate();
    return inst;
}

Instance random_instance(SplitMix64& rng, int nq, int nt, int smax, int delta)
{
    GeneratorConfig cfg;
    cfg.n_query = nq;
    cfg.n_target_real = nt;
    cfg.score_max = smax;
    cfg.delta = delta;
    cfg.seed = rng.next();
    return generate_instance(cfg);
}

// the 2-chain onto 2-chain example: two edge-preserving injections
Instance two_chain_instance()
{
    return make_instance(2, {{0, 1}}, 2, {{0, 1}}, {{3, 7}, {4, 2}}, 100);
}

} // namespace

TEST_CASE("connected subsets of a chain")
{
    FragmentTree chain(3, {{0, 1}, {1, 2}});
    auto size2 = oracle::enumerate_connected_subsets(chain, 2);
    REQUIRE(size2.size() == 2);
    CHECK(size2[0] == std::vector<int>{0, 1});
    CHECK(size2[1] == std::vector<int>{1, 2});
    // {0, 2} is not connected and must be absent
}

TEST_CASE("the full node set is the single subset of size n")
{
    SplitMix64 rng(5);
    for (int n : {1, 4, 9}) {
        FragmentTree tree(n, random_tree_edges(n, rng));
        auto subsets = oracle::enumerate_connected_subsets(tree, n);
        REQUIRE(subsets.size() == 1);
        CHECK(static_cast<int>(subsets[0].size()) == n);
    }
}

TEST_CASE("connected subsets equal the filter-all-subsets oracle")
{
    SplitMix64 rng(17);
    for (int round = 0; round < 20; ++round) {
        int n = 2 + rng.below_int(9);
        FragmentTree tree(n, random_tree_edges(n, rng));
        for (int size = 1; size <= n; ++size) {
            auto fast = oracle::enumerate_connected_subsets(tree, size);
            std::set<std::vector<int>> fast_set(fast.begin(), fast.end());
            REQUIRE(fast_set.size() == fast.size()); // exactly once each

            std::set<std::vector<int>> expected;
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> nodes;
                for (int v = 0; v < n; ++v)
                    if (mask & (1u << v))
                        nodes.push_back(v);
                if (static_cast<int>(nodes.size()) != size)
                    continue;
                // BFS connectivity over the induced subgraph
                std::set<int> in(nodes.begin(), nodes.end());
                std::vector<int> stack{nodes[0]};
                std::set<int> seen{nodes[0]};
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (int w : tree.neighbors(v))
                        if (in.count(w) && !seen.count(w)) {
                            seen.insert(w);
                            stack.push_back(w);
                        }
                }
                if (seen.size() == nodes.size())
                    expected.insert(nodes);
            }
            CHECK(fast_set == expected);
        }
    }
}

TEST_CASE("single query fragment: one solution per in-threshold target")
{
    Instance inst = make_instance(1, {}, 2, {{0, 1}}, {{5, 9}}, 10);
    auto fs = oracle::solve(inst, 1);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].cost == 5);
    CHECK(fs[0].mapping == std::vector<int>{0});
    CHECK(fs[1].cost == 9);
    CHECK(fs[1].mapping == std::vector<int>{1});
}

TEST_CASE("delta 1 admits nothing")
{
    Instance inst = make_instance(1, {}, 2, {{0, 1}}, {{5, 9}}, 1);
    CHECK(oracle::solve(inst, 1).empty());
}

TEST_CASE("two-chain example has exactly the two hand-enumerated mappings")
{
    auto fs = oracle::solve(two_chain_instance(), 2);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].cost == 5);
    CHECK(fs[0].mapping == std::vector<int>{0, 1});
    CHECK(fs[1].cost == 11);
    CHECK(fs[1].mapping == std::vector<int>{1, 0});
}

TEST_CASE("oracle solutions pass the independent checker; nothing is missed")
{
    SplitMix64 rng(23);
    for (int round = 0; round < 15; ++round) {
        int nq = 2 + rng.below_int(4);
        Instance inst = random_instance(rng, nq, nq + rng.below_int(3), 20,
                                        1 + rng.below_int(25));
        int nt = inst.target_real_size();
        for (int nlink = 1; nlink <= nq; ++nlink) {
            auto fs = oracle::solve(inst, nlink);
            std::set<std::vector<int>> enumerated;
            for (const auto& sol : fs) {
                long cost = 0;
                CHECK(oracle::is_feasible_mapping(inst, nlink, sol.mapping, &cost));
                CHECK(cost == sol.cost);
                enumerated.insert(sol.mapping);
            }
            CHECK(enumerated.size() == fs.size());

            // brute force over every partial injective mapping
            std::set<std::vector<int>> expected;
            std::vector<int> mapping(nq, -1);
            std::function<void(int)> rec = [&](int q) {
                if (q == nq) {
                    if (oracle::is_feasible_mapping(inst, nlink, mapping))
                        expected.insert(mapping);
                    return;
                }
                mapping[q] = -1;
                rec(q + 1);
                for (int t = 0; t < nt; ++t) {
                    if (std::find(mapping.begin(), mapping.begin() + q, t)
                        != mapping.begin() + q)
                        continue;
                    mapping[q] = t;
                    rec(q + 1);
                }
                mapping[q] = -1;
            };
            rec(0);
            CHECK(enumerated == expected);
        }
    }
}

TEST_CASE("optimal cost is invariant under target relabeling")
{
    SplitMix64 rng(29);
    for (int round = 0; round < 10; ++round) {
        Instance inst = random_instance(rng, 2 + rng.below_int(4), 5, 30, 25);
        int nt = inst.target_real_size();

        // random permutation of the real target labels
        std::vector<int> perm(nt);
        for (int i = 0; i < nt; ++i)
            perm[i] = i;
        for (int i = nt - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below_int(i + 1)]);

        std::vector<std::pair<int, int>> edges;
        for (auto [a, b] : inst.target.edges())
            edges.emplace_back(perm[a], perm[b]);
        std::vector<std::vector<int>> cells(inst.query_size(), std::vector<int>(nt));
        for (int q = 0; q < inst.query_size(); ++q)
            for (int t = 0; t < nt; ++t)
                cells[q][perm[t]] = inst.scores.at(q, t + 1);

        Instance relabeled = inst;
        relabeled.target = FragmentTree(nt, std::move(edges));
        relabeled.scores = ScoreMatrix::from_real_cells(cells);
        relabeled.validate();

        for (int nlink = 1; nlink <= inst.query_size(); ++nlink)
            CHECK(oracle::optimal_cost(inst, nlink) == oracle::optimal_cost(relabeled, nlink));
    }
}

TEST_CASE("oracle diverse: unique solution and k = 1 cases")
{
    Instance inst = make_instance(1, {}, 1, {}, {{5}}, 10);
    auto picks = oracle::diverse(inst, 1, 3, 100);
    REQUIRE(picks.size() == 3); // the same solution repeats: nothing else exists
    CHECK(picks[0].mapping == picks[1].mapping);

    auto one = oracle::diverse(two_chain_instance(), 2, 1, 1000);
    REQUIRE(one.size() == 1);
    CHECK(one[0].cost == 5);
}

TEST_CASE("oracle refuses oversized queries")
{
    SplitMix64 rng(3);
    Instance inst = random_instance(rng, 13, 15, 10, 11);
    CHECK_THROWS_AS(oracle::solve(inst, 3), Error);
}
