#include <doctest.h>

#include <set>

#include "fragmap/oracle.hpp"
#include "fragmap/search.hpp"

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

Instance two_chain_instance()
{
    return make_instance(2, {{0, 1}}, 2, {{0, 1}}, {{3, 7}, {4, 2}}, 100);
}

} // namespace

TEST_CASE("binary branching enumerates the full assignment space")
{
    // constraint-free network: the number of solutions is the domain product
    Network net;
    std::vector<VarId> vars{net.add_variable({0, 3, 7}), net.add_variable({1, 2}),
                            net.add_variable({4, 5, 6, 9})};
    Searcher::Options opts;
    opts.mode = Searcher::Mode::FindAll;
    Searcher searcher(net, vars, {}, opts);
    std::set<std::vector<int>> seen;
    long count = 0;
    searcher.run([&](const Network& n) {
        std::vector<int> a;
        for (VarId v : vars)
            a.push_back(n.assigned_value(v));
        seen.insert(a);
        ++count;
        return true;
    });
    CHECK(count == 3 * 2 * 4);
    CHECK(static_cast<long>(seen.size()) == count); // no duplicates
}

TEST_CASE("single-fragment query minimizes to the cheapest target")
{
    Instance inst = make_instance(1, {}, 3, {{0, 1}, {1, 2}}, {{9, 5, 12}}, 10);
    SolveResult result = minimize(inst, 1);
    REQUIRE(result.status == SolveStatus::Optimal);
    REQUIRE(result.best);
    CHECK(result.best->cost == 5);
    CHECK(result.best->mapping == std::vector<int>{1});
    CHECK(result.stats.proven);
}

TEST_CASE("two-chain minimization picks the cost-5 mapping")
{
    SolveResult result = minimize(two_chain_instance(), 2);
    REQUIRE(result.status == SolveStatus::Optimal);
    REQUIRE(result.best);
    CHECK(result.best->cost == 5);
    CHECK(result.best->mapping == std::vector<int>{0, 1});
}

TEST_CASE("solver optimum equals the oracle on random instances, all nlink")
{
    SplitMix64 rng(20240601);
    for (int round = 0; round < 40; ++round) {
        GeneratorConfig cfg;
        cfg.n_query = 3 + rng.below_int(5);
        cfg.n_target_real = 5 + rng.below_int(6);
        cfg.score_max = 100;
        cfg.delta = (round % 3 == 0) ? 15 : 101;
        cfg.seed = rng.next();
        Instance inst = generate_instance(cfg);

        for (int nlink = 1; nlink <= inst.query_size(); ++nlink) {
            SolveResult result = minimize(inst, nlink);
            auto expected = oracle::optimal_cost(inst, nlink);
            if (expected) {
                REQUIRE(result.status == SolveStatus::Optimal);
                REQUIRE(result.best);
                CHECK(result.best->cost == *expected);
                long cost = 0;
                CHECK(oracle::is_feasible_mapping(inst, nlink, result.best->mapping, &cost));
                CHECK(cost == result.best->cost);
            }
            else {
                CHECK(result.status == SolveStatus::Infeasible);
                CHECK_FALSE(result.best);
            }
        }
    }
}

TEST_CASE("all-optimal enumeration matches the oracle's optimal subset")
{
    SplitMix64 rng(4711);
    for (int round = 0; round < 25; ++round) {
        GeneratorConfig cfg;
        cfg.n_query = 3 + rng.below_int(4);
        cfg.n_target_real = cfg.n_query + rng.below_int(4);
        cfg.score_max = 12; // small score range: ties are common
        cfg.delta = 13;
        cfg.seed = rng.next();
        Instance inst = generate_instance(cfg);
        int nlink = 1 + rng.below_int(inst.query_size());

        auto feasible = oracle::solve(inst, nlink);
        if (feasible.empty())
            continue;
        long best = feasible.front().cost;
        std::set<std::vector<int>> expected;
        for (const auto& sol : feasible)
            if (sol.cost == best)
                expected.insert(sol.mapping);

        auto records = enumerate_optimal(inst, nlink, best);
        std::set<std::vector<int>> got;
        for (const auto& r : records) {
            CHECK(r.cost == best);
            got.insert(r.mapping);
        }
        CHECK(got == expected);
    }
}

TEST_CASE("a symmetric instance has two optimal mappings")
{
    // two target leaves with equal scores hanging off the same hub
    Instance inst = make_instance(2, {{0, 1}}, 3, {{0, 1}, {0, 2}},
                                  {{1, 50, 50}, {50, 7, 7}}, 100);
    SolveResult min_result = minimize(inst, 2);
    REQUIRE(min_result.best);
    CHECK(min_result.best->cost == 8);
    auto records = enumerate_optimal(inst, 2, 8);
    CHECK(records.size() == 2);
}

TEST_CASE("sweep solves every nlink independently and matches the oracle")
{
    GeneratorConfig cfg;
    cfg.n_query = 6;
    cfg.n_target_real = 9;
    cfg.score_max = 60;
    cfg.delta = 45;
    cfg.seed = 7;
    Instance inst = generate_instance(cfg);

    auto results = sweep_nlink(inst);
    REQUIRE(results.size() == 6);
    for (int nlink = 1; nlink <= 6; ++nlink) {
        auto expected = oracle::optimal_cost(inst, nlink);
        const SolveResult& r = results[nlink - 1];
        if (expected) {
            CHECK(r.status == SolveStatus::Optimal);
            CHECK(r.best->cost == *expected);
        }
        else {
            CHECK(r.status == SolveStatus::Infeasible);
        }
    }

    // nlink = 1: connectivity is vacuous, the optimum is the cheapest
    // in-threshold cell of the matrix
    long cheapest = inst.delta;
    for (int q = 0; q < inst.query_size(); ++q)
        for (int t = 1; t < inst.scores.cols(); ++t)
            if (inst.scores.at(q, t) < inst.delta)
                cheapest = std::min(cheapest, static_cast<long>(inst.scores.at(q, t)));
    if (results[0].best)
        CHECK(results[0].best->cost == cheapest);
}

TEST_CASE("backtrack limit yields an anytime incumbent")
{
    GeneratorConfig cfg;
    cfg.n_query = 8;
    cfg.n_target_real = 14;
    cfg.score_max = 100;
    cfg.delta = 101;
    cfg.seed = 99;
    Instance inst = generate_instance(cfg);

    SolveResult full = minimize(inst, 6);
    REQUIRE(full.status == SolveStatus::Optimal);

    SearchConfig limited;
    limited.backtrack_limit = 3;
    SolveResult partial = minimize(inst, 6, limited);
    CHECK(partial.stats.backtracks <= 3);
    if (partial.status == SolveStatus::Limit) {
        CHECK_FALSE(partial.stats.proven);
        if (partial.best) {
            long cost = 0;
            CHECK(oracle::is_feasible_mapping(inst, 6, partial.best->mapping, &cost));
            CHECK(partial.best->cost >= full.best->cost); // upper-bounds the optimum
        }
    }
}

TEST_CASE("identical runs give identical statistics and solutions")
{
    GeneratorConfig cfg;
    cfg.n_query = 7;
    cfg.n_target_real = 12;
    cfg.score_max = 50;
    cfg.delta = 40;
    cfg.seed = 1234;
    Instance inst = generate_instance(cfg);

    for (int nlink : {2, 4, 7}) {
        SolveResult a = minimize(inst, nlink);
        SolveResult b = minimize(inst, nlink);
        CHECK(a.status == b.status);
        CHECK(a.stats.backtracks == b.stats.backtracks);
        CHECK(a.stats.nodes == b.stats.nodes);
        if (a.best) {
            REQUIRE(b.best);
            CHECK(a.best->mapping == b.best->mapping);
            CHECK(a.best->cost == b.best->cost);
        }
    }
}

TEST_CASE("strong distinctness filtering does not change answers")
{
    SplitMix64 rng(2025);
    for (int round = 0; round < 10; ++round) {
        GeneratorConfig cfg;
        cfg.n_query = 3 + rng.below_int(4);
        cfg.n_target_real = 6 + rng.below_int(4);
        cfg.score_max = 30;
        cfg.delta = 25;
        cfg.seed = rng.next();
        Instance inst = generate_instance(cfg);
        int nlink = 1 + rng.below_int(inst.query_size());

        SearchConfig strong;
        strong.strong_alldiff = true;
        SolveResult a = minimize(inst, nlink);
        SolveResult b = minimize(inst, nlink, strong);
        CHECK(a.status == b.status);
        if (a.best) {
            REQUIRE(b.best);
            CHECK(a.best->cost == b.best->cost);
        }
    }
}
