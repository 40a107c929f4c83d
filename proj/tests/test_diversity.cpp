#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "fragmap/diversity.hpp"
#include "fragmap/oracle.hpp"

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

} // namespace

TEST_CASE("distance propagator caps at the achievable mismatch count")
{
    Network net;
    std::vector<VarId> vars{net.add_variable({1}), net.add_variable({2}), net.add_variable({4})};
    VarId yd = net.add_range_variable(0, 3);
    net.post_diversity(vars, yd, {{1, 2, 3}}, 0);
    REQUIRE(net.propagate_to_fixpoint().consistent);
    CHECK(net.domain_max(yd) == 1); // only the third coordinate differs
}

TEST_CASE("distance propagator with a matching archive pins yd to the base")
{
    Network net;
    std::vector<VarId> vars{net.add_variable({1}), net.add_variable({2}), net.add_variable({3})};
    VarId yd = net.add_range_variable(0, 3);
    net.post_diversity(vars, yd, {{1, 2, 3}}, 0);
    REQUIRE(net.propagate_to_fixpoint().consistent);
    CHECK(net.domain_max(yd) == 0);

    Network net2;
    std::vector<VarId> vars2{net2.add_variable({1}), net2.add_variable({2}),
                             net2.add_variable({3})};
    VarId yd2 = net2.add_range_variable(0, 10);
    net2.post_diversity(vars2, yd2, {{1, 2, 3}}, 4); // base carries over
    REQUIRE(net2.propagate_to_fixpoint().consistent);
    CHECK(net2.domain_max(yd2) == 4);
}

TEST_CASE("distance propagator accepted assignments equal the inequality")
{
    SplitMix64 rng(606);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::vector<int>> domains(3);
        for (auto& d : domains) {
            for (int v = 0; v < 3; ++v)
                if (rng.below(100) < 70)
                    d.push_back(v);
            if (d.empty())
                d.push_back(rng.below_int(3));
        }
        std::vector<std::vector<int>> archive;
        int archive_size = 1 + rng.below_int(2);
        for (int j = 0; j < archive_size; ++j)
            archive.push_back({rng.below_int(3), rng.below_int(3), rng.below_int(3)});
        const int base = rng.below_int(3);
        const int yd_max = 2 + rng.below_int(6);

        Network net;
        std::vector<VarId> vars;
        for (const auto& d : domains)
            vars.push_back(net.add_variable(d));
        VarId yd = net.add_range_variable(0, yd_max);
        net.post_diversity(vars, yd, archive, base);

        Searcher::Options so;
        so.mode = Searcher::Mode::FindAll;
        std::vector<VarId> all = vars;
        all.push_back(yd);
        Searcher searcher(net, all, {}, so);
        std::set<std::vector<int>> got;
        searcher.run([&](const Network& n) {
            std::vector<int> a;
            for (VarId v : all)
                a.push_back(n.assigned_value(v));
            got.insert(a);
            return true;
        });

        std::set<std::vector<int>> expected;
        std::vector<int> a(3);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == domains.size()) {
                long rhs = base;
                for (const auto& ref : archive)
                    for (int k = 0; k < 3; ++k)
                        rhs += a[k] != ref[k];
                for (int y = 0; y <= yd_max; ++y)
                    if (y <= rhs) {
                        std::vector<int> full = a;
                        full.push_back(y);
                        expected.insert(full);
                    }
                return;
            }
            for (int v : domains[i]) {
                a[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
        CHECK(got == expected);
    }
}

TEST_CASE("k = 1 returns exactly the optimal solution")
{
    GeneratorConfig cfg;
    cfg.n_query = 5;
    cfg.n_target_real = 8;
    cfg.score_max = 40;
    cfg.delta = 41;
    cfg.seed = 11;
    Instance inst = generate_instance(cfg);

    DiversityConfig dc;
    dc.k = 1;
    dc.gap = 10;
    auto diverse = diverse_solutions(inst, 3, dc);
    SolveResult direct = minimize(inst, 3);
    REQUIRE(diverse.size() == 1);
    REQUIRE(direct.best);
    CHECK(diverse[0].record.mapping == direct.best->mapping);
    CHECK(diverse[0].record.cost == direct.best->cost);
    CHECK(diverse[0].achieved_distance == -1);
}

TEST_CASE("a unique feasible solution repeats and is flagged as duplicate")
{
    // one query fragment, one real target: a single feasible mapping
    Instance inst = make_instance(1, {}, 1, {}, {{5}}, 10);
    DiversityConfig dc;
    dc.k = 3;
    dc.gap = 100;
    auto diverse = diverse_solutions(inst, 1, dc);
    REQUIRE(diverse.size() == 3);
    std::set<std::vector<int>> distinct;
    for (const auto& d : diverse)
        distinct.insert(d.record.mapping);
    CHECK(distinct.size() == 1);
    CHECK(diverse[1].duplicate);
    CHECK(diverse[1].achieved_distance == 0);
    CHECK(diverse[2].duplicate);
}

TEST_CASE("achieved distances match the oracle maximum per iteration")
{
    SplitMix64 rng(808);
    int checked = 0;
    for (int round = 0; round < 20; ++round) {
        GeneratorConfig cfg;
        cfg.n_query = 3 + rng.below_int(4);
        cfg.n_target_real = cfg.n_query + rng.below_int(5);
        cfg.score_max = 20;
        cfg.delta = 21;
        cfg.seed = rng.next();
        Instance inst = generate_instance(cfg);
        const int nq = inst.query_size();
        int nlink = 1 + rng.below_int(nq);
        const int k = 4;
        const long gap = rng.below_int(15);

        DiversityConfig dc;
        dc.k = k;
        dc.gap = gap;
        auto diverse = diverse_solutions(inst, nlink, dc);
        if (diverse.empty())
            continue;

        auto feasible = oracle::solve(inst, nlink);
        const long cap = diverse[0].record.cost + gap;

        // replay the iterations against the solver's own archive
        std::vector<std::vector<int>> archive{diverse[0].record.mapping};
        long carry = 0;
        for (std::size_t i = 1; i < diverse.size(); ++i) {
            auto max_distance = oracle::max_accumulated_distance(feasible, cap, archive);
            REQUIRE(max_distance);
            long expected = std::min<long>(carry + *max_distance, nq + carry);
            CHECK(diverse[i].achieved_distance == expected);
            CHECK(diverse[i].record.cost <= cap);
            carry += diverse[i].achieved_distance;
            archive.push_back(diverse[i].record.mapping);
            ++checked;
        }

        // the archive's own entries always stay feasible within the gap, so
        // a feasible instance yields a full batch (possibly with repeats)
        CHECK(diverse.size() == static_cast<std::size_t>(k));
    }
    CHECK(checked > 10);
}

TEST_CASE("widened distance cap can pass the per-iteration ceiling")
{
    SplitMix64 rng(909);
    for (int round = 0; round < 6; ++round) {
        GeneratorConfig cfg;
        cfg.n_query = 4;
        cfg.n_target_real = 8;
        cfg.score_max = 10;
        cfg.delta = 11;
        cfg.seed = rng.next();
        Instance inst = generate_instance(cfg);

        DiversityConfig dc;
        dc.k = 4;
        dc.gap = 20;
        dc.widen_distance_cap = true;
        auto diverse = diverse_solutions(inst, 2, dc);
        if (diverse.empty())
            continue;

        auto feasible = oracle::solve(inst, 2);
        const long cap = diverse[0].record.cost + 20;
        std::vector<std::vector<int>> archive{diverse[0].record.mapping};
        long carry = 0;
        for (std::size_t i = 1; i < diverse.size(); ++i) {
            auto max_distance = oracle::max_accumulated_distance(feasible, cap, archive);
            REQUIRE(max_distance);
            long wide_cap = static_cast<long>(archive.size()) * inst.query_size() + carry;
            CHECK(diverse[i].achieved_distance == std::min(carry + *max_distance, wide_cap));
            carry += diverse[i].achieved_distance;
            archive.push_back(diverse[i].record.mapping);
        }
    }
}

TEST_CASE("every diverse solution stays within the gap and is feasible")
{
    GeneratorConfig cfg;
    cfg.n_query = 6;
    cfg.n_target_real = 12;
    cfg.score_max = 50;
    cfg.delta = 51;
    cfg.seed = 77;
    Instance inst = generate_instance(cfg);

    DiversityConfig dc;
    dc.k = 5;
    dc.gap_percent = 10;
    auto diverse = diverse_solutions(inst, 4, dc);
    REQUIRE(!diverse.empty());
    const long cap = diverse[0].record.cost + diverse[0].record.cost * 10 / 100;
    for (const auto& d : diverse) {
        long cost = 0;
        CHECK(oracle::is_feasible_mapping(inst, 4, d.record.mapping, &cost));
        CHECK(cost == d.record.cost);
        CHECK(d.record.cost <= cap);
        CHECK(d.hamming_to_first
              == hamming_distance(d.record.mapping, diverse[0].record.mapping));
    }
}

TEST_CASE("gap conversion from a percentage floors")
{
    CHECK(gap_from_percent(100, 10) == 10);
    CHECK(gap_from_percent(105, 10) == 10);
    CHECK(gap_from_percent(109, 10) == 10);
    CHECK(gap_from_percent(110, 10) == 11);
    CHECK(gap_from_percent(0, 10) == 0);
    CHECK(gap_from_percent(55, 0) == 0);
}
