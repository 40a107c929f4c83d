#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fragmap/search.hpp"

namespace fragmap {

struct DiversityConfig {
    int k = 1;    // number of solutions requested (including the optimum)
    long gap = 0; // absolute cost slack allowed over the optimum
    // When set, overrides `gap` with floor(optimal_cost * pct / 100).
    std::optional<int> gap_percent;
    // The accumulated-distance variable is capped at n_query + carry, which
    // also caps one iteration's increment at n_query once the archive holds
    // several solutions; this flag widens the cap to |archive| * n_query +
    // carry instead.
    bool widen_distance_cap = false;
    SearchConfig search;
};

struct DiverseSolution {
    SolutionRecord record;
    long achieved_distance = -1; // value of the distance variable; -1 for the optimum
    int hamming_to_first = 0;
    bool duplicate = false; // same mapping as an earlier entry
};

int hamming_distance(std::span<const int> a, std::span<const int> b);

long gap_from_percent(long optimal_cost, int percent);

// Iterated generation of up to k maximally-diverse solutions within `gap`
// of the optimal cost: minimize first, then repeatedly rebuild the model
// with the cost cap, post the accumulated-Hamming-distance constraint
// against the archive, and maximize the distance variable. Stops early
// when an iteration proves no solution; an infeasible instance yields an
// empty list.
std::vector<DiverseSolution> diverse_solutions(const Instance& inst, int nlink,
                                               const DiversityConfig& cfg,
                                               const std::vector<FixedPair>& extra_fixed = {});

} // namespace fragmap
