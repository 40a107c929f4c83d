#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fragmap/instance.hpp"

// Exhaustive reference solver used by tests and by the hidden `oracle`
// CLI subcommand. It shares only the Instance type with the main solver:
// connectivity, feasibility and diversity are re-derived from scratch, so
// its answers are an independent check. Exponential by design; guarded to
// small queries.
namespace fragmap::oracle {

inline constexpr int kMaxQuerySize = 12;

struct OracleSolution {
    std::vector<int> mapping; // file target index per query fragment, -1 = unmapped
    long cost = 0;

    bool operator==(const OracleSolution&) const = default;
};

// Every feasible mapping at the given nlink, sorted by (cost, mapping).
using FeasibleSet = std::vector<OracleSolution>;

// All node subsets of the given size that induce a connected subgraph,
// each exactly once, in a deterministic order.
std::vector<std::vector<int>> enumerate_connected_subsets(const FragmentTree& tree, int size);

FeasibleSet solve(const Instance& inst, int nlink);

std::optional<long> optimal_cost(const Instance& inst, int nlink);

// Model-independent feasibility check of a mapping (connectivity by
// traversal, injectivity, edge preservation, threshold, exactly nlink
// mapped fragments). Writes the recomputed cost through cost_out.
bool is_feasible_mapping(const Instance& inst, int nlink, std::span<const int> mapping,
                         long* cost_out = nullptr);

int hamming_distance(std::span<const int> a, std::span<const int> b);

// Greedy diverse replay: the cost optimum first (ties: lexicographically
// smallest mapping), then up to k-1 in-gap solutions maximizing the
// accumulated Hamming distance to the archive.
std::vector<OracleSolution> diverse(const Instance& inst, int nlink, int k, long gap);

// Max over feasible solutions with cost <= cost_cap of the summed Hamming
// distance to the archive entries; nullopt when none qualifies.
std::optional<long> max_accumulated_distance(const FeasibleSet& feasible, long cost_cap,
                                             const std::vector<std::vector<int>>& archive);

} // namespace fragmap::oracle
