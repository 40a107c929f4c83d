#pragma once

#include <optional>
#include <vector>

#include "fragmap/engine.hpp"
#include "fragmap/instance.hpp"

namespace fragmap {

// The decision variables of one problem. Assignment variables hold
// internal target indices (0 = dummy); score variables channel the
// matrix row of their fragment; dummy_count is pinned to n_query - nlink
// and cost_var is the minimization objective.
struct ModelVariables {
    std::vector<VarId> assignment; // one per query fragment
    std::vector<VarId> row_score;  // one per query fragment
    VarId dummy_count = -1;
    VarId cost_var = -1;
};

struct BuildOptions {
    int nlink = 1;
    bool strong_alldiff = false;
    // Inclusive cap applied to the cost variable's initial domain.
    std::optional<long> cost_upper_bound;
    // Fixed associations applied on top of the instance's own list.
    std::vector<FixedPair> extra_fixed;
};

struct BuiltModel {
    Network net;
    ModelVariables vars;
};

// Interior nodes of the unique tree path between two distinct nodes,
// ordered from `from` towards `to` (empty for adjacent nodes).
std::vector<int> tree_path(const FragmentTree& tree, int from, int to);

// Translates an instance into a constraint network. Throws Error{Invalid}
// for structurally bad inputs (nlink out of range, fixed association in
// conflict with the threshold); an instance that is merely unsatisfiable
// is reported through propagation, not an exception.
BuiltModel build_network(const Instance& inst, const BuildOptions& opts);

struct DecodedSolution {
    // Per query fragment: real target file index, or -1 when unmapped.
    std::vector<int> mapping;
    long cost = 0;
};

// Reads a fully assigned network back into file-index form and
// cross-checks the cost against the score matrix.
DecodedSolution decode_solution(const Instance& inst, const ModelVariables& vars,
                                const Network& net);

// internal index <-> file index helpers for the dummy-column shift
inline int to_internal_target(int file_index) { return file_index < 0 ? 0 : file_index + 1; }
inline int to_file_target(int internal_index) { return internal_index == 0 ? -1 : internal_index - 1; }

} // namespace fragmap
