#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fragmap/error.hpp"
#include "fragmap/rng.hpp"

namespace fragmap {

inline constexpr int kHistogramBins = 32;

// Shape signature of one fragment: 32 non-negative bin heights.
struct Histogram {
    std::vector<int> bins;
};

// Manhattan distance between two 32-bin histograms, clamped to >= 1 so
// that a zero score remains reserved for the dummy target.
int manhattan_score(const Histogram& a, const Histogram& b);

// An undirected, connected, acyclic graph of molecule fragments.
// Node indices are exactly 0..n-1; edges are stored normalized
// ((min,max), sorted, no duplicates).
class FragmentTree {
public:
    FragmentTree() = default;
    FragmentTree(int n, std::vector<std::pair<int, int>> edges);

    int size() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }
    bool adjacent(int a, int b) const;

    bool operator==(const FragmentTree& other) const
    {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_ = 1;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_{{}};
};

// Integer dissimilarity scores between query fragments (rows) and target
// fragments (columns). Column 0 is the dummy target and is always zero;
// real columns 1..n_t hold scores >= 1. Files store only the real
// columns; the dummy column is an internal concern.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    static ScoreMatrix from_real_cells(const std::vector<std::vector<int>>& real_cells);

    int rows() const { return static_cast<int>(cells_.size()); }
    int cols() const { return cells_.empty() ? 0 : static_cast<int>(cells_[0].size()); }
    int at(int row, int col) const { return cells_[row][col]; }
    int max_score() const { return max_score_; }
    const std::vector<int>& row(int r) const { return cells_[r]; }

    bool operator==(const ScoreMatrix& other) const { return cells_ == other.cells_; }

private:
    std::vector<std::vector<int>> cells_; // includes the dummy column
    int max_score_ = 0;
};

// A manually fixed association: query fragment -> real target fragment
// (file index), or -1 for the dummy target.
struct FixedPair {
    int query = 0;
    int target = -1;

    bool operator==(const FixedPair&) const = default;
};

// A complete problem: two fragment trees, the score matrix, the score
// threshold, and optional defaults for nlink and fixed associations.
struct Instance {
    FragmentTree query;
    FragmentTree target; // real fragments only; the dummy is added internally
    ScoreMatrix scores;  // dummy column present
    int delta = 1;
    std::optional<int> nlink;
    std::vector<FixedPair> fixed;

    int query_size() const { return query.size(); }
    int target_real_size() const { return target.size(); }
    int target_internal_size() const { return target.size() + 1; }

    // Throws Error{Invalid} naming the first violated invariant.
    void validate() const;

    bool operator==(const Instance&) const = default;
};

ScoreMatrix build_score_matrix(const std::vector<Histogram>& query_frags,
                               const std::vector<Histogram>& target_frags);

// Instance file format: a single JSON document, canonical on write
// (load(save(x)) == x and identical instances serialize to identical
// bytes). See README for the schema.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Histogram file format: JSON list of {"id": int, "bins": [32 ints]}
// records with ids covering 0..n-1.
std::vector<Histogram> load_histograms(const std::string& path);

struct GeneratorConfig {
    int n_query = 1;
    int n_target_real = 1;
    int score_max = 1;
    int delta = 1;
    std::uint64_t seed = 0;
};

// Deterministic benchmark instance: uniform random labeled trees for the
// query and target, score cells uniform in [1, score_max]. Draw order is
// query tree, target tree, then scores row-major.
Instance generate_instance(const GeneratorConfig& cfg);

// Decodes a Pruefer sequence (length n-2, entries in [0, n)) into the
// edge list of the labeled tree it denotes.
std::vector<std::pair<int, int>> pruefer_decode(int n, const std::vector<int>& sequence);

// Uniform random labeled tree on n nodes via a random Pruefer sequence.
std::vector<std::pair<int, int>> random_tree_edges(int n, SplitMix64& rng);

} // namespace fragmap
