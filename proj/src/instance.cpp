#include "fragmap/instance.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace fragmap {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& message)
{
    throw Error(ErrorKind::Invalid, message);
}

} // namespace

int manhattan_score(const Histogram& a, const Histogram& b)
{
    if (a.bins.size() != kHistogramBins || b.bins.size() != kHistogramBins)
        invalid("histogram must have exactly " + std::to_string(kHistogramBins) + " bins");
    long sum = 0;
    for (int k = 0; k < kHistogramBins; ++k)
        sum += std::abs(static_cast<long>(a.bins[k]) - static_cast<long>(b.bins[k]));
    return static_cast<int>(std::max(1L, sum));
}

FragmentTree::FragmentTree(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges))
{
    if (n_ < 1)
        invalid("fragment tree must have at least one node");
    for (auto& [a, b] : edges_) {
        if (a < 0 || a >= n_ || b < 0 || b >= n_)
            invalid("edge endpoint out of range");
        if (a == b)
            invalid("self-loop edge");
        if (a > b)
            std::swap(a, b);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        invalid("duplicate edge");
    if (static_cast<int>(edges_.size()) != n_ - 1)
        invalid("not a tree: a tree on " + std::to_string(n_) + " nodes has exactly "
                + std::to_string(n_ - 1) + " edges");

    adjacency_.assign(n_, {});
    for (const auto& [a, b] : edges_) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& nbrs : adjacency_)
        std::sort(nbrs.begin(), nbrs.end());

    // |E| = n-1 plus connectivity is equivalent to acyclicity; check
    // connectivity by traversal.
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adjacency_[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    if (count != n_)
        invalid("not a tree: graph is not connected");
}

bool FragmentTree::adjacent(int a, int b) const
{
    if (a == b)
        return false;
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

ScoreMatrix ScoreMatrix::from_real_cells(const std::vector<std::vector<int>>& real_cells)
{
    ScoreMatrix m;
    if (real_cells.empty())
        invalid("score matrix must have at least one row");
    const std::size_t width = real_cells[0].size();
    m.cells_.reserve(real_cells.size());
    for (const auto& row : real_cells) {
        if (row.size() != width)
            invalid("score matrix rows must all have the same length");
        std::vector<int> full;
        full.reserve(width + 1);
        full.push_back(0); // dummy target
        for (int score : row) {
            if (score < 1)
                invalid("score outside [1, max]: real target scores must be >= 1, got "
                        + std::to_string(score));
            full.push_back(score);
            m.max_score_ = std::max(m.max_score_, score);
        }
        m.cells_.push_back(std::move(full));
    }
    return m;
}

void Instance::validate() const
{
    const int nq = query_size();
    const int nt_real = target_real_size();
    if (scores.rows() != nq)
        invalid("score matrix has " + std::to_string(scores.rows()) + " rows but the query has "
                + std::to_string(nq) + " fragments");
    if (scores.cols() != nt_real + 1)
        invalid("score matrix has " + std::to_string(scores.cols() - 1)
                + " target columns but the target has " + std::to_string(nt_real) + " fragments");
    if (target_internal_size() < nq)
        invalid("target too small: dummy-extended target has " + std::to_string(target_internal_size())
                + " fragments, fewer than the query's " + std::to_string(nq));
    if (delta < 1)
        invalid("delta must be a positive integer");
    if (nlink && (*nlink < 1 || *nlink > nq))
        invalid("nlink must lie in [1, " + std::to_string(nq) + "]");

    std::vector<char> query_used(nq, 0);
    std::vector<char> target_used(nt_real, 0);
    for (const auto& [q, t] : fixed) {
        if (q < 0 || q >= nq)
            invalid("fixed association query index out of range");
        if (t < -1 || t >= nt_real)
            invalid("fixed association target index out of range");
        if (query_used[q])
            invalid("query fragment " + std::to_string(q) + " fixed more than once");
        query_used[q] = 1;
        if (t >= 0) {
            if (target_used[t])
                invalid("target fragment " + std::to_string(t) + " fixed more than once");
            target_used[t] = 1;
        }
    }
}

ScoreMatrix build_score_matrix(const std::vector<Histogram>& query_frags,
                               const std::vector<Histogram>& target_frags)
{
    if (query_frags.empty() || target_frags.empty())
        invalid("histogram lists must be non-empty");
    std::vector<std::vector<int>> cells(query_frags.size(),
                                        std::vector<int>(target_frags.size(), 0));
    for (std::size_t i = 0; i < query_frags.size(); ++i)
        for (std::size_t j = 0; j < target_frags.size(); ++j)
            cells[i][j] = manhattan_score(query_frags[i], target_frags[j]);
    return ScoreMatrix::from_real_cells(cells);
}

namespace {

std::vector<std::pair<int, int>> parse_edges(const ordered_json& j, const char* what)
{
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw Error(ErrorKind::Parse, std::string(what) + ": each edge must be a pair of node indices");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return edges;
}

FragmentTree parse_tree(const ordered_json& j, const char* what)
{
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw Error(ErrorKind::Parse, std::string(what) + ": expected {\"n\": int, \"edges\": [[i,j],...]}");
    return FragmentTree(j["n"].get<int>(), parse_edges(j["edges"], what));
}

} // namespace

Instance parse_instance(const std::string& text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    }
    catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, std::string("instance parse error: ") + ex.what());
    }

    try {
        if (!j.is_object() || !j.contains("version"))
            throw Error(ErrorKind::Parse, "instance file must be a JSON object with a \"version\" field");
        if (j["version"].get<int>() != 1)
            throw Error(ErrorKind::Parse, "unsupported instance file version");
        for (const char* key : {"query", "target", "scores", "delta"})
            if (!j.contains(key))
                throw Error(ErrorKind::Parse, std::string("missing required field \"") + key + "\"");

        Instance inst;
        inst.query = parse_tree(j["query"], "query");
        inst.target = parse_tree(j["target"], "target");
        inst.scores = ScoreMatrix::from_real_cells(j["scores"].get<std::vector<std::vector<int>>>());
        inst.delta = j["delta"].get<int>();
        if (j.contains("nlink"))
            inst.nlink = j["nlink"].get<int>();
        if (j.contains("fixed"))
            for (const auto& p : j["fixed"])
                inst.fixed.push_back({p.at(0).get<int>(), p.at(1).get<int>()});

        inst.validate();
        return inst;
    }
    catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, std::string("instance parse error: ") + ex.what());
    }
}

Instance load_instance(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst)
{
    ordered_json j;
    j["version"] = 1;

    auto tree_to_json = [](const FragmentTree& t) {
        ordered_json jt;
        jt["n"] = t.size();
        auto edges = ordered_json::array();
        for (const auto& [a, b] : t.edges())
            edges.push_back({a, b});
        jt["edges"] = edges;
        return jt;
    };
    j["query"] = tree_to_json(inst.query);
    j["target"] = tree_to_json(inst.target);

    auto scores = ordered_json::array();
    for (int r = 0; r < inst.scores.rows(); ++r) {
        const auto& row = inst.scores.row(r);
        scores.push_back(ordered_json(std::vector<int>(row.begin() + 1, row.end())));
    }
    j["scores"] = scores;
    j["delta"] = inst.delta;
    if (inst.nlink)
        j["nlink"] = *inst.nlink;
    if (!inst.fixed.empty()) {
        auto fixed = ordered_json::array();
        for (const auto& [q, t] : inst.fixed)
            fixed.push_back({q, t});
        j["fixed"] = fixed;
    }
    return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path)
{
    inst.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open file for writing: " + path);
    out << serialize_instance(inst);
    out.flush();
    if (!out)
        throw Error(ErrorKind::Io, "failed writing instance file: " + path);
}

std::vector<Histogram> load_histograms(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open histogram file: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    }
    catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, std::string("histogram parse error: ") + ex.what());
    }
    if (!j.is_array() || j.empty())
        throw Error(ErrorKind::Parse, "histogram file must be a non-empty JSON array");

    std::vector<std::pair<int, Histogram>> records;
    try {
        for (const auto& rec : j) {
            Histogram h;
            h.bins = rec.at("bins").get<std::vector<int>>();
            if (h.bins.size() != kHistogramBins)
                invalid("histogram must have exactly " + std::to_string(kHistogramBins) + " bins");
            for (int b : h.bins)
                if (b < 0)
                    invalid("histogram bins must be non-negative");
            records.emplace_back(rec.at("id").get<int>(), std::move(h));
        }
    }
    catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorKind::Parse, std::string("histogram parse error: ") + ex.what());
    }

    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Histogram> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].first != static_cast<int>(i))
            invalid("histogram ids must be exactly 0.." + std::to_string(records.size() - 1));
        out.push_back(std::move(records[i].second));
    }
    return out;
}

std::vector<std::pair<int, int>> pruefer_decode(int n, const std::vector<int>& sequence)
{
    if (n < 2 || static_cast<int>(sequence.size()) != n - 2)
        invalid("pruefer sequence must have length n - 2");
    for (int v : sequence)
        if (v < 0 || v >= n)
            invalid("pruefer sequence entry out of range");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);

    // Standard decode: repeatedly join the smallest remaining leaf to the
    // next sequence entry.
    std::vector<int> degree(n, 1);
    for (int v : sequence)
        ++degree[v];
    std::vector<char> used(n, 0);
    int leaf = 0;
    while (degree[leaf] != 1)
        ++leaf;
    int scan = leaf;
    for (int v : sequence) {
        edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
        used[leaf] = 1;
        if (--degree[v] == 1 && v < scan) {
            leaf = v;
        }
        else {
            while (scan < n && (used[scan] || degree[scan] != 1))
                ++scan;
            leaf = scan;
        }
    }
    int last = -1;
    for (int i = n - 1; i >= 0; --i) {
        if (!used[i] && i != leaf) {
            last = i;
            break;
        }
    }
    edges.emplace_back(std::min(leaf, last), std::max(leaf, last));
    return edges;
}

std::vector<std::pair<int, int>> random_tree_edges(int n, SplitMix64& rng)
{
    if (n < 1)
        invalid("tree size must be >= 1");
    if (n == 1)
        return {};
    if (n == 2)
        return {{0, 1}};
    std::vector<int> sequence(n - 2);
    for (int& v : sequence)
        v = rng.below_int(n);
    return pruefer_decode(n, sequence);
}

Instance generate_instance(const GeneratorConfig& cfg)
{
    if (cfg.n_query < 1)
        invalid("generator: n_query must be >= 1");
    if (cfg.n_target_real < cfg.n_query)
        invalid("generator: n_target_real must be >= n_query");
    if (cfg.score_max < 1)
        invalid("generator: score_max must be >= 1");
    if (cfg.delta < 1)
        invalid("generator: delta must be >= 1");

    SplitMix64 rng(cfg.seed);
    Instance inst;
    inst.query = FragmentTree(cfg.n_query, random_tree_edges(cfg.n_query, rng));
    inst.target = FragmentTree(cfg.n_target_real, random_tree_edges(cfg.n_target_real, rng));

    std::vector<std::vector<int>> cells(cfg.n_query, std::vector<int>(cfg.n_target_real, 0));
    for (auto& row : cells)
        for (int& cell : row)
            cell = 1 + rng.below_int(cfg.score_max);
    inst.scores = ScoreMatrix::from_real_cells(cells);
    inst.delta = cfg.delta;
    inst.validate();
    return inst;
}

} // namespace fragmap
