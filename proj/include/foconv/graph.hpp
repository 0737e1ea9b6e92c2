#pragma once

// Finite simple graphs with optional unary labels and an optional root,
// JSON file I/O, and the random-bipartite machinery: seeded generators,
// sequence interlacing, the bipartite k-extension checker, and the
// triangle/pentagon gadget attachment that replaces part labels.
//
// Vertex ids are dense 0-based integers internally and 1-based in files.

#include <foconv/rational.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace foconv {

class Graph {
public:
    Graph() = default;

    Graph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges,
          std::map<std::string, std::vector<Vertex>> labels = {})
        : n_(n) {
        if (n < 0) throw std::invalid_argument("graph: negative vertex count");
        matrix_.assign(static_cast<std::size_t>(n) * n, 0);
        neighbors_.assign(n, {});
        for (auto [u, v] : edges) {
            check_vertex(u);
            check_vertex(v);
            if (u == v) throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u + 1));
            if (adjacent(u, v)) throw std::invalid_argument("graph: duplicate edge");
            matrix_[static_cast<std::size_t>(u) * n_ + v] = 1;
            matrix_[static_cast<std::size_t>(v) * n_ + u] = 1;
            neighbors_[u].push_back(v);
            neighbors_[v].push_back(u);
            ++edge_count_;
        }
        for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
        for (auto& [symbol, verts] : labels) {
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
            for (Vertex v : verts) check_vertex(v);
            labels_[symbol] = verts;
        }
    }

    int n() const { return n_; }
    int edge_count() const { return edge_count_; }

    bool adjacent(Vertex u, Vertex v) const {
        return matrix_[static_cast<std::size_t>(u) * n_ + v] != 0;
    }

    const std::vector<Vertex>& neighbors(Vertex v) const { return neighbors_[v]; }
    int degree(Vertex v) const {
        check_vertex(v);
        return static_cast<int>(neighbors_[v].size());
    }

    const std::map<std::string, std::vector<Vertex>>& labels() const { return labels_; }
    bool has_label(const std::string& symbol) const { return labels_.count(symbol) > 0; }

    const std::vector<Vertex>& label_vertices(const std::string& symbol) const {
        auto it = labels_.find(symbol);
        if (it == labels_.end()) throw std::invalid_argument("unknown label symbol: '" + symbol + "'");
        return it->second;
    }

    bool is_labeled(const std::string& symbol, Vertex v) const {
        const auto& verts = label_vertices(symbol);
        return std::binary_search(verts.begin(), verts.end(), v);
    }

    std::vector<std::pair<Vertex, Vertex>> edges() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        out.reserve(edge_count_);
        for (Vertex u = 0; u < n_; ++u)
            for (Vertex v : neighbors_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    void check_vertex(Vertex v) const {
        if (v < 0 || v >= n_)
            throw std::invalid_argument("vertex out of range: " + std::to_string(v + 1));
    }

private:
    int n_ = 0;
    int edge_count_ = 0;
    std::vector<char> matrix_;                          // O(1) adjacency
    std::vector<std::vector<Vertex>> neighbors_;        // sorted rows
    std::map<std::string, std::vector<Vertex>> labels_; // sorted vertex lists
};

struct RootedGraph {
    Graph graph;
    Vertex root = 0;

    RootedGraph(Graph g, Vertex r) : graph(std::move(g)), root(r) { graph.check_vertex(root); }
};

struct GraphSequence {
    std::vector<Graph> graphs;          // 1-based in reports, matching (G_n)
    std::string provenance;

    std::size_t size() const { return graphs.size(); }
    const Graph& at(std::size_t index1) const {
        if (index1 < 1 || index1 > graphs.size())
            throw std::invalid_argument("sequence index out of range");
        return graphs[index1 - 1];
    }
};

// ---------------------------------------------------------------------------
// Bipartite marking

inline bool is_bipartite_marked(const Graph& g, std::string* why = nullptr) {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    if (!g.has_label("A") || !g.has_label("B")) return fail("labels A and B required");
    const auto& a = g.label_vertices("A");
    const auto& b = g.label_vertices("B");
    if (static_cast<int>(a.size() + b.size()) != g.n()) return fail("labels A and B must partition the vertices");
    std::vector<char> in_a(g.n(), 0);
    for (Vertex v : a) in_a[v] = 1;
    for (Vertex v : b)
        if (in_a[v]) return fail("labels A and B overlap");
    for (auto [u, v] : g.edges())
        if (in_a[u] == in_a[v]) return fail("edge inside one part");
    return true;
}

inline void require_bipartite_marked(const Graph& g) {
    std::string why;
    if (!is_bipartite_marked(g, &why))
        throw std::invalid_argument("graph is not bipartite-marked: " + why);
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// platform-independent uniform draw in [0,1)
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Parts A of size n^2 and B of size n; every cross pair is an edge
// independently with probability p. Deterministic given the seed: pairs are
// scanned in (a, b) ascending order with one 53-bit draw each.
inline Graph gen_bipartite_random(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_bipartite_random: n must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gen_bipartite_random: p must lie in (0,1)");
    int na = n * n;
    int total = na + n;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex a = 0; a < na; ++a)
        for (Vertex b = na; b < total; ++b)
            if (detail::uniform01(rng) < p) edges.emplace_back(a, b);
    std::vector<Vertex> part_a(na), part_b(n);
    for (Vertex a = 0; a < na; ++a) part_a[a] = a;
    for (Vertex b = 0; b < n; ++b) part_b[b] = na + b;
    return Graph(total, edges, {{"A", part_a}, {"B", part_b}});
}

// H_1 = seq1[1], H_2 = seq2[1], H_3 = seq1[2], ... Odd indices come from
// seq1 while both sequences last; a longer remainder is appended.
inline GraphSequence interlace(const GraphSequence& seq1, const GraphSequence& seq2) {
    if (seq1.graphs.empty() || seq2.graphs.empty())
        throw std::invalid_argument("interlace: sequences must be nonempty");
    GraphSequence out;
    std::size_t i = 0, j = 0;
    while (i < seq1.graphs.size() && j < seq2.graphs.size()) {
        out.graphs.push_back(seq1.graphs[i++]);
        out.graphs.push_back(seq2.graphs[j++]);
    }
    while (i < seq1.graphs.size()) out.graphs.push_back(seq1.graphs[i++]);
    while (j < seq2.graphs.size()) out.graphs.push_back(seq2.graphs[j++]);
    out.provenance = "interlace(" + seq1.provenance + "; " + seq2.provenance + ")";
    return out;
}

// ---------------------------------------------------------------------------
// Bipartite k-extension property

struct ExtensionWitness {
    bool parts_swapped = false;          // false: X,Y in A and v sought in B
    std::vector<Vertex> x, y, z;
};

struct ExtensionCheck {
    bool satisfied = true;
    std::optional<ExtensionWitness> witness;
};

namespace detail {

// enumerates all subsets of `pool` of size exactly `size` via index combinations
template <typename Fn>
bool for_each_subset(const std::vector<Vertex>& pool, int size, Fn&& fn) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    if (size > static_cast<int>(pool.size())) return true;
    while (true) {
        std::vector<Vertex> subset(size);
        for (int i = 0; i < size; ++i) subset[i] = pool[idx[i]];
        if (!fn(subset)) return false;
        int i = size - 1;
        while (i >= 0 && idx[i] == static_cast<int>(pool.size()) - size + i) --i;
        if (i < 0) return true;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline bool extension_side(const Graph& g, int k, const std::vector<Vertex>& from,
                           const std::vector<Vertex>& to, bool swapped,
                           std::optional<ExtensionWitness>& witness) {
    // X, Y disjoint subsets of `from`; Z subset of `to`; |X|+|Y|+|Z| <= k-1;
    // require some v in to \ Z adjacent to all of X and none of Y.
    for (int sx = 0; sx <= k - 1; ++sx) {
        for (int sy = 0; sx + sy <= k - 1; ++sy) {
            for (int sz = 0; sx + sy + sz <= k - 1; ++sz) {
                bool ok = for_each_subset(from, sx, [&](const std::vector<Vertex>& x) {
                    std::vector<Vertex> rest;
                    for (Vertex v : from)
                        if (std::find(x.begin(), x.end(), v) == x.end()) rest.push_back(v);
                    return for_each_subset(rest, sy, [&](const std::vector<Vertex>& y) {
                        return for_each_subset(to, sz, [&](const std::vector<Vertex>& z) {
                            for (Vertex v : to) {
                                if (std::find(z.begin(), z.end(), v) != z.end()) continue;
                                bool good = true;
                                for (Vertex xv : x)
                                    if (!g.adjacent(v, xv)) { good = false; break; }
                                if (good)
                                    for (Vertex yv : y)
                                        if (g.adjacent(v, yv)) { good = false; break; }
                                if (good) return true;
                            }
                            witness = ExtensionWitness{swapped, x, y, z};
                            return false;
                        });
                    });
                });
                if (!ok) return false;
            }
        }
    }
    return true;
}

}  // namespace detail

// Brute-force check of the bipartite k-extension property.
inline ExtensionCheck check_bipartite_extension(const Graph& g, int k) {
    if (k < 1) throw std::invalid_argument("check_bipartite_extension: k must be >= 1");
    require_bipartite_marked(g);
    const auto& a = g.label_vertices("A");
    const auto& b = g.label_vertices("B");
    ExtensionCheck out;
    if (!detail::extension_side(g, k, a, b, false, out.witness) ||
        !detail::extension_side(g, k, b, a, true, out.witness)) {
        out.satisfied = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gadget attachment (unlabelling)

// Each B-vertex gains a triangle (2 fresh vertices), each A-vertex a pentagon
// (4 fresh vertices forming a path whose endpoints attach to it). Original
// edges are preserved, labels dropped. Gadgets are appended in ascending
// host-vertex order.
inline Graph attach_gadgets(const Graph& g) {
    require_bipartite_marked(g);
    auto edges = g.edges();
    int next = g.n();
    for (Vertex v = 0; v < g.n(); ++v) {
        if (g.is_labeled("B", v)) {
            int w1 = next++, w2 = next++;
            edges.emplace_back(v, w1);
            edges.emplace_back(v, w2);
            edges.emplace_back(w1, w2);
        } else {
            int z1 = next++, z2 = next++, z3 = next++, z4 = next++;
            edges.emplace_back(v, z1);
            edges.emplace_back(z1, z2);
            edges.emplace_back(z2, z3);
            edges.emplace_back(z3, z4);
            edges.emplace_back(z4, v);
        }
    }
    return Graph(next, edges);
}

// ---------------------------------------------------------------------------
// JSON I/O
//
// { "n": int, "edges": [[u,v],...] (1-based, u<v),
//   "labels": {"A":[...],"B":[...]} (optional), "root": int (optional) }

struct LoadedGraph {
    Graph graph;
    std::optional<Vertex> root;
};

inline nlohmann::ordered_json graph_to_json(const Graph& g, std::optional<Vertex> root = {}) {
    nlohmann::ordered_json j;
    j["n"] = g.n();
    auto edges = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u + 1, v + 1});
    j["edges"] = std::move(edges);
    if (!g.labels().empty()) {
        nlohmann::ordered_json labels;
        for (const auto& [symbol, verts] : g.labels()) {
            auto arr = nlohmann::ordered_json::array();
            for (Vertex v : verts) arr.push_back(v + 1);
            labels[symbol] = std::move(arr);
        }
        j["labels"] = std::move(labels);
    }
    if (root) j["root"] = *root + 1;
    return j;
}

inline LoadedGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n"))
        throw std::invalid_argument("graph json: expected an object with field 'n'");
    int n = j.at("n").get<int>();
    std::vector<std::pair<Vertex, Vertex>> edges;
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("graph json: each edge must be a pair");
            edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
        }
    }
    std::map<std::string, std::vector<Vertex>> labels;
    if (j.contains("labels")) {
        for (const auto& [symbol, arr] : j.at("labels").items()) {
            std::vector<Vertex> verts;
            for (const auto& v : arr) verts.push_back(v.get<int>() - 1);
            labels[symbol] = std::move(verts);
        }
    }
    LoadedGraph out{Graph(n, edges, std::move(labels)), {}};
    if (j.contains("root")) {
        Vertex r = j.at("root").get<int>() - 1;
        out.graph.check_vertex(r);
        out.root = r;
    }
    return out;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed json in " + path.string() + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
}

inline LoadedGraph load_graph(const std::filesystem::path& path) {
    try {
        return graph_from_json(read_json_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

inline void save_graph(const Graph& g, const std::filesystem::path& path,
                       std::optional<Vertex> root = {}) {
    write_text_file(path, graph_to_json(g, root).dump(2) + "\n");
}

// A sequence file is either a JSON array of graph objects or a directory of
// numbered .json files (sorted numerically when all stems are numbers).
inline GraphSequence load_sequence(const std::filesystem::path& path) {
    GraphSequence out;
    out.provenance = "file:" + path.string();
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        bool all_numeric = !files.empty();
        for (const auto& f : files) {
            const std::string stem = f.stem().string();
            if (stem.empty() || stem.find_first_not_of("0123456789") != std::string::npos)
                all_numeric = false;
        }
        std::sort(files.begin(), files.end(), [&](const auto& a, const auto& b) {
            if (all_numeric) return std::stol(a.stem().string()) < std::stol(b.stem().string());
            return a.filename() < b.filename();
        });
        for (const auto& f : files) out.graphs.push_back(load_graph(f).graph);
    } else {
        nlohmann::json j = read_json_file(path);
        if (!j.is_array()) throw std::invalid_argument(path.string() + ": expected a json array of graphs");
        for (const auto& item : j) out.graphs.push_back(graph_from_json(item).graph);
    }
    if (out.graphs.empty()) throw std::invalid_argument(path.string() + ": empty graph sequence");
    return out;
}

inline nlohmann::ordered_json sequence_to_json(const GraphSequence& seq) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& g : seq.graphs) arr.push_back(graph_to_json(g));
    return arr;
}

inline void save_sequence(const GraphSequence& seq, const std::filesystem::path& path) {
    write_text_file(path, sequence_to_json(seq).dump(2) + "\n");
}

}  // namespace foconv
