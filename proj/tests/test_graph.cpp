#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

using namespace foconv;
using testsupport::complete_bipartite_marked;
using testsupport::complete_graph;
using testsupport::star_graph;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("graph invariants are enforced", "[graph]") {
    REQUIRE_THROWS_AS(Graph(2, {{0, 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(Graph(2, {{0, 2}}), std::invalid_argument);
    REQUIRE_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(Graph(2, {}, {{"A", {5}}}), std::invalid_argument);
    Graph g(3, {{0, 1}, {1, 2}});
    REQUIRE(g.adjacent(0, 1));
    REQUIRE(g.adjacent(1, 0));
    REQUIRE_FALSE(g.adjacent(0, 2));
    REQUIRE(g.degree(1) == 2);
}

TEST_CASE("star degrees", "[graph]") {
    Graph star = star_graph(3);
    REQUIRE(star.degree(0) == 3);
    REQUIRE(star.degree(1) == 1);
}

TEST_CASE("generated bipartite graphs have exact part sizes and cross edges", "[graph]") {
    Graph g = gen_bipartite_random(2, 0.5, 42);
    REQUIRE(g.label_vertices("A").size() == 4);
    REQUIRE(g.label_vertices("B").size() == 2);
    REQUIRE(g.n() == 6);
    for (auto [u, v] : g.edges()) {
        REQUIRE(g.is_labeled("A", u));
        REQUIRE(g.is_labeled("B", v));
    }
    REQUIRE(is_bipartite_marked(g));
    REQUIRE_THROWS_AS(gen_bipartite_random(2, 0.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(gen_bipartite_random(2, 1.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(gen_bipartite_random(0, 0.5, 1), std::invalid_argument);
}

TEST_CASE("generation is deterministic in the seed", "[graph]") {
    Graph a = gen_bipartite_random(3, 0.5, 7);
    Graph b = gen_bipartite_random(3, 0.5, 7);
    Graph c = gen_bipartite_random(3, 0.5, 8);
    REQUIRE(a.edges() == b.edges());
    REQUIRE(a.edges() != c.edges());
}

TEST_CASE("edge counts concentrate around the binomial mean", "[graph]") {
    // n=3, p=0.5: 27 cross pairs, mean 13.5, sd ~2.6; the mean over 1000
    // seeds stays within 3 sigma of the binomial mean.
    double total = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
        total += gen_bipartite_random(3, 0.5, seed).edge_count();
    double mean = total / 1000.0;
    double sigma = std::sqrt(27 * 0.25 / 1000.0);
    REQUIRE(std::abs(mean - 13.5) <= 3 * sigma);
}

TEST_CASE("interlace alternates starting from the first sequence", "[graph]") {
    Graph g1 = complete_graph(1), g2 = complete_graph(2), g3 = complete_graph(3),
          g4 = complete_graph(4);
    GraphSequence a{{g1, g3}, "a"};
    GraphSequence b{{g2, g4}, "b"};
    GraphSequence h = interlace(a, b);
    REQUIRE(h.graphs.size() == 4);
    REQUIRE(h.graphs[0].n() == 1);
    REQUIRE(h.graphs[1].n() == 2);
    REQUIRE(h.graphs[2].n() == 3);
    REQUIRE(h.graphs[3].n() == 4);
    // odd (1-based) indices come from the first sequence
    for (std::size_t i = 0; i < h.graphs.size(); ++i)
        REQUIRE(h.graphs[i].n() % 2 == static_cast<int>((i + 1) % 2));

    GraphSequence single{{g1}, "s"};
    GraphSequence pair = interlace(single, single);
    REQUIRE(pair.graphs.size() == 2);
    REQUIRE_THROWS_AS(interlace(GraphSequence{}, single), std::invalid_argument);
}

TEST_CASE("bipartite extension property at k=1 needs both parts inhabited", "[graph]") {
    REQUIRE(check_bipartite_extension(complete_bipartite_marked(1, 1), 1).satisfied);
    Graph only_a(1, {}, {{"A", {0}}, {"B", {}}});
    REQUIRE_FALSE(check_bipartite_extension(only_a, 1).satisfied);
}

TEST_CASE("K_{2,2} fails k=2 with a non-adjacency witness", "[graph]") {
    ExtensionCheck check = check_bipartite_extension(complete_bipartite_marked(2, 2), 2);
    REQUIRE_FALSE(check.satisfied);
    REQUIRE(check.witness.has_value());
    // every vertex of the opposite part is adjacent to the Y-demand vertex
    REQUIRE(check.witness->y.size() == 1);
    REQUIRE(check.witness->x.empty());
}

TEST_CASE("edgeless bipartite graph fails k=2 with an adjacency witness", "[graph]") {
    Graph g(4, {}, {{"A", {0, 1}}, {"B", {2, 3}}});
    ExtensionCheck check = check_bipartite_extension(g, 2);
    REQUIRE_FALSE(check.satisfied);
    REQUIRE(check.witness.has_value());
    REQUIRE(check.witness->x.size() == 1);
}

TEST_CASE("extension property is monotone in k", "[graph]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = gen_bipartite_random(3, 0.5, rng());
        bool previous = true;
        for (int k = 1; k <= 3; ++k) {
            bool now = check_bipartite_extension(g, k).satisfied;
            if (!previous) REQUIRE_FALSE(now);
            previous = now;
        }
    }
    REQUIRE_THROWS_AS(check_bipartite_extension(complete_graph(3), 1), std::invalid_argument);
}

TEST_CASE("gadget attachment sizes and shapes", "[graph]") {
    Graph one_b(1, {}, {{"A", {}}, {"B", {0}}});
    Graph triangle = attach_gadgets(one_b);
    REQUIRE(triangle.n() == 3);
    REQUIRE(triangle.edge_count() == 3);
    for (Vertex v = 0; v < 3; ++v) REQUIRE(triangle.degree(v) == 2);

    Graph one_a(1, {}, {{"A", {0}}, {"B", {}}});
    Graph pentagon = attach_gadgets(one_a);
    REQUIRE(pentagon.n() == 5);
    REQUIRE(pentagon.edge_count() == 5);
    for (Vertex v = 0; v < 5; ++v) REQUIRE(pentagon.degree(v) == 2);
    REQUIRE(pentagon.labels().empty());
}

TEST_CASE("gadget attachment preserves the original graph", "[graph]") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = gen_bipartite_random(2, 0.4, rng());
        Graph out = attach_gadgets(g);
        int na = static_cast<int>(g.label_vertices("A").size());
        int nb = static_cast<int>(g.label_vertices("B").size());
        REQUIRE(out.n() == g.n() + 2 * nb + 4 * na);
        for (Vertex u = 0; u < g.n(); ++u)
            for (Vertex v = 0; v < g.n(); ++v)
                REQUIRE(out.adjacent(u, v) == g.adjacent(u, v));
    }
}

TEST_CASE("graph files round-trip", "[graph]") {
    Graph k3 = complete_graph(3);
    auto path = temp_file("foconv_test_k3.json");
    save_graph(k3, path);
    LoadedGraph loaded = load_graph(path);
    REQUIRE(loaded.graph.n() == 3);
    REQUIRE(loaded.graph.edges() == k3.edges());
    REQUIRE_FALSE(loaded.root.has_value());

    save_graph(k3, path, 1);
    REQUIRE(load_graph(path).root == 1);

    Graph labeled = complete_bipartite_marked(2, 1);
    save_graph(labeled, path);
    Graph back = load_graph(path).graph;
    REQUIRE(back.label_vertices("A") == labeled.label_vertices("A"));
    REQUIRE(back.label_vertices("B") == labeled.label_vertices("B"));
    std::filesystem::remove(path);
}

TEST_CASE("malformed graph files are rejected", "[graph]") {
    auto path = temp_file("foconv_test_bad.json");
    write_text_file(path, R"({"n": 2, "edges": [[1, 1]]})");
    REQUIRE_THROWS_AS(load_graph(path), std::invalid_argument);
    write_text_file(path, R"({"n": 2, "edges": [[1, 5]]})");
    REQUIRE_THROWS_AS(load_graph(path), std::invalid_argument);
    write_text_file(path, R"({"n": 2, "edges": [[1, 2]], "root": 7})");
    REQUIRE_THROWS_AS(load_graph(path), std::invalid_argument);
    write_text_file(path, "{not json");
    REQUIRE_THROWS(load_graph(path));
    std::filesystem::remove(path);
}

TEST_CASE("sequence files round-trip as arrays and directories", "[graph]") {
    GraphSequence seq{{complete_graph(2), complete_graph(3)}, "test"};
    auto path = temp_file("foconv_test_seq.json");
    save_sequence(seq, path);
    GraphSequence loaded = load_sequence(path);
    REQUIRE(loaded.graphs.size() == 2);
    REQUIRE(loaded.graphs[1].edge_count() == 3);
    std::filesystem::remove(path);

    auto dir = temp_file("foconv_test_seq_dir");
    std::filesystem::create_directories(dir);
    save_graph(complete_graph(4), dir / "2.json");
    save_graph(complete_graph(2), dir / "1.json");
    save_graph(complete_graph(5), dir / "10.json");
    GraphSequence from_dir = load_sequence(dir);
    REQUIRE(from_dir.graphs.size() == 3);
    REQUIRE(from_dir.graphs[0].n() == 2);
    REQUIRE(from_dir.graphs[1].n() == 4);
    REQUIRE(from_dir.graphs[2].n() == 5);   // numeric order, not lexicographic
    std::filesystem::remove_all(dir);
}

TEST_CASE("degree concentration across seeds", "[graph]") {
    // fraction of B-vertices with |deg/n^2 - p| > 3*sqrt(p(1-p))/n stays
    // below 5% over 100 seeds at n=8, p=0.5
    const int n = 8;
    const double p = 0.5;
    const double bound = 3.0 * std::sqrt(p * (1 - p)) / n;
    int violations = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Graph g = gen_bipartite_random(n, p, seed);
        for (Vertex b : g.label_vertices("B")) {
            double proportion = static_cast<double>(g.degree(b)) / (n * n);
            if (std::abs(proportion - p) > bound) ++violations;
            ++total;
        }
    }
    REQUIRE(total == 800);
    REQUIRE(violations < total / 20);
}
