#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace foconv;
using testsupport::complete_graph;
using testsupport::path_graph;
using testsupport::permute_graph;
using testsupport::random_graph;
using testsupport::random_permutation;
using testsupport::star_graph;

namespace {

GraphSequence constant_sequence(const Graph& g, int copies) {
    GraphSequence out;
    for (int i = 0; i < copies; ++i) out.graphs.push_back(g);
    out.provenance = "constant";
    return out;
}

GraphSequence star_sequence(int from, int to) {
    GraphSequence out;
    for (int m = from; m <= to; ++m) out.graphs.push_back(star_graph(m));
    out.provenance = "stars";
    return out;
}

const char* kCenter = "exists y. exists z. (y != z & x ~ y & x ~ z)";

}  // namespace

TEST_CASE("order_roots on the path", "[rooting]") {
    Graph p3 = path_graph(3);
    RootOrdering ordering = order_roots(p3, parse_formula("x = x"), parse_formula("x ~ root"));
    REQUIRE(ordering.vertices == std::vector<Vertex>{1, 0, 2});
    REQUIRE(ordering.values ==
            std::vector<Rational>{Rational(2, 3), Rational(1, 3), Rational(1, 3)});

    RootOrdering reversed =
        order_roots(p3, parse_formula("x = x"), parse_formula("x ~ root"), TieBreak::DescendingId);
    REQUIRE(reversed.vertices == std::vector<Vertex>{1, 2, 0});
}

TEST_CASE("order_roots edge cases", "[rooting]") {
    Graph p3 = path_graph(3);
    RootOrdering single = order_roots(p3, parse_formula(kCenter), parse_formula("x ~ root"));
    REQUIRE(single.vertices == std::vector<Vertex>{1});
    REQUIRE(single.values == std::vector<Rational>{Rational(2, 3)});

    RootOrdering zeros = order_roots(p3, parse_formula("x = x"), parse_formula("x ~ x"));
    REQUIRE(zeros.vertices == std::vector<Vertex>{0, 1, 2});
    for (const auto& v : zeros.values) REQUIRE(v == 0);

    REQUIRE_THROWS_AS(order_roots(p3, parse_formula("x != x"), parse_formula("x ~ root")),
                      std::runtime_error);
    REQUIRE_THROWS_AS(order_roots(p3, parse_formula("x = x"), parse_formula("exists x. x ~ root")),
                      std::invalid_argument);
}

TEST_CASE("ordering values equal rooted stone pairings", "[rooting]") {
    std::mt19937_64 rng(12);
    testsupport::FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.allow_root = true;
    opt.free_pool = {"x"};
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 2, 6), 0.5);
        Formula phi = testsupport::random_formula_with_arity(rng, opt, 1, true);
        RootOrdering ordering = order_roots(g, parse_formula("x = x"), phi);
        for (std::size_t i = 0; i < ordering.vertices.size(); ++i)
            REQUIRE(ordering.values[i] ==
                    stone_pairing(RootedGraph(g, ordering.vertices[i]), phi).value);
        // sorted value vector is isomorphism invariant
        Graph h = permute_graph(g, random_permutation(rng, g.n()));
        REQUIRE(order_roots(h, parse_formula("x = x"), phi).values == ordering.values);
    }
}

TEST_CASE("root_single on a constant sequence converges with zero deltas", "[rooting]") {
    GraphSequence seq = constant_sequence(path_graph(3), 6);
    RootSingleResult result =
        root_single(seq, parse_formula("x = x"), parse_formula("x ~ root"), 1);
    REQUIRE(result.roots == std::vector<Vertex>(6, 1));
    for (const auto& d : result.report.deltas) REQUIRE(d == 0);
    REQUIRE(result.report.verdict == Verdict::Converging);
}

TEST_CASE("root_single on the star sequence approaches one", "[rooting]") {
    GraphSequence seq = star_sequence(2, 20);
    RootSingleResult result = root_single(seq, parse_formula(kCenter), parse_formula("x ~ root"), 1);
    for (std::size_t n = 0; n < seq.graphs.size(); ++n) {
        int m = static_cast<int>(n) + 2;
        REQUIRE(result.roots[n] == 0);
        REQUIRE(result.report.values[n][0] == Rational(m, m + 1));
    }
    REQUIRE(result.report.verdict == Verdict::Converging);
}

TEST_CASE("root_single index selection and errors", "[rooting]") {
    GraphSequence seq = constant_sequence(path_graph(3), 4);
    RootSingleResult second =
        root_single(seq, parse_formula("x = x"), parse_formula("x ~ root"), 2);
    REQUIRE(second.roots == std::vector<Vertex>(4, 0));
    REQUIRE_THROWS_AS(root_single(seq, parse_formula("x = x"), parse_formula("x ~ root"), 4),
                      std::invalid_argument);

    GraphSequence mixed{{path_graph(3), path_graph(4)}, ""};
    REQUIRE_THROWS_AS(root_single(mixed, parse_formula("x = x"), parse_formula("x ~ root"), 1),
                      std::runtime_error);
    REQUIRE_NOTHROW(root_single(mixed, parse_formula("x = x"), parse_formula("x ~ root"), 1,
                                ConvergenceParams{}, false));

    GraphSequence has_empty{{path_graph(3), path_graph(3)}, ""};
    REQUIRE_THROWS_AS(root_single(has_empty, parse_formula("A(x)"), parse_formula("x ~ root"), 1),
                      std::invalid_argument);
}

TEST_CASE("root_single sentence dichotomy", "[rooting]") {
    // phi: the root has at least two neighbors; on stars with xi = center,
    // the all-roots-satisfy sentence stabilizes
    Formula phi = parse_formula("exists u. exists v. (u != v & u ~ root & v ~ root)");
    REQUIRE(phi.arity() == 0);
    GraphSequence seq = star_sequence(2, 8);
    RootSingleResult result = root_single(seq, parse_formula(kCenter), phi, 1);
    REQUIRE(result.stabilized_sentence == 1);
    REQUIRE(result.report.verdict == Verdict::Converging);

    RootSingleResult negated = root_single(seq, parse_formula(kCenter), Formula::negate(phi), 1);
    REQUIRE(negated.stabilized_sentence == 2);
}

TEST_CASE("choose_I picks inclusion-maximal index sets", "[rooting]") {
    // vertices 0..3; candidates are all; phi1 positive only when rooted at 0,
    // phi2 positive only when rooted at 1
    Graph g(4, {{0, 2}, {1, 3}}, {{"A", {0}}, {"B", {1}}});
    GraphSequence seq = constant_sequence(g, 3);
    Formula xi = parse_formula("x = x");
    Formula phi1 = parse_formula("x ~ root & A(root)");
    Formula phi2 = parse_formula("x ~ root & B(root)");

    ChooseIResult both = choose_I(seq, xi, {phi1, phi2});
    REQUIRE(both.indices == std::vector<int>{1});   // ties by size then id -> vertex 0
    REQUIRE(both.chosen_vertex == 0);
    for (const auto& w : both.witnesses) REQUIRE(w == 0);

    ChooseIResult none = choose_I(seq, xi, {parse_formula("x ~ root & x != x")});
    REQUIRE(none.indices.empty());

    ChooseIResult single = choose_I(seq, xi, {phi2});
    REQUIRE(single.indices == std::vector<int>{1});
    REQUIRE(single.chosen_vertex == 1);

    REQUIRE_THROWS_AS(choose_I(seq, xi, {parse_formula("exists x. x ~ root")}),
                      std::invalid_argument);
}

TEST_CASE("choose_I prefers supersets over subsets", "[rooting]") {
    // at vertex 0 both formulas are positive, at vertex 1 only the first
    Graph g(4, {{0, 2}, {0, 3}, {1, 2}}, {{"D", {3}}});
    GraphSequence seq = constant_sequence(g, 2);
    Formula phi1 = parse_formula("x ~ root");
    Formula phi2 = parse_formula("x ~ root & D(x)");
    ChooseIResult result = choose_I(seq, parse_formula("x = x"), {phi1, phi2});
    REQUIRE(result.indices == std::vector<int>{1, 2});
    REQUIRE(result.chosen_vertex == 0);
}

TEST_CASE("find_exponents separates product tuples", "[rooting]") {
    REQUIRE(find_exponents({{Rational(1, 2)}}) == std::vector<int>{1});
    REQUIRE(find_exponents({{Rational(1, 2)}, {Rational(1, 2), Rational(1, 3)}}) ==
            std::vector<int>{1, 1});
    // 1/2 * 1/4 collides with 1/4 * 1/2, forcing e = (1, 2)
    std::vector<std::vector<Rational>> colliding{{Rational(1, 2), Rational(1, 4)},
                                                 {Rational(1, 2), Rational(1, 4)}};
    REQUIRE(find_exponents(colliding) == std::vector<int>{1, 2});
    // distinct-products instance passes with (1, 1)
    REQUIRE(find_exponents({{Rational(1, 2), Rational(1, 4)},
                            {Rational(1, 4), Rational(1, 16)}}) == std::vector<int>{1, 1});

    REQUIRE_THROWS_AS(find_exponents({{Rational(0)}}), std::invalid_argument);
    REQUIRE_THROWS_AS(find_exponents({{Rational(1, 2), Rational(1, 4)},
                                      {Rational(1, 2), Rational(1, 4)}},
                                     Rational(0), 1),
                      std::runtime_error);
}

TEST_CASE("exponent postcondition is assertable", "[rooting]") {
    std::vector<std::vector<Rational>> sets{{Rational(1, 2), Rational(1, 3)},
                                            {Rational(1, 2), Rational(2, 3)}};
    std::vector<int> e = find_exponents(sets);
    std::vector<Rational> products;
    for (const auto& a : sets[0])
        for (const auto& b : sets[1])
            products.push_back(rational_pow(a, e[0]) * rational_pow(b, e[1]));
    std::sort(products.begin(), products.end());
    for (std::size_t i = 0; i + 1 < products.size(); ++i)
        REQUIRE(products[i] != products[i + 1]);
}

TEST_CASE("ordering is invariant under positive powers", "[rooting]") {
    std::mt19937_64 rng(2718);
    testsupport::FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.allow_root = true;
    opt.free_pool = {"x"};
    Formula everything = parse_formula("x = x");
    for (int trial = 0; trial < 15; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 2, 6), 0.5);
        Formula phi = testsupport::random_formula_with_arity(rng, opt, 1, true);
        for (int e = 2; e <= 3; ++e) {
            Formula powered = build_power_conj({phi}, {e});
            RootOrdering base = order_roots(g, everything, phi);
            RootOrdering lifted = order_roots(g, everything, powered);
            REQUIRE(lifted.vertices == base.vertices);
            for (std::size_t i = 0; i < base.values.size(); ++i)
                REQUIRE(lifted.values[i] ==
                        rational_pow(base.values[i], static_cast<unsigned>(e)));
        }
    }
}

TEST_CASE("root_multi reduces to root_single for one formula", "[rooting]") {
    GraphSequence seq = star_sequence(2, 10);
    Formula xi = parse_formula(kCenter);
    Formula phi = parse_formula("x ~ root");
    RootMultiResult multi = root_multi(seq, xi, {phi});
    RootSingleResult single = root_single(seq, xi, phi, 1);
    REQUIRE(multi.roots == single.roots);   // argmax invariance under positive powers
    REQUIRE(multi.I == std::vector<int>{1});
    REQUIRE(multi.formula_reports.size() == 1);
    REQUIRE(multi.formula_reports[0].verdict == Verdict::Converging);
    REQUIRE_FALSE(multi.expected_zero[0]);
}

TEST_CASE("root_multi factorization on a constant sequence", "[rooting]") {
    Graph g(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
    GraphSequence seq = constant_sequence(g, 4);
    Formula xi = parse_formula("x = x");
    Formula phi1 = parse_formula("x ~ root");
    Formula phi2 = parse_formula("exists u. (u ~ root & u ~ x)");
    RootMultiResult multi = root_multi(seq, xi, {phi1, phi2});
    REQUIRE(multi.I == std::vector<int>{1, 2});
    REQUIRE(multi.psi.has_value());
    RootedGraph rooted(g, multi.roots.front());
    Rational expected = 1;
    std::vector<Formula> phis{phi1, phi2};
    for (std::size_t i = 0; i < multi.I.size(); ++i)
        expected *= rational_pow(stone_pairing(rooted, phis[multi.I[i] - 1]).value,
                                 static_cast<unsigned>(multi.exponents[i]));
    REQUIRE(stone_pairing(rooted, *multi.psi).value == expected);
}

TEST_CASE("root_multi reports zero limits outside I", "[rooting]") {
    // phi1 positive only at vertex 0, phi2 positive only at vertex 1; the
    // chosen root maximizes phi1, so phi2 stays at zero along the roots
    Graph g(4, {{0, 2}, {0, 3}, {1, 3}}, {{"A", {0}}, {"B", {1}}});
    GraphSequence seq = constant_sequence(g, 4);
    Formula phi1 = parse_formula("x ~ root & A(root)");
    Formula phi2 = parse_formula("x ~ root & B(root)");
    RootMultiResult multi = root_multi(seq, parse_formula("x = x"), {phi1, phi2});
    REQUIRE(multi.I == std::vector<int>{1});
    REQUIRE(multi.expected_zero == std::vector<bool>{false, true});
    for (const auto& row : multi.formula_reports[1].values) REQUIRE(row[0] == 0);
}

TEST_CASE("root_multi with empty I picks arbitrary roots", "[rooting]") {
    Graph g(3, {});
    GraphSequence seq = constant_sequence(g, 3);
    RootMultiResult multi = root_multi(seq, parse_formula("x = x"), {parse_formula("x ~ root")});
    REQUIRE(multi.I.empty());
    REQUIRE_FALSE(multi.psi.has_value());
    REQUIRE(multi.roots == std::vector<Vertex>(3, 0));
}

TEST_CASE("extend_prefix with one formula equals root_multi", "[rooting]") {
    GraphSequence seq = star_sequence(2, 8);
    Formula xi = parse_formula(kCenter);
    std::vector<Formula> phis{parse_formula("x ~ root")};
    ExtendPrefixResult ext = extend_prefix(seq, xi, phis, 1);
    RootMultiResult direct = root_multi(seq, xi, phis);
    REQUIRE(ext.prefixes.size() == 1);
    REQUIRE(ext.prefixes[0].roots == direct.roots);
    REQUIRE(ext.consistent);
}

TEST_CASE("extend_prefix consistent on compatible formulas", "[rooting]") {
    Graph g(4, {{0, 1}, {0, 2}, {0, 3}});
    GraphSequence seq = constant_sequence(g, 4);
    std::vector<Formula> phis{parse_formula("x ~ root"),
                              parse_formula("exists u. (u ~ root & u != x)")};
    ExtendPrefixResult ext = extend_prefix(seq, parse_formula("x = x"), phis, 2);
    REQUIRE(ext.consistent);
    REQUIRE(ext.max_discrepancy <= ext.tolerance);
}

TEST_CASE("extend_prefix reports swapped optima as inconsistent", "[rooting]") {
    // candidates u=0 and w=1; phi1 larger at u, phi2 positive only at w, so
    // prefix 1 roots at u while prefix 2 roots at w and phi1's tail value
    // drops from 2/5 to 1/5
    Graph g(5, {{0, 2}, {0, 3}, {1, 4}}, {{"C", {0, 1}}, {"D", {4}}});
    GraphSequence seq = constant_sequence(g, 4);
    Formula xi = parse_formula("C(x)");
    std::vector<Formula> phis{parse_formula("x ~ root"), parse_formula("x ~ root & D(x)")};

    ExtendPrefixResult ext = extend_prefix(seq, xi, phis, 2);
    REQUIRE(ext.prefixes[0].roots == std::vector<Vertex>(4, 0));
    REQUIRE(ext.prefixes[1].roots == std::vector<Vertex>(4, 1));
    REQUIRE(ext.max_discrepancy == Rational(1, 5));
    REQUIRE_FALSE(ext.consistent);
}
