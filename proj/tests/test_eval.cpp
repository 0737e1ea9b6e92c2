#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace foconv;
using testsupport::brute_force_count;
using testsupport::complete_graph;
using testsupport::path_graph;
using testsupport::permute_graph;
using testsupport::random_formula;
using testsupport::random_graph;
using testsupport::random_permutation;
using testsupport::star_graph;
using testsupport::FormulaGenOptions;

TEST_CASE("satisfies on small graphs", "[eval]") {
    Graph k2 = complete_graph(2);
    Formula edge = parse_formula("x ~ y");
    REQUIRE(satisfies(k2, edge, {{"x", 0}, {"y", 1}}));
    REQUIRE_FALSE(satisfies(k2, edge, {{"x", 0}, {"y", 0}}));

    Graph p3 = path_graph(3);
    Formula two_step = parse_formula("exists z. (x ~ z & z ~ y)");
    REQUIRE(satisfies(p3, two_step, {{"x", 0}, {"y", 2}}));
    REQUIRE_FALSE(satisfies(p3, two_step, {{"x", 0}, {"y", 1}}));
}

TEST_CASE("satisfies error paths", "[eval]") {
    Graph k2 = complete_graph(2);
    REQUIRE_THROWS_AS(satisfies(k2, parse_formula("x ~ y"), {{"x", 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(satisfies(k2, parse_formula("x ~ root"), {{"x", 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(satisfies(k2, parse_formula("A(x)"), {{"x", 0}}), std::invalid_argument);
    REQUIRE_NOTHROW(satisfies(RootedGraph(k2, 1), parse_formula("x ~ root"), {{"x", 0}}));
}

TEST_CASE("solution counts on named examples", "[eval]") {
    Graph k3 = complete_graph(3);
    REQUIRE(solution_count(k3, parse_formula("x ~ y")) == 6);
    REQUIRE(solution_count(k3, parse_formula("x = x")) == 3);
    REQUIRE(solution_count(complete_graph(2), parse_formula("x ~ x")) == 0);

    Graph p3 = path_graph(3);
    DefinableSet middle =
        definable_set(p3, parse_formula("exists y. exists z. (y != z & x ~ y & x ~ z)"));
    REQUIRE(middle.arity == 1);
    REQUIRE(middle.tuples == std::vector<std::vector<Vertex>>{{1}});
}

TEST_CASE("definable sets list exactly the satisfying tuples", "[eval]") {
    std::mt19937_64 rng(606);
    FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.labels = {"A"};
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 1, 5), 0.5, true);
        Formula f = random_formula(rng, opt);
        DefinableSet set = definable_set(g, f);
        REQUIRE(BigInt(set.tuples.size()) == solution_count(g, f));
        for (const auto& tuple : set.tuples) {
            Assignment assignment;
            for (std::size_t i = 0; i < tuple.size(); ++i)
                assignment[f.free_vars()[i]] = tuple[i];
            REQUIRE(satisfies(g, f, assignment));
        }
    }
}

TEST_CASE("stone pairing values", "[eval]") {
    Graph k3 = complete_graph(3);
    StoneValue sv = stone_pairing(k3, parse_formula("x ~ y"));
    REQUIRE(sv.count == 6);
    REQUIRE(sv.total == 9);
    REQUIRE(sv.value == Rational(2, 3));

    REQUIRE(stone_pairing(k3, parse_formula("x = x")).value == 1);

    StoneValue rooted = stone_pairing(RootedGraph(complete_graph(2), 0), parse_formula("x ~ root"));
    REQUIRE(rooted.value == Rational(1, 2));

    // sentences evaluate to exactly 0 or 1 with total 1
    StoneValue sentence = stone_pairing(k3, parse_formula("exists x. exists y. x ~ y"));
    REQUIRE(sentence.total == 1);
    REQUIRE(sentence.value == 1);
}

TEST_CASE("empty graph handling", "[eval]") {
    Graph empty(0, {});
    REQUIRE(solution_count(empty, parse_formula("x = x")) == 0);
    REQUIRE(stone_pairing(empty, parse_formula("exists x. x = x")).value == 0);
    REQUIRE(stone_pairing(empty, parse_formula("forall x. x ~ x")).value == 1);
    REQUIRE_THROWS_AS(stone_pairing(empty, parse_formula("x = x")), std::invalid_argument);
}

TEST_CASE("table engine agrees with assignment enumeration", "[eval]") {
    std::mt19937_64 rng(20240812);
    FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.labels = {"A", "B"};
    for (int trial = 0; trial < 120; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 1, 6), 0.5, true);
        Formula f = random_formula(rng, opt);
        INFO(f.to_string());
        REQUIRE(solution_count(g, f) == brute_force_count(g, {}, f));
    }
}

TEST_CASE("rooted table engine agrees with assignment enumeration", "[eval]") {
    std::mt19937_64 rng(20240813);
    FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.allow_root = true;
    opt.labels = {"A"};
    for (int trial = 0; trial < 80; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 1, 5), 0.5, true);
        Vertex root = testsupport::uniform_int(rng, 0, g.n() - 1);
        Formula f = random_formula(rng, opt);
        INFO(f.to_string());
        REQUIRE(solution_count(RootedGraph(g, root), f) == brute_force_count(g, root, f));
    }
}

TEST_CASE("phi and its negation split the tuple space exactly", "[eval]") {
    std::mt19937_64 rng(31337);
    FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.labels = {"A", "B"};
    for (int trial = 0; trial < 100; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 1, 7), 0.4, true);
        Formula f = random_formula(rng, opt);
        Rational a = stone_pairing(g, f).value;
        // the negation keeps the same free tuple only when no variable vanishes
        Formula neg = Formula::negate(f);
        Rational b = stone_pairing(g, neg).value;
        REQUIRE(a + b == 1);
    }
}

TEST_CASE("stone pairings are isomorphism invariant", "[eval]") {
    std::mt19937_64 rng(4242);
    FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.labels = {"A"};
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 2, 6), 0.5, true);
        Formula f = random_formula(rng, opt);
        Graph h = permute_graph(g, random_permutation(rng, g.n()));
        REQUIRE(stone_pairing(g, f).value == stone_pairing(h, f).value);
    }
}

TEST_CASE("disjoint conjunctions factor exactly", "[eval]") {
    std::mt19937_64 rng(555);
    FormulaGenOptions opt;
    opt.max_depth = 1;
    opt.allow_root = true;
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 2, 5), 0.5);
        Vertex r = testsupport::uniform_int(rng, 0, g.n() - 1);
        Formula f1 = testsupport::random_formula_with_arity(rng, opt, 1);
        FormulaGenOptions opt2 = opt;
        opt2.free_pool = {"u", "v"};
        Formula f2 = testsupport::random_formula_with_arity(rng, opt2, 1);
        Formula both = build_power_conj({f1, f2}, {1, 1});
        RootedGraph rooted(g, r);
        REQUIRE(stone_pairing(rooted, both).value ==
                stone_pairing(rooted, f1).value * stone_pairing(rooted, f2).value);
    }
}

TEST_CASE("pushforward on constant formulas", "[eval]") {
    Graph p3 = path_graph(3);
    Formula xi = parse_formula("x = x");

    SubsetMeasure all = pushforward(p3, xi, parse_formula("x = x"));
    REQUIRE(all.m() == 3);
    REQUIRE(all.weight(0b111) == 1);

    SubsetMeasure none = pushforward(p3, xi, parse_formula("x != x"));
    REQUIRE(none.weight(0) == 1);
}

TEST_CASE("pushforward by hand on the path", "[eval]") {
    // P3 = 1-2-3 (0-based 0-1-2), xi selects the two endpoints, phi = x ~ root.
    // f(0) = {}, f(1) = {0, 2}, f(2) = {} over ground set {0, 2}.
    Graph p3 = path_graph(3);
    Formula endpoints = parse_formula("exists y. (x ~ y & (forall z. (x ~ z -> z = y)))");
    REQUIRE(definable_vertices(p3, endpoints) == std::vector<Vertex>{0, 2});
    SubsetMeasure mu = pushforward(p3, endpoints, parse_formula("x ~ root"));
    REQUIRE(mu.ground() == std::vector<int>{0, 2});
    REQUIRE(mu.weight(0b00) == Rational(2, 3));
    REQUIRE(mu.weight(0b11) == Rational(1, 3));
    REQUIRE(mu.weight(0b01) == 0);
    REQUIRE(mu.weight(0b10) == 0);
}

TEST_CASE("pushforward masses sum to one and singleton filters match rooted pairings", "[eval]") {
    std::mt19937_64 rng(777);
    FormulaGenOptions opt;
    opt.max_depth = 2;
    opt.allow_root = true;
    opt.free_pool = {"x"};
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = random_graph(rng, testsupport::uniform_int(rng, 2, 6), 0.5, true);
        Formula xi = parse_formula("A(x)");
        if (definable_vertices(g, xi).empty()) continue;
        Formula phi = testsupport::random_formula_with_arity(rng, opt, 1);
        SubsetMeasure mu = pushforward(g, xi, phi);
        Rational total = 0;
        for (std::uint32_t mask = 0; mask < mu.mask_count(); ++mask) total += mu.weight(mask);
        REQUIRE(total == 1);
        // mu({u}^) = <phi, (G, u)> for every candidate root u
        for (std::size_t pos = 0; pos < mu.ground().size(); ++pos) {
            Rational filter = filter_measure(mu, std::uint32_t{1} << pos);
            Rational rooted = stone_pairing(RootedGraph(g, mu.ground()[pos]), phi).value;
            REQUIRE(filter == rooted);
        }
    }
}

TEST_CASE("pushforward rejects empty candidate sets and sentences", "[eval]") {
    Graph k2 = complete_graph(2);
    REQUIRE_THROWS_AS(pushforward(k2, parse_formula("x != x"), parse_formula("x ~ root")),
                      std::runtime_error);
    REQUIRE_THROWS_AS(pushforward(k2, parse_formula("x = x"), parse_formula("exists x. x ~ root")),
                      std::invalid_argument);
}

TEST_CASE("cardinality profiles across sequences", "[eval]") {
    Formula center = parse_formula("exists y. exists z. (y != z & x ~ y & x ~ z)");
    GraphSequence stars;
    for (int m = 2; m <= 8; ++m) stars.graphs.push_back(star_graph(m));
    CardinalityProfile profile = is_algebraic_on_sequence(stars, center);
    REQUIRE(profile.constant);
    REQUIRE(profile.cardinality == 1);

    GraphSequence mixed{{complete_graph(2), complete_graph(3)}, ""};
    CardinalityProfile bad = is_algebraic_on_sequence(mixed, parse_formula("x = x"));
    REQUIRE_FALSE(bad.constant);
    REQUIRE(bad.profile == std::vector<std::size_t>{2, 3});

    CardinalityProfile empty = is_algebraic_on_sequence(mixed, parse_formula("x != x"));
    REQUIRE(empty.constant);
    REQUIRE(empty.cardinality == 0);

    CardinalityProfile bounded = is_algebraic_on_sequence(stars, center, 1);
    REQUIRE(bounded.within_bound);
}

TEST_CASE("enumeration cap triggers on wide formulas", "[eval]") {
    Graph g = complete_graph(4);
    EvalLimits tiny;
    tiny.max_table_entries = 10;
    REQUIRE_THROWS_AS(solution_count(g, parse_formula("x ~ y & y ~ z"), tiny), std::runtime_error);
}
