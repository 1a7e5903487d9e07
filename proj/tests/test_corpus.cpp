#include "doctest.h"

#include "cfo/bits.hpp"
#include "cfo/corpus.hpp"
#include "cfo/evaluator.hpp"
#include "oracles.hpp"

#include <map>
#include <set>

using namespace cfo;

TEST_CASE("boolean algebra generator") {
    CHECK(corpus::gen_boolean_algebra(0).n() == 1);
    CHECK(corpus::gen_boolean_algebra(0).edge_count() == 0);
    auto b2 = corpus::gen_boolean_algebra(2);
    CHECK(b2.n() == 4);
    CHECK(b2.edge_count() == 5);
    for (int s = 1; s <= 4; ++s) {
        auto g = corpus::gen_boolean_algebra(s);
        CHECK(g.n() == (1 << s));
        // bottom and top comparable to everything: diameter <= 2
        for (int v = 0; v < g.n(); ++v) {
            auto d = bfs_distances(g, v);
            for (int u = 0; u < g.n(); ++u) CHECK(d[u] <= 2);
        }
    }
    CHECK_THROWS_AS(corpus::gen_boolean_algebra(5), graph_error);
}

TEST_CASE("random bounded degree generator") {
    SUBCASE("degree cap") {
        SplitMix64 rng(8);
        for (int t = 0; t < 100; ++t) {
            auto g = corpus::gen_random_bounded_degree(rng.range(1, 30), 3, {"r", "b"}, rng.next());
            CHECK(g.max_degree() <= 3);
        }
    }
    SUBCASE("d=0 gives edgeless") {
        CHECK(corpus::gen_random_bounded_degree(10, 0, {}, 4).edge_count() == 0);
    }
    SUBCASE("determinism") {
        auto a = corpus::gen_random_bounded_degree(15, 3, {"r"}, 77);
        auto b = corpus::gen_random_bounded_degree(15, 3, {"r"}, 77);
        CHECK(save_graph(a) == save_graph(b));
    }
}

TEST_CASE("named formulas validate") {
    auto p1 = corpus::phi1();
    CHECK(validate(p1, free_index_set(p1)).ok);
    CHECK(quantifier_rank(p1) == 2);

    auto p2 = corpus::phi2();
    CHECK(validate(p2, free_index_set(p2)).ok);
    auto s2 = free_index_set(p2);
    CHECK(s2.entries.size() == 1);
    CHECK(s2.contains("", 0));
    CHECK(quantifier_rank(p2) == 4);

    auto gp = corpus::gurevich_phi();
    CHECK(validate_sentence(gp).ok);
    CHECK(quantifier_rank(gp) == 11); // frozen; a change means the construction changed
}

TEST_CASE("gurevich phi truth table") {
    // true iff the structure is a boolean algebra over an even-sized set
    std::map<int, bool> expect{{0, true}, {1, false}, {2, true}, {3, false}, {4, true}};
    auto phi = corpus::gurevich_phi();
    for (const auto& [s, want] : expect) {
        auto g = corpus::gen_boolean_algebra(s);
        CAPTURE(s);
        CHECK(evaluate_sentence(OrderedGraph::with_id_order(g), phi) == want);
    }
    SUBCASE("false on C8") {
        auto og = OrderedGraph::with_id_order(oracles::cycle(8));
        CHECK_FALSE(evaluate_sentence(og, phi));
    }
    SUBCASE("invariant on the 4-element algebra") {
        auto v = check_invariance_exhaustive(corpus::gen_boolean_algebra(2), phi);
        CHECK(v.invariant);
        CHECK(v.value);
        CHECK(v.orders_tested == 24);
    }
}

TEST_CASE("comparability determines the level structure") {
    // brute force over all bijections: every automorphism of the
    // comparability graph maps cardinality levels onto cardinality levels,
    // and the pushed-forward containment order stays isomorphic to the
    // original (witnessed by the automorphism itself); the level classes are
    // exactly what the even-cardinality sentence reads off
    for (int s = 1; s <= 3; ++s) {
        auto g = corpus::gen_boolean_algebra(s);
        int n = g.n();
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        int automorphisms = 0;
        do {
            bool automorphism = true;
            for (int u = 0; u < n && automorphism; ++u)
                for (int v = u + 1; v < n && automorphism; ++v)
                    if (g.adjacent(u, v) != g.adjacent(perm[u], perm[v])) automorphism = false;
            if (!automorphism) continue;
            ++automorphisms;
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    if (__builtin_popcount(u) == __builtin_popcount(v))
                        CHECK(__builtin_popcount(perm[u]) == __builtin_popcount(perm[v]));
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(automorphisms >= 2); // at least identity and complementation
    }
}

TEST_CASE("gurevich phi sampled heavily on the odd algebra") {
    auto phi = corpus::gurevich_phi();
    auto g = corpus::gen_boolean_algebra(3);
    auto v = check_invariance_sampled(g, phi, 1000, 20250101);
    CHECK(v.invariant);
    CHECK_FALSE(v.value);
}

TEST_CASE("sentence generator") {
    std::vector<std::string> schema{"red", "blue"};
    auto sentences = corpus::gen_cfo_sentences(3, schema, 120, 12345);
    std::set<int> ranks;
    for (const auto& f : sentences) {
        CHECK(validate_sentence(f, &schema).ok);
        int r = quantifier_rank(f);
        CHECK(r <= 4); // anchors may exceed the requested k=3? no: filtered
        ranks.insert(r);
    }
    CHECK(ranks.count(1));
    CHECK(ranks.count(2));
    CHECK(ranks.count(3));

    SUBCASE("anchors only at count 0") {
        auto only = corpus::gen_cfo_sentences(5, schema, 0, 1);
        CHECK(only.size() == 2); // phi1 and phi2 closures fit at k=5
        auto none = corpus::gen_cfo_sentences(2, schema, 0, 1);
        CHECK(none.empty());
    }
    SUBCASE("determinism") {
        auto a = corpus::gen_cfo_sentences(2, schema, 30, 9);
        auto b = corpus::gen_cfo_sentences(2, schema, 30, 9);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(formula_equal(a[i], b[i]));
    }
    SUBCASE("order-free option") {
        corpus::SentenceGenOptions opts;
        opts.allow_order_atoms = false;
        auto fs = corpus::gen_cfo_sentences(3, schema, 40, 5, opts);
        // all sentences must then be order-invariant
        SplitMix64 rng(2);
        for (const auto& f : fs) {
            auto g = corpus::gen_random_bounded_degree(4, 2, schema, rng.next());
            CHECK(check_invariance_exhaustive(g, f).invariant);
        }
    }
    SUBCASE("tautology gadgets stay invariant") {
        corpus::SentenceGenOptions opts;
        opts.allow_order_atoms = false;
        opts.order_tautologies_only = true;
        auto fs = corpus::gen_cfo_sentences(3, schema, 40, 6, opts);
        SplitMix64 rng(3);
        for (const auto& f : fs) {
            auto g = corpus::gen_random_bounded_degree(4, 2, schema, rng.next());
            CHECK(check_invariance_exhaustive(g, f).invariant);
        }
    }
}

TEST_CASE("mutations break validation") {
    std::vector<std::string> schema{"red"};
    auto sentences = corpus::gen_cfo_sentences(4, schema, 120, 777);
    int mutants = 0;
    for (const auto& f : sentences) {
        for (int op = 0; op < corpus::mutation_count; ++op) {
            auto m = corpus::mutate_sentence(f, static_cast<corpus::Mutation>(op));
            if (!m) continue;
            auto rep = validate(*m, free_index_set(*m).valid() ? free_index_set(*m) : IndexSet{});
            // a mutant either stops validating or stops being a sentence
            bool rejected = !rep.ok || !free_index_set(*m).empty();
            CAPTURE(op);
            CAPTURE(print_formula(f));
            CAPTURE(print_formula(*m));
            CHECK(rejected);
            ++mutants;
        }
    }
    CHECK(mutants >= 100);
}
