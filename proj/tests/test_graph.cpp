#include "doctest.h"

#include "cfo/bits.hpp"
#include "cfo/graph.hpp"
#include "oracles.hpp"

#include <set>

using namespace cfo;

namespace {

ColouredGraph random_graph(SplitMix64& rng, int n, int colours, double edge_p) {
    ColouredGraph g(n);
    for (int c = 0; c < colours; ++c) g.declare_colour("c" + std::to_string(c));
    for (int v = 0; v < n && colours > 0; ++v)
        if (rng.unit() < 0.7) g.set_colour(v, rng.range(0, colours - 1));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < edge_p) g.add_edge(u, v);
    return g;
}

} // namespace

TEST_CASE("graph file loading") {
    SUBCASE("minimal graph") {
        auto g = load_graph("graph 1\nnode 0\n");
        CHECK(g.n() == 1);
        CHECK(g.edge_count() == 0);
        CHECK(g.colour_count() == 0);
    }
    SUBCASE("self-loop rejected") {
        CHECK_THROWS_AS(load_graph("graph 2\nedge 0 0\n"), parse_error);
    }
    SUBCASE("cycle file") {
        std::string f = "graph 6\n";
        for (int i = 0; i < 6; ++i)
            f += "edge " + std::to_string(i) + " " + std::to_string((i + 1) % 6) + "\n";
        auto g = load_graph(f);
        CHECK(g.n() == 6);
        CHECK(g.edge_count() == 6);
        CHECK(g.max_degree() == 2);
    }
    SUBCASE("errors carry line numbers") {
        try {
            load_graph("graph 3\nedge 0 7\n");
            FAIL("expected parse error");
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("duplicate vertex id") {
        CHECK_THROWS_AS(load_graph("graph 2\nnode 0\nnode 0\n"), parse_error);
    }
    SUBCASE("labels map to dense ids") {
        auto gf = load_graph_file("graph 3\nedge alice bob\nedge bob carol\n");
        CHECK(gf.graph.n() == 3);
        CHECK(gf.label_to_id.at("alice") == 0);
        CHECK(gf.graph.adjacent(0, 1));
    }
    SUBCASE("order line") {
        auto gf = load_graph_file("graph 3\nedge 0 1\norder 2 0 1\n");
        REQUIRE(gf.order.has_value());
        OrderedGraph og(gf.graph, *gf.order);
        CHECK(og.less(2, 0));
        CHECK(og.less(0, 1));
    }
    SUBCASE("save/load round trip") {
        SplitMix64 rng(7);
        auto g = random_graph(rng, 9, 2, 0.3);
        auto g2 = load_graph(save_graph(g));
        CHECK(g2.n() == g.n());
        CHECK(g2.edge_count() == g.edge_count());
        for (int v = 0; v < g.n(); ++v) CHECK(g2.colour_mask(v) == g.colour_mask(v));
    }
}

TEST_CASE("balls") {
    auto c6 = oracles::cycle(6);
    CHECK(ball(c6, 0, 0) == std::vector<int>{0});
    CHECK(ball(c6, 0, 2) == std::vector<int>{0, 1, 2, 4, 5});
    CHECK(ball(c6, 0, 3).size() == 6);

    SUBCASE("monotone and degree-bounded") {
        SplitMix64 rng(11);
        for (int trial = 0; trial < 60; ++trial) {
            auto g = random_graph(rng, rng.range(1, 12), 1, 0.25);
            int d = g.max_degree();
            int v = rng.range(0, g.n() - 1);
            for (int r = 0; r < 3; ++r) {
                auto b1 = ball(g, v, r);
                auto b2 = ball(g, v, r + 1);
                CHECK(std::includes(b2.begin(), b2.end(), b1.begin(), b1.end()));
                if (d >= 3) {
                    long long pw = 1;
                    for (int i = 0; i < r; ++i) pw *= (d - 1);
                    long long bound = 1 + (long long)d * (pw - 1) / (d - 2);
                    CHECK((long long)b1.size() <= bound);
                } else if (d == 2) {
                    CHECK((int)b1.size() <= 2 * r + 1);
                }
            }
        }
    }
}

TEST_CASE("pointed types match brute-force pointed isomorphism") {
    SUBCASE("C6 has one 1-type") {
        auto c6 = oracles::cycle(6);
        std::set<NeighbourhoodType> types;
        for (int v = 0; v < 6; ++v) types.insert(pointed_type(c6, v, 1));
        CHECK(types.size() == 1);
    }
    SUBCASE("P4 has two 1-types") {
        auto p4 = oracles::path(4);
        std::set<NeighbourhoodType> types;
        for (int v = 0; v < 4; ++v) types.insert(pointed_type(p4, v, 1));
        CHECK(types.size() == 2);
    }
    SUBCASE("recoloured vertex differs at radius 0") {
        auto c6 = oracles::cycle(6);
        c6.declare_colour("red");
        c6.set_colour(2, 0);
        CHECK(pointed_type(c6, 2, 0) != pointed_type(c6, 3, 0));
    }
    SUBCASE("exhaustive agreement on random graphs") {
        SplitMix64 rng(23);
        for (int trial = 0; trial < 12; ++trial) {
            auto g = random_graph(rng, rng.range(2, 8), trial % 3, 0.3);
            for (int r = 0; r <= 2; ++r)
                for (int u = 0; u < g.n(); ++u)
                    for (int v = u; v < g.n(); ++v) {
                        bool codes = pointed_type(g, u, r) == pointed_type(g, v, r);
                        bool brute = oracles::pointed_balls_isomorphic(g, u, g, v, r);
                        CHECK(codes == brute);
                    }
        }
    }
}

TEST_CASE("type census") {
    auto c6 = oracles::cycle(6);
    auto cen = type_census(c6, 1);
    CHECK(cen.counts.size() == 1);
    CHECK(cen.counts.begin()->second == 6);

    auto p4 = oracles::path(4);
    auto cen4 = type_census(p4, 1);
    CHECK(cen4.counts.size() == 2);
    for (const auto& [t, c] : cen4.counts) CHECK(c == 2);

    CHECK(type_census(ColouredGraph(0), 1).counts.empty());

    SUBCASE("counts sum to n") {
        SplitMix64 rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            auto g = random_graph(rng, rng.range(1, 10), 2, 0.3);
            CHECK(type_census(g, trial % 3).total() == g.n());
        }
    }
}

TEST_CASE("threshold equivalence") {
    auto c100 = oracles::cycle(100);
    auto c101 = oracles::cycle(101);
    CHECK(threshold_equivalent(c100, c101, 1, 50));
    CHECK(threshold_equivalent(c100, c100, 1, 0));
    auto c6 = oracles::cycle(6);
    auto p6 = oracles::path(6);
    CHECK_FALSE(threshold_equivalent(c6, p6, 1, 100));
}

TEST_CASE("partial isomorphism") {
    auto c6 = oracles::cycle(6);
    auto og = OrderedGraph::with_id_order(c6);
    std::vector<std::pair<int, int>> ident;
    for (int v = 0; v < 6; ++v) ident.push_back({v, v});
    Relations all{true, true, true, true};
    CHECK(is_partial_isomorphism(og, og, ident, all));

    SUBCASE("colour mismatch") {
        ColouredGraph g(2);
        g.declare_colour("red");
        g.declare_colour("blue");
        g.set_colour(0, 0);
        g.set_colour(1, 1);
        auto o = OrderedGraph::with_id_order(g);
        CHECK_FALSE(is_partial_isomorphism(o, o, {{0, 1}}, Relations{false, false, true, true}));
    }
    SUBCASE("order discordance") {
        ColouredGraph g(2);
        OrderedGraph a(g, {0, 1}), b(g, {1, 0});
        std::vector<std::pair<int, int>> ident2{{0, 0}, {1, 1}};
        CHECK_FALSE(is_partial_isomorphism(a, b, ident2, Relations{false, true, false, true}));
        std::vector<std::pair<int, int>> swap{{0, 1}, {1, 0}};
        CHECK(is_partial_isomorphism(a, b, swap, Relations{false, true, false, true}));
    }
    SUBCASE("symmetry under reversal") {
        SplitMix64 rng(31);
        for (int trial = 0; trial < 40; ++trial) {
            auto g1 = random_graph(rng, 6, 2, 0.4);
            auto g2 = random_graph(rng, 6, 2, 0.4);
            std::vector<int> o1 = identity_order(6), o2 = identity_order(6);
            rng.shuffle(o1);
            rng.shuffle(o2);
            OrderedGraph a(g1, o1), b(g2, o2);
            std::vector<std::pair<int, int>> pairs, rev;
            for (int i = 0; i < 3; ++i) {
                int x = rng.range(0, 5), y = rng.range(0, 5);
                pairs.push_back({x, y});
                rev.push_back({y, x});
            }
            Relations rel{true, true, true, true};
            CHECK(is_partial_isomorphism(a, b, pairs, rel) ==
                  is_partial_isomorphism(b, a, rev, rel));
        }
    }
}
