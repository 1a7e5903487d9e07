#include "doctest.h"

#include "cfo/corpus.hpp"
#include "cfo/order.hpp"
#include "oracles.hpp"

#include <set>

using namespace cfo;

TEST_CASE("segment layout") {
    SegmentLayout l;
    l.k = 1;
    CHECK(l.count() == 8);
    CHECK(l.name(0) == "X");
    CHECK(l.name(1) == "LU1");
    CHECK(l.name(2) == "LN1");
    CHECK(l.name(3) == "LN2");
    CHECK(l.name(4) == "J");
    CHECK(l.name(5) == "RN2");
    CHECK(l.name(6) == "RN1");
    CHECK(l.name(7) == "RU1");
    CHECK(l.jungle() == 4);
    for (int seg = 0; seg < 8; ++seg) CHECK(l.index_of(l.name(seg)) == seg);
    // S^0 = X, S^1 = X + L1 + R1
    CHECK(l.in_safety(0, 0));
    CHECK_FALSE(l.in_safety(1, 0));
    CHECK(l.in_safety(1, 1));
    CHECK(l.in_safety(2, 1));
    CHECK_FALSE(l.in_safety(3, 1));
    CHECK_FALSE(l.in_safety(4, 1));
    CHECK_FALSE(l.in_safety(5, 1));
    CHECK(l.in_safety(6, 1));
    CHECK(l.in_safety(7, 1));

    SegmentLayout l2;
    l2.k = 2;
    CHECK(l2.count() == 26);
    CHECK(l2.name(0) == "X");
    CHECK(l2.name(1) == "LU1");
    CHECK(l2.name(8) == "LN4");
    CHECK(l2.name(9) == "LN5");
    CHECK(l2.name(12) == "LN8");
    CHECK(l2.name(13) == "J");
    CHECK(l2.name(14) == "RN8");
    CHECK(l2.name(17) == "RN5");
    CHECK(l2.name(18) == "RN4");
    CHECK(l2.name(19) == "RU4");
    CHECK(l2.name(24) == "RN1");
    CHECK(l2.name(25) == "RU1");
    for (int seg = 0; seg < 26; ++seg) CHECK(l2.index_of(l2.name(seg)) == seg);
    CHECK(l2.tier_of(1) == 0);
    CHECK(l2.tier_of(2) == 0);
    CHECK(l2.tier_of(3) == 1);
    CHECK(l2.tier_of(4) == 1);
}

TEST_CASE("build kf order on cycles, k=1") {
    ContextStore store;
    auto g = corpus::gen_cycle(200);
    auto res = build_kf_order(store, g, 1);
    const auto& o = res.order;
    CHECK(res.report.check.all_true());
    CHECK(res.report.tiers_complete);
    SUBCASE("segment distance examples") {
        // X is empty on a pure cycle; pick members of known segments
        int w1 = -1, j = -1;
        for (int v = 0; v < o.n(); ++v) {
            if (o.segment_of[v] == o.layout.lu(1)) w1 = v;
            if (o.segment_of[v] == o.layout.jungle() && j < 0) j = v;
        }
        REQUIRE(w1 >= 0);
        REQUIRE(j >= 0);
        CHECK(o.segment_distance(w1, w1) == 0);
        CHECK(o.segment_distance(w1, j) == 3); // LU1 .. LN1 LN2 J at k=1
    }
    SUBCASE("safety parts") {
        auto s0 = o.safety_part(1); // S^0 = X
        CHECK(s0.empty());
        auto s1 = o.safety_part(0); // S^1
        CHECK_FALSE(s1.empty());
        for (int v : s0) CHECK(o.in_safety_part(v, 0));
    }
    SUBCASE("border size is independent of n") {
        auto res2 = build_kf_order(store, corpus::gen_cycle(2000), 1);
        CHECK(res2.order.border_size == o.border_size);
    }
    SUBCASE("deterministic") {
        ContextStore store2;
        auto res2 = build_kf_order(store2, corpus::gen_cycle(200), 1);
        CHECK(res2.order.by_rank == o.by_rank);
        CHECK(res2.order.segment_of == o.segment_of);
    }
    SUBCASE("order file round trip") {
        auto text = save_order_file(o);
        auto o2 = load_order_file(text, o.n());
        CHECK(o2.by_rank == o.by_rank);
        CHECK(o2.segment_of == o.segment_of);
        CHECK(o2.border_size == o.border_size);
    }
}

TEST_CASE("build failures") {
    ContextStore store;
    CHECK_THROWS_AS(build_kf_order(store, corpus::gen_path(10), 1), richness_error);
    CHECK_THROWS_AS(build_kf_order(store, corpus::gen_cycle(6), 2), richness_error);
}

TEST_CASE("checker catches mutations") {
    ContextStore store;
    auto g = corpus::gen_cycle(200);
    auto res = build_kf_order(store, g, 1);
    SUBCASE("swapping a jungle vertex into a universal segment") {
        KfOrder mut = res.order;
        int lu1 = mut.layout.lu(1);
        // replace the single LU1 occupant with a jungle vertex far away
        int occupant = -1, stranger = -1;
        for (int v = 0; v < mut.n(); ++v) {
            if (mut.segment_of[v] == lu1) occupant = v;
        }
        auto dist = bfs_distances(g, occupant);
        for (int v = 0; v < mut.n(); ++v)
            if (mut.segment_of[v] == mut.layout.jungle() && dist[v] > 10) stranger = v;
        REQUIRE(occupant >= 0);
        REQUIRE(stranger >= 0);
        std::swap(mut.segment_of[occupant], mut.segment_of[stranger]);
        std::swap(mut.by_rank[mut.rank[occupant]], mut.by_rank[mut.rank[stranger]]);
        std::swap(mut.rank[occupant], mut.rank[stranger]);
        auto rep = check_kf_order(store, g, mut, res.report.freq, res.report.tier_contexts);
        CHECK_FALSE(rep.all_true());
        CHECK_FALSE(rep.contraction); // the stranger's neighbours stayed in J
    }
    SUBCASE("breaking refinement") {
        KfOrder mut = res.order;
        // swap the ranks of the first and last vertex without touching
        // segments
        int a = mut.by_rank.front(), b = mut.by_rank.back();
        std::swap(mut.by_rank.front(), mut.by_rank.back());
        std::swap(mut.rank[a], mut.rank[b]);
        auto rep = check_kf_order(store, g, mut, res.report.freq, res.report.tier_contexts);
        CHECK_FALSE(rep.refinement);
    }
}

TEST_CASE("transfer between adjacent cycles") {
    ContextStore store;
    auto ga = corpus::gen_cycle(200);
    auto gb = corpus::gen_cycle(201);
    auto res = build_kf_order(store, ga, 1);

    SUBCASE("identity transfer") {
        BorderBijection ident;
        for (int v = 0; v < ga.n(); ++v)
            if (res.order.segment_of[v] != res.order.layout.jungle()) ident.map[v] = v;
        auto back = transfer_order(store, ga, res.order, res.report, ga, ident);
        CHECK(back.report.check.all_true());
        CHECK(back.order.segment_of == res.order.segment_of);
    }
    SUBCASE("search finds a bijection into the bigger cycle") {
        BijectionSearchStats stats;
        auto phi = find_border_bijection(ga, res.order, res.report.freq, gb, 2'000'000, &stats);
        REQUIRE(phi.has_value());
        auto tb = transfer_order(store, ga, res.order, res.report, gb, *phi);
        CHECK(tb.report.check.all_true());
        CHECK(tb.order.border_size == res.order.border_size);
    }
    SUBCASE("no bijection into a path") {
        auto gp = corpus::gen_path(200);
        auto phi = find_border_bijection(ga, res.order, res.report.freq, gp, 200000);
        CHECK_FALSE(phi.has_value());
    }
    SUBCASE("colour-breaking map is rejected") {
        ColouredGraph gc = ga;
        gc.declare_colour("red");
        // identity map but B declares a red vertex inside the border image
        BorderBijection ident;
        for (int v = 0; v < ga.n(); ++v)
            if (res.order.segment_of[v] != res.order.layout.jungle()) ident.map[v] = v;
        int border_vertex = res.order.by_rank[0];
        gc.set_colour(border_vertex, 0);
        CHECK_THROWS_AS(transfer_order(store, ga, res.order, res.report, gc, ident),
                        order_error);
    }
}

TEST_CASE("placement centres are far apart and their elements disjoint") {
    ContextStore store;
    auto g = corpus::gen_cycle(300);
    g.declare_colour("mark");
    g.set_colour(7, 0);
    auto res = build_kf_order(store, g, 1);
    std::vector<int> centres;
    for (const auto& [seg, list] : res.order.placed)
        for (const auto& [ctx, centre] : list) centres.push_back(centre);
    REQUIRE(centres.size() >= 2);
    int k = 1;
    for (size_t i = 0; i < centres.size(); ++i) {
        auto dist = bfs_distances(g, centres[i]);
        for (size_t j = i + 1; j < centres.size(); ++j)
            CHECK(dist[centres[j]] > 4 * k * k);
    }
    // element sets of distinct occurrences never overlap, nor touch X
    auto og = res.order.ordered(g);
    std::set<int> seen;
    for (const auto& [seg, list] : res.order.placed)
        for (const auto& [ctx, centre] : list) {
            int depth = store.data(ctx).depth;
            for (int v : context_elements(og, centre, depth)) {
                CHECK_FALSE(seen.count(v));
                CHECK(res.order.segment_of[v] != 0);
                seen.insert(v);
            }
        }
}

TEST_CASE("build with rare vertices present") {
    // a long cycle with two distant marked vertices: marked types are rare,
    // the unmarked cycle type stays frequent
    ContextStore store;
    auto g = corpus::gen_cycle(300);
    g.declare_colour("mark");
    g.set_colour(0, 0);
    g.set_colour(150, 0);
    auto res = build_kf_order(store, g, 1);
    CHECK(res.report.check.all_true());
    // the marked vertices and their radius-1 neighbours carry rare types
    CHECK_FALSE(res.report.freq.rare_vertices.empty());
    for (int v : res.report.freq.rare_vertices) CHECK(res.order.segment_of[v] == 0);
}
