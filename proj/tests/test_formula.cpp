#include "doctest.h"

#include "cfo/bits.hpp"
#include "cfo/fo.hpp"
#include "cfo/formula.hpp"

using namespace cfo;

namespace {

const char* PHI1 =
    "exists x[a,1] adj x[a,0] . (E(x[a,1],x[a,0]) & exists x[a,2] adj x[a,1] . "
    "(E(x[a,2],x[a,1]) & E(x[a,2],x[a,0])))";

} // namespace

TEST_CASE("index sets") {
    IndexSet s;
    s.insert("", 0);
    s.insert("a", 0);
    CHECK(s.valid());
    s.insert("a", 2);
    CHECK_FALSE(s.valid());
    auto c = s.closure();
    CHECK(c.valid());
    CHECK(c.contains("a", 1));

    IndexSet t;
    t.insert("ab", 0);
    auto tc = t.closure();
    CHECK(tc.contains("a", 0));
    CHECK(tc.contains("", 0));
    CHECK(tc.valid());
}

TEST_CASE("parser") {
    SUBCASE("phi1 parses") {
        auto f = parse_formula(PHI1);
        CHECK(f->kind == Formula::Kind::exists);
        CHECK(f->var == Variable{"a", 1});
        CHECK(f->guard_index == 0);
    }
    SUBCASE("cross-cluster edge parses but does not validate") {
        auto f = parse_formula("E(x[eps,0], x[a,0])");
        IndexSet s;
        s.insert("", 0);
        s.insert("a", 0);
        auto rep = validate(f, s);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violations[0].rule == "atom.edge.cross");
    }
    SUBCASE("cross-cluster order atom validates") {
        auto f = parse_formula("x[a,0] < x[eps,0]");
        IndexSet s;
        s.insert("", 0);
        s.insert("a", 0);
        CHECK(validate(f, s).ok);
    }
    SUBCASE("syntax errors carry position") {
        CHECK_THROWS_AS(parse_formula("exists x[a,1] ."), formula_error);
        CHECK_THROWS_AS(parse_formula("E(x[a,0], x[a,1]"), formula_error);
        CHECK_THROWS_AS(parse_formula("exists y . true"), formula_error);
    }
    SUBCASE("precedence") {
        auto f = parse_formula("Red(x[eps,0]) & Blue(x[eps,0]) | true");
        CHECK(f->kind == Formula::Kind::disj);
        auto g = parse_formula("true -> false | true");
        CHECK(g->kind == Formula::Kind::disj); // (!true | (false|true))
        CHECK(g->lhs->kind == Formula::Kind::neg);
    }
    SUBCASE("forall desugars") {
        auto f = parse_formula("forall x[eps,0] . true");
        CHECK(f->kind == Formula::Kind::neg);
        CHECK(f->lhs->kind == Formula::Kind::exists);
        CHECK(f->lhs->body->kind == Formula::Kind::neg);
    }
}

TEST_CASE("print round trip on named formulas") {
    for (const char* src : {PHI1, "x[a,0] < x[eps,0]", "!(true & false)",
                            "forall x[a,1] adj x[a,0] . (Red(x[a,1]) -> x[a,1] = x[a,0])"}) {
        auto f = parse_formula(src);
        auto f2 = parse_formula(print_formula(f));
        CHECK(formula_equal(f, f2));
    }
}

#include "cfo/corpus.hpp"

TEST_CASE("parse after print is the identity on 1000 generated formulas") {
    std::vector<std::string> schema{"red", "blue"};
    auto sentences = cfo::corpus::gen_cfo_sentences(3, schema, 1000, 20240101);
    for (const auto& f : sentences) {
        auto f2 = parse_formula(print_formula(f));
        CHECK(formula_equal(f, f2));
    }
}

TEST_CASE("bounded-diameter translations validate for generator inputs") {
    auto fos = cfo::corpus::gen_fo_sentences(2, {"Red"}, 40, 5);
    for (const auto& f : fos)
        for (int d = 0; d <= 3; ++d) {
            auto t = cfo::fo::fo_to_cfo_bounded_diameter(f, d);
            CHECK(validate_sentence(t).ok);
            CHECK(quantifier_rank(t) <= cfo::fo::fo_quantifier_rank(f) * (d + 1) + 1);
        }
}

TEST_CASE("quantifier rank") {
    CHECK(quantifier_rank(parse_formula("E(x[a,0],x[a,1])")) == 0);
    CHECK(quantifier_rank(parse_formula(PHI1)) == 2);
}

TEST_CASE("free index sets") {
    auto phi1 = parse_formula(PHI1);
    auto s = free_index_set(phi1);
    CHECK(s.contains("a", 0));
    CHECK(s.contains("", 0));
    CHECK(s.entries.size() == 2);

    // body of phi1's inner quantifier
    auto inner = phi1->body->rhs; // exists x[a,2] ...
    REQUIRE(inner->kind == Formula::Kind::exists);
    auto sb = free_index_set(inner->body);
    CHECK(sb.contains("a", 0));
    CHECK(sb.contains("a", 1));
    CHECK(sb.contains("a", 2));
    CHECK(sb.contains("", 0));

    CHECK(free_index_set(parse_formula("exists x[eps,0] . true")).empty());
}

TEST_CASE("validation rules") {
    SUBCASE("phi1 under its free set") {
        auto f = parse_formula(PHI1);
        CHECK(validate(f, free_index_set(f)).ok);
    }
    SUBCASE("root intro under non-empty ambient") {
        IndexSet s;
        s.insert("", 0);
        auto f = parse_formula("exists x[eps,0] . true");
        auto rep = validate(f, s);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violations[0].rule == "quant.root");
    }
    SUBCASE("namespace violation on a sentence") {
        // rank-2 sentence whose AST uses x[eps,2]: |w|+i = 2 > k-1
        auto bad = mk_exists(Variable{"", 0},
                             mk_exists_guarded(Variable{"", 2}, 0, mk_truth(true)));
        auto rep = validate(bad, IndexSet{});
        CHECK_FALSE(rep.ok);
        bool has_ns = false;
        for (const auto& v : rep.violations) has_ns |= v.rule == "ns.bound";
        CHECK(has_ns);
    }
    SUBCASE("continuation must use smallest unused index") {
        auto f = parse_formula("exists x[eps,0] . exists x[eps,2] adj x[eps,0] . true");
        auto rep = validate(f, IndexSet{});
        CHECK_FALSE(rep.ok);
    }
    SUBCASE("child intro needs parent") {
        auto f = parse_formula("exists x[eps,0] . exists x[ab,0] . true");
        CHECK_FALSE(validate(f, IndexSet{}).ok);
    }
    SUBCASE("unknown colour with schema") {
        auto f = parse_formula("exists x[eps,0] . Green(x[eps,0])");
        std::vector<std::string> schema{"red", "blue"};
        CHECK_FALSE(validate(f, IndexSet{}, &schema).ok);
        std::vector<std::string> schema2{"Green"};
        CHECK(validate(f, IndexSet{}, &schema2).ok);
    }
}

TEST_CASE("fo to cfo bounded diameter") {
    using namespace cfo::fo;
    SUBCASE("exists true at diameter 0") {
        auto t = fo_to_cfo_bounded_diameter(fo_exists("x", fo_truth(true)), 0);
        auto expect = parse_formula("exists x[eps,0] . true");
        CHECK(formula_equal(t, expect));
    }
    SUBCASE("translation validates and respects the rank bound") {
        auto f = fo_exists("x", fo_conj(fo_colour("Red", "x"),
                                        fo_exists("y", fo_edge("x", "y"))));
        for (int d = 0; d <= 3; ++d) {
            auto t = fo_to_cfo_bounded_diameter(f, d);
            CHECK(validate_sentence(t).ok);
            CHECK(quantifier_rank(t) <= fo_quantifier_rank(f) * (d + 1) + 1);
        }
    }
    SUBCASE("order atoms rejected") {
        CHECK_THROWS_AS(fo_to_cfo_bounded_diameter(fo_exists("x", fo_less("x", "x")), 1),
                        formula_error);
    }
}

TEST_CASE("relativize to root") {
    using namespace cfo::fo;
    SUBCASE("single existential") {
        auto r = relativize_to_root(fo_exists("x", fo_truth(true)));
        auto expect = parse_formula("exists x[eps,1] adj x[eps,0] . true");
        CHECK(formula_equal(r, expect));
    }
    SUBCASE("nested quantifiers get indices outside-in") {
        auto f = fo_exists("x", fo_forall("y", fo_exists("z", fo_truth(true))));
        auto r = relativize_to_root(f);
        REQUIRE(r->kind == Formula::Kind::exists);
        CHECK(r->var == Variable{"", 1});
        auto fa = r->body; // !exists x[eps,2] ...
        REQUIRE(fa->kind == Formula::Kind::neg);
        CHECK(fa->lhs->var == Variable{"", 2});
        auto ex = fa->lhs->body;
        REQUIRE(ex->kind == Formula::Kind::neg);
        CHECK(ex->lhs->var == Variable{"", 3});
    }
    SUBCASE("free root variable") {
        auto r = relativize_to_root(fo_exists("x", fo_truth(true)));
        auto s = free_index_set(r);
        CHECK(s.entries.size() == 1);
        CHECK(s.contains("", 0));
    }
}
