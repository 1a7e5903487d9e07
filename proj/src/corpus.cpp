#include "cfo/corpus.hpp"

#include "cfo/bits.hpp"

#include <algorithm>
#include <functional>

namespace cfo::corpus {

ColouredGraph gen_cycle(int n) {
    ColouredGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    if (n > 2) g.add_edge(n - 1, 0);
    return g;
}

ColouredGraph gen_path(int n) {
    ColouredGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

ColouredGraph gen_boolean_algebra(int set_size, bool force) {
    if (set_size < 0) throw graph_error("set size must be non-negative");
    if (set_size > 4 && !force) throw graph_error("boolean algebra guarded to set size <= 4");
    int n = 1 << set_size;
    ColouredGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            bool usub = (u & v) == u; // u subseteq v
            bool vsub = (u & v) == v;
            if (usub != vsub) g.add_edge(u, v); // strict comparability
        }
    return g;
}

ColouredGraph gen_random_bounded_degree(int n, int d, const std::vector<std::string>& colours,
                                        uint64_t seed) {
    if (n < 0 || d < 0) throw graph_error("bad generator parameters");
    ColouredGraph g(n);
    for (const auto& c : colours) g.declare_colour(c);
    SplitMix64 rng(seed);
    if (!colours.empty())
        for (int v = 0; v < n; ++v)
            g.set_colour(v, static_cast<int>(rng.below(colours.size())));
    if (d == 0 || n < 2) return g;
    long long attempts = 3LL * n * d;
    for (long long t = 0; t < attempts; ++t) {
        int u = static_cast<int>(rng.below(n));
        int v = static_cast<int>(rng.below(n));
        if (u == v) continue;
        if (g.degree(u) >= d || g.degree(v) >= d) continue;
        if (g.adjacent(u, v)) continue;
        g.add_edge(u, v);
    }
    return g;
}

FormulaPtr phi1() {
    return parse_formula(
        "exists x[a,1] adj x[a,0] . (E(x[a,1],x[a,0]) & exists x[a,2] adj x[a,1] . "
        "(E(x[a,2],x[a,1]) & E(x[a,2],x[a,0])))");
}

FormulaPtr phi2() {
    // neighbour x_eps^1 of the root such that the order interval between root
    // and x_eps^1 contains a vertex of some triangle; the triangle subformula
    // sits inside the x_a^0 introduction so the whole thing has only the root
    // free.
    Variable e0{"", 0}, e1{"", 1}, a0{"a", 0};
    FormulaPtr between = mk_disj(
        mk_conj(mk_cmp(e0, Cmp::lt, a0), mk_cmp(a0, Cmp::lt, e1)),
        mk_conj(mk_cmp(e1, Cmp::lt, a0), mk_cmp(a0, Cmp::lt, e0)));
    FormulaPtr inner = mk_exists(a0, mk_conj(between, phi1()));
    return mk_exists_guarded(e1, 0, mk_conj(mk_edge(e1, e0), inner));
}

// ------------------------------------------------------------ Gurevich phi

namespace {

using fo::FoPtr;
using namespace fo;

FoPtr fo_neq(const std::string& x, const std::string& y) { return fo_neg(fo_eq(x, y)); }

// all of these live in the relativized world: variables range over the
// neighbours of the root, `b` names the opposite pole

FoPtr mid(const std::string& x, const std::string& b) { return fo_neq(x, b); }

// u is an atom or coatom: no triangle of non-pole elements has u as the
// middle of its chain. "u is the chain middle of {u,v,w}" is certified by
// the absence of a non-pole z comparable to u but incomparable to both v
// and w.
FoPtr fo_ac(const std::string& u, const std::string& b, const std::string& suffix) {
    std::string v = "v" + suffix, w = "w" + suffix, z = "z" + suffix;
    FoPtr no_cert = fo_neg(fo_exists(
        z, fo_conj(fo_conj(fo_conj(mid(z, b), fo_conj(fo_neq(z, v), fo_neq(z, w))),
                           fo_edge(z, u)),
                   fo_conj(fo_neg(fo_edge(z, v)), fo_neg(fo_edge(z, w))))));
    FoPtr chain_middle_triangle = fo_exists(
        v, fo_exists(w, fo_conj(fo_conj(fo_conj(mid(v, b), mid(w, b)),
                                        fo_conj(fo_edge(u, v), fo_edge(u, w))),
                                fo_conj(fo_edge(v, w), no_cert))));
    return fo_conj(mid(u, b), fo_neg(chain_middle_triangle));
}

// a belongs to the same level (atoms or coatoms) as c: both are in AC,
// incomparable, and either share a comparable non-pole witness or the AC set
// has no third element (the two-atom boolean algebra).
FoPtr fo_same_level(const std::string& a, const std::string& c, const std::string& b,
                    const std::string& suffix) {
    std::string w = "sw" + suffix, w2 = "sx" + suffix;
    FoPtr witness = fo_exists(w, fo_conj(mid(w, b), fo_conj(fo_edge(a, w), fo_edge(w, c))));
    FoPtr no_third =
        fo_neg(fo_exists(w2, fo_conj(fo_ac(w2, b, suffix), fo_conj(fo_neq(w2, c), fo_neq(w2, a)))));
    return fo_conj(fo_conj(fo_neq(a, c), fo_neg(fo_edge(a, c))), fo_disj(witness, no_third));
}

// L(a): a lies on c's level. The cheap disqualifiers run first.
FoPtr fo_level(const std::string& a, const std::string& c, const std::string& b,
               const std::string& suffix) {
    return fo_conj(fo_disj(fo_eq(a, c), fo_same_level(a, c, b, suffix)), fo_ac(a, b, suffix + "q"));
}

FoPtr fo_member(const std::string& a, const std::string& z) {
    return fo_disj(fo_edge(a, z), fo_eq(a, z));
}

// There is a set z whose members along c's level alternate along <, starting
// inside and ending outside: exactly the even-cardinality test.
FoPtr fo_alternation(const std::string& c, const std::string& b) {
    FoPtr least_in = fo_forall(
        "a1", fo_impl(fo_conj(fo_level("a1", c, b, "l1"),
                              fo_neg(fo_exists("a2", fo_conj(fo_level("a2", c, b, "l2"),
                                                             fo_less("a2", "a1"))))),
                      fo_member("a1", "zz")));
    FoPtr greatest_out = fo_forall(
        "a1", fo_impl(fo_conj(fo_level("a1", c, b, "g1"),
                              fo_neg(fo_exists("a2", fo_conj(fo_level("a2", c, b, "g2"),
                                                             fo_less("a1", "a2"))))),
                      fo_neg(fo_member("a1", "zz"))));
    FoPtr consecutive = fo_forall(
        "a1",
        fo_forall(
            "a2",
            fo_impl(fo_conj(fo_conj(fo_level("a1", c, b, "c1"), fo_level("a2", c, b, "c2")),
                            fo_conj(fo_less("a1", "a2"),
                                    fo_neg(fo_exists(
                                        "a3", fo_conj(fo_level("a3", c, b, "c3"),
                                                      fo_conj(fo_less("a1", "a3"),
                                                              fo_less("a3", "a2"))))))),
                    fo_disj(fo_conj(fo_member("a1", "zz"), fo_neg(fo_member("a2", "zz"))),
                            fo_conj(fo_neg(fo_member("a1", "zz")), fo_member("a2", "zz"))))));
    return fo_exists("zz", fo_conj(fo_conj(least_in, greatest_out), consecutive));
}

FoPtr fo_universal_in_reach(const std::string& y) {
    std::string q = "u" + y;
    return fo_forall(q, fo_disj(fo_eq(q, y), fo_edge(q, y)));
}

// the inner sentence handed to relativize_to_root
FoPtr even_level_sentence() {
    FoPtr unique_b = fo_forall("b2", fo_impl(fo_universal_in_reach("b2"), fo_eq("b2", "bb")));
    FoPtr chosen = fo_exists(
        "cc", fo_conj(fo_ac("cc", "bb", "p"), fo_alternation("cc", "bb")));
    return fo_exists("bb", fo_conj(fo_conj(fo_universal_in_reach("bb"), unique_b), chosen));
}

FormulaPtr build_psi1() {
    // everything at distance <= 2 from the root is adjacent to it
    Variable e0{"", 0}, e1{"", 1}, e2{"", 2};
    return mk_forall_guarded(
        e1, 0,
        mk_forall_guarded(e2, 1, mk_disj(mk_cmp(e2, Cmp::eq, e0), mk_edge(e2, e0))));
}

FormulaPtr build_psi2() {
    // every component has diameter <= 2: any length-3 walk ends within
    // distance 2 of its start
    Variable a0{"a", 0}, a1{"a", 1}, a2{"a", 2}, a3{"a", 3}, a4{"a", 4};
    FormulaPtr common = mk_exists_guarded(a4, 3, mk_edge(a4, a0));
    FormulaPtr close = mk_disj(mk_disj(mk_cmp(a3, Cmp::eq, a0), mk_edge(a3, a0)), common);
    return mk_forall(
        a0, mk_forall_guarded(a1, 0, mk_forall_guarded(a2, 1, mk_forall_guarded(a3, 2, close))));
}

FormulaPtr build_psi3() {
    // the least element of any component is the least of the whole order;
    // with diameter <= 2 the component is the distance-2 ball
    Variable b0{"b", 0}, b1{"b", 1}, b2{"b", 2}, bc{"bc", 0};
    FormulaPtr local_min = mk_forall_guarded(
        b1, 0,
        mk_conj(mk_cmp(b0, Cmp::lt, b1),
                mk_forall_guarded(b2, 1, mk_disj(mk_cmp(b2, Cmp::eq, b0), mk_cmp(b0, Cmp::lt, b2)))));
    FormulaPtr no_smaller = mk_neg(mk_exists(bc, mk_cmp(bc, Cmp::lt, b0)));
    return mk_forall(b0, mk_disj(mk_neg(local_min), no_smaller));
}

} // namespace

FormulaPtr gurevich_phi() {
    Variable e0{"", 0}, c0{"c", 0};
    // exactly-one-element escape hatch: the empty-set boolean algebra
    FormulaPtr all_alone = mk_forall(c0, mk_cmp(c0, Cmp::eq, e0));
    FormulaPtr inner = fo::relativize_to_root(even_level_sentence());
    FormulaPtr body = mk_conj(
        mk_conj(build_psi1(), mk_conj(build_psi2(), build_psi3())),
        mk_disj(all_alone, inner));
    return mk_exists(e0, body);
}

// ----------------------------------------------------- sentence generation

namespace {

struct SentenceGen {
    SplitMix64 rng;
    const std::vector<std::string>& schema;
    SentenceGenOptions opts;
    int nodes = 0;

    std::vector<Variable> scope_vars(const IndexSet& s) const {
        std::vector<Variable> out;
        for (const auto& [w, i] : s.entries) out.push_back(Variable{w, i});
        return out;
    }

    FormulaPtr atom(const IndexSet& s) {
        ++nodes;
        auto vars = scope_vars(s);
        if (vars.empty()) return mk_truth(rng.below(2) == 0);
        for (int attempt = 0; attempt < 12; ++attempt) {
            switch (rng.below(5)) {
            case 0: {
                if (schema.empty()) break;
                return mk_colour(schema[rng.below(schema.size())],
                                 vars[rng.below(vars.size())]);
            }
            case 1: { // same-cluster edge
                Variable a = vars[rng.below(vars.size())];
                std::vector<Variable> same;
                for (const auto& v : vars)
                    if (v.word == a.word && !(v == a)) same.push_back(v);
                if (same.empty()) break;
                return mk_edge(a, same[rng.below(same.size())]);
            }
            case 2: { // same-cluster comparison
                Variable a = vars[rng.below(vars.size())];
                std::vector<Variable> same;
                for (const auto& v : vars)
                    if (v.word == a.word) same.push_back(v);
                Variable c = same[rng.below(same.size())];
                if (!opts.allow_order_atoms && !opts.order_tautologies_only)
                    return mk_cmp(a, Cmp::eq, c);
                if (opts.order_tautologies_only) {
                    return mk_disj(mk_disj(mk_cmp(a, Cmp::lt, c), mk_cmp(a, Cmp::eq, c)),
                                   mk_cmp(a, Cmp::gt, c));
                }
                Cmp op = rng.below(3) == 0 ? Cmp::lt : rng.below(2) == 0 ? Cmp::eq : Cmp::gt;
                return mk_cmp(a, op, c);
            }
            case 3: { // parent-child comparison
                std::vector<std::pair<Variable, Variable>> pairs;
                for (const auto& v : vars)
                    if (!v.word.empty() && v.index == 0) {
                        std::string parent = v.word.substr(0, v.word.size() - 1);
                        for (const auto& u : vars)
                            if (u.word == parent) pairs.push_back({v, u});
                    }
                if (pairs.empty()) break;
                auto [x, y] = pairs[rng.below(pairs.size())];
                if (!opts.allow_order_atoms && !opts.order_tautologies_only)
                    return mk_cmp(x, Cmp::eq, y);
                if (opts.order_tautologies_only)
                    return mk_disj(mk_disj(mk_cmp(x, Cmp::lt, y), mk_cmp(x, Cmp::eq, y)),
                                   mk_cmp(x, Cmp::gt, y));
                Cmp op = rng.below(3) == 0 ? Cmp::lt : rng.below(2) == 0 ? Cmp::eq : Cmp::gt;
                return mk_cmp(x, op, y);
            }
            default:
                return mk_truth(rng.below(2) == 0);
            }
        }
        return mk_truth(true);
    }

    FormulaPtr boolean_of_atoms(const IndexSet& s, int depth) {
        if (depth == 0 || nodes >= opts.max_nodes || rng.below(3) == 0) {
            FormulaPtr a = atom(s);
            if (rng.below(4) == 0) a = mk_neg(a);
            return a;
        }
        ++nodes;
        FormulaPtr l = boolean_of_atoms(s, depth - 1);
        FormulaPtr r = boolean_of_atoms(s, depth - 1);
        return rng.below(2) == 0 ? mk_conj(l, r) : mk_disj(l, r);
    }

    FormulaPtr gen(const IndexSet& s, int rank) {
        if (rank == 0) return boolean_of_atoms(s, 2);
        if (nodes >= opts.max_nodes) return boolean_of_atoms(s, 1);
        ++nodes;
        // sometimes combine; at least one side keeps the full rank
        if (!s.empty() && rng.below(4) == 0) {
            FormulaPtr l = gen(s, rank);
            FormulaPtr r = gen(s, static_cast<int>(rng.below(rank + 1)));
            return rng.below(2) == 0 ? mk_conj(l, r) : mk_disj(l, r);
        }
        // pick a legal quantifier
        struct Move {
            Variable var;
            std::optional<int> guard;
        };
        std::vector<Move> moves;
        if (s.empty()) {
            moves.push_back({Variable{"", 0}, std::nullopt});
        } else {
            std::vector<std::string> clusters;
            for (const auto& [w, i] : s.entries)
                if (i == 0) clusters.push_back(w);
            for (const auto& w : clusters) {
                // child introduction with the least fresh letter
                for (char alpha = 'a'; alpha <= 'd'; ++alpha) {
                    std::string child = w + std::string(1, alpha);
                    if (!s.contains(child, 0)) {
                        moves.push_back({Variable{child, 0}, std::nullopt});
                        break;
                    }
                }
                // guarded continuation from any pebbled index
                int next = s.smallest_unused_index(w);
                for (int j = 0; j < next; ++j)
                    moves.push_back({Variable{w, next}, j});
            }
        }
        if (moves.empty()) return boolean_of_atoms(s, 1);
        Move m = moves[rng.below(moves.size())];
        IndexSet s2 = s;
        s2.insert(m.var.word, m.var.index);
        FormulaPtr body = gen(s2, rank - 1);
        bool universal = rng.below(3) == 0;
        if (m.guard) {
            return universal ? mk_forall_guarded(m.var, *m.guard, body)
                             : mk_exists_guarded(m.var, *m.guard, body);
        }
        return universal ? mk_forall(m.var, body) : mk_exists(m.var, body);
    }
};

} // namespace

std::vector<FormulaPtr> gen_cfo_sentences(int k, const std::vector<std::string>& schema,
                                          int count, uint64_t seed,
                                          const SentenceGenOptions& opts) {
    if (k < 1) throw formula_error("sentence generation needs rank k >= 1");
    std::vector<FormulaPtr> out;
    // fixed anchors, when their rank fits the requested bound
    auto phi1_closure = mk_exists(Variable{"", 0}, mk_exists(Variable{"a", 0}, phi1()));
    if (quantifier_rank(phi1_closure) <= k) out.push_back(phi1_closure);
    auto phi2_closure = mk_exists(Variable{"", 0}, phi2());
    if (quantifier_rank(phi2_closure) <= k) out.push_back(phi2_closure);

    SentenceGen g{SplitMix64(seed), schema, opts, 0};
    int generated = 0;
    while (generated < count) {
        g.nodes = 0;
        int rank = 1 + static_cast<int>(g.rng.below(k));
        FormulaPtr f = g.gen(IndexSet{}, rank);
        if (!free_index_set(f).empty()) continue;
        out.push_back(f);
        ++generated;
    }
    return out;
}

std::vector<fo::FoPtr> gen_fo_sentences(int k, const std::vector<std::string>& schema,
                                        int count, uint64_t seed) {
    using namespace fo;
    SplitMix64 rng(seed);
    std::vector<FoPtr> out;
    std::function<FoPtr(std::vector<std::string>&, int)> gen = [&](std::vector<std::string>& vars,
                                                                   int rank) -> FoPtr {
        if (rank == 0 || rng.below(4) == 0) {
            if (vars.empty()) return fo_truth(rng.below(2) == 0);
            auto pick = [&]() { return vars[rng.below(vars.size())]; };
            FoPtr a;
            switch (rng.below(4)) {
            case 0: a = schema.empty() ? fo_truth(true)
                                       : fo_colour(schema[rng.below(schema.size())], pick());
                break;
            case 1: a = fo_edge(pick(), pick()); break;
            case 2: a = fo_eq(pick(), pick()); break;
            default: a = fo_truth(rng.below(2) == 0); break;
            }
            if (rng.below(3) == 0) a = fo_neg(a);
            if (rank > 0 && rng.below(2) == 0) {
                FoPtr b = gen(vars, rank);
                return rng.below(2) == 0 ? fo_conj(a, b) : fo_disj(a, b);
            }
            return a;
        }
        std::string v = "v" + std::to_string(vars.size());
        vars.push_back(v);
        FoPtr body = gen(vars, rank - 1);
        vars.pop_back();
        return rng.below(2) == 0 ? fo_exists(v, body) : fo_forall(v, body);
    };
    for (int i = 0; i < count; ++i) {
        std::vector<std::string> vars;
        int rank = 1 + static_cast<int>(rng.below(k));
        out.push_back(gen(vars, rank));
    }
    return out;
}

// ---------------------------------------------------------------- mutation

namespace {

// rebuilds the tree; `hit` fires once at the first applicable site
struct Mutator {
    Mutation op;
    bool done = false;

    FormulaPtr rename_in(const FormulaPtr& f, const Variable& from, const Variable& to) {
        switch (f->kind) {
        case Formula::Kind::truth:
            return f;
        case Formula::Kind::colour:
            return f->a == from ? mk_colour(f->colour_name, to) : f;
        case Formula::Kind::edge:
            return mk_edge(f->a == from ? to : f->a, f->b == from ? to : f->b);
        case Formula::Kind::cmp:
            return mk_cmp(f->a == from ? to : f->a, f->cmp, f->b == from ? to : f->b);
        case Formula::Kind::neg:
            return mk_neg(rename_in(f->lhs, from, to));
        case Formula::Kind::conj:
            return mk_conj(rename_in(f->lhs, from, to), rename_in(f->rhs, from, to));
        case Formula::Kind::disj:
            return mk_disj(rename_in(f->lhs, from, to), rename_in(f->rhs, from, to));
        case Formula::Kind::exists: {
            if (f->var == from) return f; // shadowed
            auto body = rename_in(f->body, from, to);
            return f->guard_index ? mk_exists_guarded(f->var, *f->guard_index, body)
                                  : mk_exists(f->var, body);
        }
        }
        return f;
    }

    FormulaPtr walk(const FormulaPtr& f, const IndexSet& s) {
        if (done) return f;
        switch (f->kind) {
        case Formula::Kind::truth:
        case Formula::Kind::colour:
        case Formula::Kind::edge:
        case Formula::Kind::cmp:
            return f;
        case Formula::Kind::neg:
            return mk_neg(walk(f->lhs, s));
        case Formula::Kind::conj:
            return mk_conj(walk(f->lhs, s), walk(f->rhs, s));
        case Formula::Kind::disj:
            return mk_disj(walk(f->lhs, s), walk(f->rhs, s));
        case Formula::Kind::exists: {
            IndexSet s2 = s;
            s2.insert(f->var.word, f->var.index);
            switch (op) {
            case Mutation::break_guard:
                if (f->guard_index) {
                    done = true;
                    return mk_exists_guarded(f->var, f->var.index + 1, f->body);
                }
                break;
            case Mutation::break_namespace:
                if (f->guard_index) {
                    done = true;
                    Variable to{f->var.word, f->var.index + 5};
                    return mk_exists_guarded(to, *f->guard_index,
                                             rename_in(f->body, f->var, to));
                }
                break;
            case Mutation::cross_cluster_edge:
                if (!f->var.word.empty() && f->var.index == 0) {
                    std::string parent = f->var.word.substr(0, f->var.word.size() - 1);
                    if (s.contains(parent, 0)) {
                        done = true;
                        return mk_exists(f->var,
                                         mk_conj(mk_edge(f->var, Variable{parent, 0}), f->body));
                    }
                }
                break;
            case Mutation::cross_cluster_equality:
                if (!f->var.word.empty() && f->var.index >= 1) {
                    std::string parent = f->var.word.substr(0, f->var.word.size() - 1);
                    if (s.contains(parent, 0)) {
                        done = true;
                        auto extra = mk_cmp(f->var, Cmp::eq, Variable{parent, 0});
                        auto body = mk_conj(extra, f->body);
                        return f->guard_index ? mk_exists_guarded(f->var, *f->guard_index, body)
                                              : mk_exists(f->var, body);
                    }
                }
                break;
            case Mutation::skip_continuation_index:
                if (f->guard_index) {
                    done = true;
                    Variable to{f->var.word, f->var.index + 1};
                    return mk_exists_guarded(to, *f->guard_index,
                                             rename_in(f->body, f->var, to));
                }
                break;
            case Mutation::root_intro_nonempty:
                if (!s.empty()) {
                    done = true;
                    return f->guard_index
                               ? mk_exists_guarded(f->var, *f->guard_index,
                                                   mk_exists(Variable{"", 0}, f->body))
                               : mk_exists(f->var, mk_exists(Variable{"", 0}, f->body));
                }
                break;
            }
            auto body = walk(f->body, s2);
            return f->guard_index ? mk_exists_guarded(f->var, *f->guard_index, body)
                                  : mk_exists(f->var, body);
        }
        }
        return f;
    }
};

} // namespace

std::optional<FormulaPtr> mutate_sentence(const FormulaPtr& sentence, Mutation op) {
    Mutator m{op};
    FormulaPtr out = m.walk(sentence, IndexSet{});
    if (!m.done) return std::nullopt;
    return out;
}

} // namespace cfo::corpus
