#include "cfo/fo.hpp"

#include <algorithm>
#include <functional>

namespace cfo::fo {

namespace {
std::shared_ptr<FoFormula> node(FoFormula::Kind k) {
    auto f = std::make_shared<FoFormula>();
    f->kind = k;
    return f;
}
} // namespace

FoPtr fo_truth(bool v) {
    auto f = node(FoFormula::Kind::truth);
    f->value = v;
    return f;
}
FoPtr fo_colour(const std::string& name, const std::string& x) {
    auto f = node(FoFormula::Kind::colour);
    f->colour_name = name;
    f->x = x;
    return f;
}
FoPtr fo_edge(const std::string& x, const std::string& y) {
    auto f = node(FoFormula::Kind::edge);
    f->x = x;
    f->y = y;
    return f;
}
FoPtr fo_eq(const std::string& x, const std::string& y) {
    auto f = node(FoFormula::Kind::eq);
    f->x = x;
    f->y = y;
    return f;
}
FoPtr fo_less(const std::string& x, const std::string& y) {
    auto f = node(FoFormula::Kind::less);
    f->x = x;
    f->y = y;
    return f;
}
FoPtr fo_neg(FoPtr x) {
    auto f = node(FoFormula::Kind::neg);
    f->lhs = std::move(x);
    return f;
}
FoPtr fo_conj(FoPtr l, FoPtr r) {
    auto f = node(FoFormula::Kind::conj);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}
FoPtr fo_disj(FoPtr l, FoPtr r) {
    auto f = node(FoFormula::Kind::disj);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}
FoPtr fo_impl(FoPtr l, FoPtr r) { return fo_disj(fo_neg(std::move(l)), std::move(r)); }
FoPtr fo_exists(const std::string& v, FoPtr body) {
    auto f = node(FoFormula::Kind::exists);
    f->var = v;
    f->body = std::move(body);
    return f;
}
FoPtr fo_forall(const std::string& v, FoPtr body) {
    auto f = node(FoFormula::Kind::forall);
    f->var = v;
    f->body = std::move(body);
    return f;
}

bool uses_order(const FoPtr& f) {
    switch (f->kind) {
    case FoFormula::Kind::less:
        return true;
    case FoFormula::Kind::neg:
        return uses_order(f->lhs);
    case FoFormula::Kind::conj:
    case FoFormula::Kind::disj:
        return uses_order(f->lhs) || uses_order(f->rhs);
    case FoFormula::Kind::exists:
    case FoFormula::Kind::forall:
        return uses_order(f->body);
    default:
        return false;
    }
}

int fo_quantifier_rank(const FoPtr& f) {
    switch (f->kind) {
    case FoFormula::Kind::neg:
        return fo_quantifier_rank(f->lhs);
    case FoFormula::Kind::conj:
    case FoFormula::Kind::disj:
        return std::max(fo_quantifier_rank(f->lhs), fo_quantifier_rank(f->rhs));
    case FoFormula::Kind::exists:
    case FoFormula::Kind::forall:
        return 1 + fo_quantifier_rank(f->body);
    default:
        return 0;
    }
}

std::string fo_print(const FoPtr& f) {
    switch (f->kind) {
    case FoFormula::Kind::truth:
        return f->value ? "true" : "false";
    case FoFormula::Kind::colour:
        return f->colour_name + "(" + f->x + ")";
    case FoFormula::Kind::edge:
        return "E(" + f->x + "," + f->y + ")";
    case FoFormula::Kind::eq:
        return "(" + f->x + " = " + f->y + ")";
    case FoFormula::Kind::less:
        return "(" + f->x + " < " + f->y + ")";
    case FoFormula::Kind::neg:
        return "!" + fo_print(f->lhs);
    case FoFormula::Kind::conj:
        return "(" + fo_print(f->lhs) + " & " + fo_print(f->rhs) + ")";
    case FoFormula::Kind::disj:
        return "(" + fo_print(f->lhs) + " | " + fo_print(f->rhs) + ")";
    case FoFormula::Kind::exists:
        return "exists " + f->var + " . (" + fo_print(f->body) + ")";
    case FoFormula::Kind::forall:
        return "forall " + f->var + " . (" + fo_print(f->body) + ")";
    }
    return "?";
}

bool fo_evaluate(const OrderedGraph& og, const FoPtr& f, std::map<std::string, int> env) {
    std::function<bool(const FoPtr&, std::map<std::string, int>&)> go =
        [&](const FoPtr& node, std::map<std::string, int>& e) -> bool {
        auto lookup = [&](const std::string& v) -> int {
            auto it = e.find(v);
            if (it == e.end()) throw formula_error("unbound FO variable: " + v);
            return it->second;
        };
        switch (node->kind) {
        case FoFormula::Kind::truth:
            return node->value;
        case FoFormula::Kind::colour: {
            auto c = og.graph.colour_index(node->colour_name);
            if (!c) return false;
            return og.graph.has_colour(lookup(node->x), *c);
        }
        case FoFormula::Kind::edge:
            return og.graph.adjacent(lookup(node->x), lookup(node->y));
        case FoFormula::Kind::eq:
            return lookup(node->x) == lookup(node->y);
        case FoFormula::Kind::less:
            return og.less(lookup(node->x), lookup(node->y));
        case FoFormula::Kind::neg:
            return !go(node->lhs, e);
        case FoFormula::Kind::conj:
            return go(node->lhs, e) && go(node->rhs, e);
        case FoFormula::Kind::disj:
            return go(node->lhs, e) || go(node->rhs, e);
        case FoFormula::Kind::exists: {
            auto it = e.find(node->var);
            bool had = it != e.end();
            int old = had ? it->second : 0;
            for (int v = 0; v < og.n(); ++v) {
                e[node->var] = v;
                bool r = go(node->body, e);
                if (r) {
                    if (had) e[node->var] = old; else e.erase(node->var);
                    return true;
                }
            }
            if (had) e[node->var] = old; else e.erase(node->var);
            return false;
        }
        case FoFormula::Kind::forall: {
            auto it = e.find(node->var);
            bool had = it != e.end();
            int old = had ? it->second : 0;
            for (int v = 0; v < og.n(); ++v) {
                e[node->var] = v;
                bool r = go(node->body, e);
                if (!r) {
                    if (had) e[node->var] = old; else e.erase(node->var);
                    return false;
                }
            }
            if (had) e[node->var] = old; else e.erase(node->var);
            return true;
        }
        }
        return false;
    };
    return go(f, env);
}

// ------------------------------------------------- bounded-diameter FO->CFO

namespace {

FoPtr dualise(const FoPtr& f) {
    switch (f->kind) {
    case FoFormula::Kind::forall:
        return fo_neg(fo_exists(f->var, fo_neg(dualise(f->body))));
    case FoFormula::Kind::exists:
        return fo_exists(f->var, dualise(f->body));
    case FoFormula::Kind::neg:
        return fo_neg(dualise(f->lhs));
    case FoFormula::Kind::conj:
        return fo_conj(dualise(f->lhs), dualise(f->rhs));
    case FoFormula::Kind::disj:
        return fo_disj(dualise(f->lhs), dualise(f->rhs));
    default:
        return f;
    }
}

Variable eps_var(int i) { return Variable{"", i}; }

// env maps FO variable names to root-cluster indices; `used` is the largest
// index introduced on this branch so far.
FormulaPtr translate(const FoPtr& f, std::map<std::string, int> env, int used, int diameter) {
    switch (f->kind) {
    case FoFormula::Kind::truth:
        return mk_truth(f->value);
    case FoFormula::Kind::colour:
        return mk_colour(f->colour_name, eps_var(env.at(f->x)));
    case FoFormula::Kind::edge:
        return mk_edge(eps_var(env.at(f->x)), eps_var(env.at(f->y)));
    case FoFormula::Kind::eq:
        return mk_cmp(eps_var(env.at(f->x)), Cmp::eq, eps_var(env.at(f->y)));
    case FoFormula::Kind::less:
        throw formula_error("bounded-diameter translation is undefined for order atoms");
    case FoFormula::Kind::neg:
        return mk_neg(translate(f->lhs, env, used, diameter));
    case FoFormula::Kind::conj: {
        FormulaPtr l = translate(f->lhs, env, used, diameter);
        return mk_conj(std::move(l), translate(f->rhs, env, used, diameter));
    }
    case FoFormula::Kind::disj: {
        FormulaPtr l = translate(f->lhs, env, used, diameter);
        return mk_disj(std::move(l), translate(f->rhs, env, used, diameter));
    }
    case FoFormula::Kind::exists: {
        // one disjunct per guard-chain length j = 0..diameter; the chain
        // starts at the root and the last variable plays the FO variable
        std::vector<FormulaPtr> disjuncts;
        for (int j = 0; j <= diameter; ++j) {
            auto env2 = env;
            env2[f->var] = j == 0 ? 0 : used + j;
            FormulaPtr inner = translate(f->body, env2, used + j, diameter);
            for (int step = j; step >= 1; --step) {
                int idx = used + step;
                int guard = step == 1 ? 0 : idx - 1;
                inner = mk_exists_guarded(eps_var(idx), guard, inner);
            }
            disjuncts.push_back(inner);
        }
        return mk_disj_all(disjuncts);
    }
    case FoFormula::Kind::forall:
        throw formula_error("translate: universal quantifier should have been dualised");
    }
    return mk_truth(false);
}

} // namespace

FormulaPtr fo_to_cfo_bounded_diameter(const FoPtr& sentence, int diameter) {
    if (uses_order(sentence))
        throw formula_error("bounded-diameter translation is undefined for order atoms");
    if (diameter < 0) throw formula_error("diameter must be non-negative");
    FoPtr ex = dualise(sentence);
    FormulaPtr body = translate(ex, {}, 0, diameter);
    return mk_exists(eps_var(0), body);
}

// ----------------------------------------------------- root relativization

namespace {

FormulaPtr relativize(const FoPtr& f, std::map<std::string, int> env, int depth) {
    switch (f->kind) {
    case FoFormula::Kind::truth:
        return mk_truth(f->value);
    case FoFormula::Kind::colour:
        return mk_colour(f->colour_name, eps_var(env.at(f->x)));
    case FoFormula::Kind::edge:
        return mk_edge(eps_var(env.at(f->x)), eps_var(env.at(f->y)));
    case FoFormula::Kind::eq:
        return mk_cmp(eps_var(env.at(f->x)), Cmp::eq, eps_var(env.at(f->y)));
    case FoFormula::Kind::less:
        return mk_cmp(eps_var(env.at(f->x)), Cmp::lt, eps_var(env.at(f->y)));
    case FoFormula::Kind::neg:
        return mk_neg(relativize(f->lhs, env, depth));
    case FoFormula::Kind::conj:
        return mk_conj(relativize(f->lhs, env, depth), relativize(f->rhs, env, depth));
    case FoFormula::Kind::disj:
        return mk_disj(relativize(f->lhs, env, depth), relativize(f->rhs, env, depth));
    case FoFormula::Kind::exists: {
        int idx = depth + 1;
        auto env2 = env;
        env2[f->var] = idx;
        return mk_exists_guarded(eps_var(idx), 0, relativize(f->body, env2, depth + 1));
    }
    case FoFormula::Kind::forall: {
        int idx = depth + 1;
        auto env2 = env;
        env2[f->var] = idx;
        return mk_forall_guarded(eps_var(idx), 0, relativize(f->body, env2, depth + 1));
    }
    }
    return mk_truth(false);
}

} // namespace

FormulaPtr relativize_to_root(const FoPtr& sentence) {
    return relativize(sentence, {}, 0);
}

} // namespace cfo::fo
