#include "cfo/evaluator.hpp"

#include "cfo/bits.hpp"

#include <algorithm>
#include <map>

namespace cfo {

bool valuation_consistent(const OrderedGraph& og, const Valuation& val) {
    IndexSet s;
    for (const auto& [v, vertex] : val) {
        og.graph.check_vertex(vertex);
        s.insert(v.word, v.index);
    }
    if (!s.valid()) return false;
    for (const auto& [v, vertex] : val) {
        if (v.index == 0) continue;
        bool ok = false;
        for (int j = 0; j < v.index && !ok; ++j) {
            auto it = val.find(Variable{v.word, j});
            if (it != val.end() && og.graph.adjacent(vertex, it->second)) ok = true;
        }
        if (!ok) return false;
    }
    return true;
}

namespace {

// The reference semantics is a plain structural recursion, but variable
// lookup through string-keyed maps dominates at desk scale, so formulas are
// compiled once per evaluation into a compact node array with variables
// resolved to environment slots. Colour atoms whose name the graph does not
// declare denote the empty predicate.
struct CompiledFormula {
    struct Node {
        Formula::Kind kind;
        bool value = false;
        int colour = -1; // -1: empty predicate
        int a = -1, b = -1;
        Cmp cmp = Cmp::eq;
        int lhs = -1, rhs = -1;
        int var = -1, guard = -1; // slots; guard -1 when unguarded
        int body = -1;
    };
    std::vector<Node> nodes;
    int root = -1;
    std::map<Variable, int> slots;

    int slot(const Variable& v) {
        auto it = slots.find(v);
        if (it != slots.end()) return it->second;
        int s = static_cast<int>(slots.size());
        slots.emplace(v, s);
        return s;
    }

    int compile(const FormulaPtr& f, const ColouredGraph& g) {
        Node n;
        n.kind = f->kind;
        switch (f->kind) {
        case Formula::Kind::truth:
            n.value = f->value;
            break;
        case Formula::Kind::colour: {
            auto c = g.colour_index(f->colour_name);
            n.colour = c ? *c : -1;
            n.a = slot(f->a);
            break;
        }
        case Formula::Kind::edge:
        case Formula::Kind::cmp:
            n.a = slot(f->a);
            n.b = slot(f->b);
            n.cmp = f->cmp;
            break;
        case Formula::Kind::neg:
            n.lhs = compile(f->lhs, g);
            break;
        case Formula::Kind::conj:
        case Formula::Kind::disj:
            n.lhs = compile(f->lhs, g);
            n.rhs = compile(f->rhs, g);
            break;
        case Formula::Kind::exists:
            n.var = slot(f->var);
            if (f->guard_index) n.guard = slot(Variable{f->var.word, *f->guard_index});
            n.body = compile(f->body, g);
            break;
        }
        nodes.push_back(n);
        return static_cast<int>(nodes.size()) - 1;
    }
};

struct Machine {
    const OrderedGraph& og;
    const CompiledFormula& cf;
    bool prerestrict;
    std::vector<int> env; // slot -> vertex, -1 unbound

    bool run(int idx) {
        const auto& n = cf.nodes[idx];
        switch (n.kind) {
        case Formula::Kind::truth:
            return n.value;
        case Formula::Kind::colour:
            return n.colour >= 0 && og.graph.has_colour(need(n.a), n.colour);
        case Formula::Kind::edge:
            return og.graph.adjacent(need(n.a), need(n.b));
        case Formula::Kind::cmp: {
            int x = need(n.a), y = need(n.b);
            switch (n.cmp) {
            case Cmp::lt: return og.less(x, y);
            case Cmp::eq: return x == y;
            case Cmp::gt: return og.less(y, x);
            }
            return false;
        }
        case Formula::Kind::neg:
            return !run(n.lhs);
        case Formula::Kind::conj:
            return run(n.lhs) && run(n.rhs);
        case Formula::Kind::disj:
            return run(n.lhs) || run(n.rhs);
        case Formula::Kind::exists: {
            int saved = env[n.var];
            bool found = false;
            if (n.guard >= 0 && prerestrict) {
                for (int v : og.graph.neighbours(need(n.guard))) {
                    env[n.var] = v;
                    if (run(n.body)) {
                        found = true;
                        break;
                    }
                }
            } else {
                int guard_vertex = n.guard >= 0 ? need(n.guard) : -1;
                for (int v = 0; v < og.n(); ++v) {
                    // unrestricted range; the guard atom acts as a conjunct
                    if (n.guard >= 0 && !og.graph.adjacent(v, guard_vertex)) continue;
                    env[n.var] = v;
                    if (run(n.body)) {
                        found = true;
                        break;
                    }
                }
            }
            env[n.var] = saved;
            return found;
        }
        }
        return false;
    }

    int need(int s) {
        int v = env[s];
        if (v < 0) throw eval_error("unbound variable during evaluation");
        return v;
    }
};

} // namespace

bool evaluate(const OrderedGraph& og, const Valuation& val, const FormulaPtr& f,
              const EvalOptions& opts) {
    if (!opts.assume_validated) {
        IndexSet s = free_index_set(f);
        ValidationReport r = validate(f, s);
        if (!r.ok) throw eval_error("formula does not validate:\n" + r.str());
        for (const auto& [w, i] : s.entries)
            if (!val.count(Variable{w, i}))
                throw eval_error("valuation misses free variable " + Variable{w, i}.str());
        if (!valuation_consistent(og, val)) throw eval_error("valuation is not consistent");
    }
    CompiledFormula cf;
    cf.root = cf.compile(f, og.graph);
    Machine m{og, cf, opts.prerestrict_guards, std::vector<int>(cf.slots.size(), -1)};
    for (const auto& [v, vertex] : val) {
        auto it = cf.slots.find(v);
        if (it != cf.slots.end()) m.env[it->second] = vertex;
    }
    return m.run(cf.root);
}

bool evaluate_sentence(const OrderedGraph& og, const FormulaPtr& f, const EvalOptions& opts) {
    return evaluate(og, {}, f, opts);
}

namespace {

void sentence_precheck(const FormulaPtr& f) {
    if (!free_index_set(f).empty()) throw eval_error("invariance check requires a sentence");
}

} // namespace

InvarianceVerdict check_invariance_exhaustive(const ColouredGraph& g, const FormulaPtr& f,
                                              bool force) {
    sentence_precheck(f);
    int n = g.n();
    if (n > 8 && !force) throw eval_error("exhaustive invariance guarded to n <= 8 (use force)");
    InvarianceVerdict out;
    out.mode = InvarianceVerdict::Mode::exhaustive;
    EvalOptions opts;
    std::vector<int> perm = identity_order(n);
    bool first = true, first_value = false;
    std::vector<int> first_order;
    do {
        bool val = evaluate_sentence(OrderedGraph(g, perm), f, opts);
        ++out.orders_tested;
        if (first) {
            first = false;
            first_value = val;
            first_order = perm;
            opts.assume_validated = true;
        } else if (val != first_value) {
            out.invariant = false;
            out.witness = {first_order, perm};
            return out;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.invariant = true;
    out.value = first_value;
    return out;
}

InvarianceVerdict check_invariance_sampled(const ColouredGraph& g, const FormulaPtr& f,
                                           int trials, uint64_t seed) {
    sentence_precheck(f);
    if (trials < 2) throw eval_error("sampled invariance needs trials >= 2");
    InvarianceVerdict out;
    out.mode = InvarianceVerdict::Mode::sampled;
    SplitMix64 rng(seed);
    EvalOptions opts;
    std::vector<std::pair<std::vector<int>, bool>> results;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> perm = identity_order(g.n());
        rng.shuffle(perm);
        bool val = evaluate_sentence(OrderedGraph(g, perm), f, opts);
        opts.assume_validated = true;
        results.push_back({std::move(perm), val});
        ++out.orders_tested;
    }
    // the witness, if any, is the lexicographically least disagreeing pair
    std::sort(results.begin(), results.end());
    for (size_t i = 1; i < results.size(); ++i)
        if (results[i].second != results[0].second) {
            out.invariant = false;
            out.witness = {results[0].first, results[i].first};
            return out;
        }
    out.invariant = true;
    out.value = results.empty() ? false : results[0].second;
    return out;
}

CorpusVerdict agree_on_corpus(const OrderedGraph& a, const OrderedGraph& b,
                              const std::vector<FormulaPtr>& corpus) {
    CorpusVerdict out;
    for (size_t i = 0; i < corpus.size(); ++i) {
        bool va = evaluate_sentence(a, corpus[i]);
        bool vb = evaluate_sentence(b, corpus[i]);
        if (va != vb) {
            out.agree = false;
            out.distinguishing = corpus[i];
            out.index = i;
            return out;
        }
    }
    return out;
}

} // namespace cfo
