#include "cfo/mc.hpp"

#include "cfo/bits.hpp"
#include "cfo/evaluator.hpp"

#include <chrono>

namespace cfo {

// ------------------------------------------------------------ decomposition

namespace {

int decompose_rec(const FormulaPtr& f, TopDecomposition& out) {
    TopDecomposition::Node node;
    switch (f->kind) {
    case Formula::Kind::truth:
        node.kind = TopDecomposition::Kind::constant;
        node.value = f->value;
        break;
    case Formula::Kind::exists:
        if (!(f->var == Variable{"", 0}))
            throw mc_error("sentence decomposition hit a non-root quantifier");
        node.kind = TopDecomposition::Kind::leaf;
        node.leaf = f;
        break;
    case Formula::Kind::neg:
        node.kind = TopDecomposition::Kind::neg;
        node.lhs = decompose_rec(f->lhs, out);
        break;
    case Formula::Kind::conj:
    case Formula::Kind::disj:
        node.kind = f->kind == Formula::Kind::conj ? TopDecomposition::Kind::conj
                                                   : TopDecomposition::Kind::disj;
        node.lhs = decompose_rec(f->lhs, out);
        node.rhs = decompose_rec(f->rhs, out);
        break;
    default:
        throw mc_error("sentence decomposition hit a free atom");
    }
    out.nodes.push_back(node);
    int id = static_cast<int>(out.nodes.size()) - 1;
    if (node.kind == TopDecomposition::Kind::leaf) out.leaves.push_back(id);
    return id;
}

} // namespace

TopDecomposition decompose_top(const FormulaPtr& sentence) {
    TopDecomposition out;
    out.root = decompose_rec(sentence, out);
    return out;
}

// ----------------------------------------------------------------- pointed

PointedBall pointed_from_context(const ContextStore& store, int ctx_id) {
    const auto& d = store.data(ctx_id);
    PointedBall out;
    out.ctx = ctx_id;
    if (d.depth == 0) {
        out.m = 1;
        out.centre = 0;
        out.colours = {d.colour0};
        out.adj.assign(1, std::vector<bool>(1, false));
        return out;
    }
    out.m = d.m;
    out.centre = d.centre;
    out.colours = d.colours;
    out.adj.assign(d.m, std::vector<bool>(d.m, false));
    for (auto [a, b] : d.edges) out.adj[a][b] = out.adj[b][a] = true;
    return out;
}

// --------------------------------------------------------------------- mc

namespace {

struct McMachine {
    const ContextStore& store;
    const ColouredGraph& schema; // colour-name table only

    bool colour_atom(const McFrame& fr, const std::string& name, const Variable& v) const {
        auto c = schema.colour_index(name);
        if (!c) return false; // empty predicate
        const auto& ball = fr.pointed.at(v.word);
        return (ball.colours.at(ball.constants.at(v.index)) >> *c) & 1;
    }

    bool edge_atom(const McFrame& fr, const Variable& a, const Variable& b) const {
        if (a.word != b.word) throw mc_error("edge atom across clusters reached mc");
        const auto& ball = fr.pointed.at(a.word);
        return ball.adj.at(ball.constants.at(a.index)).at(ball.constants.at(b.index));
    }

    static bool is_child_of(const Variable& x, const std::string& w) {
        return x.index == 0 && !x.word.empty() && x.word.substr(0, x.word.size() - 1) == w;
    }

    bool cmp_atom(const McFrame& fr, const Variable& a, Cmp op, const Variable& b) const {
        if (a.word == b.word) {
            const auto& ball = fr.pointed.at(a.word);
            int pa = ball.constants.at(a.index), pb = ball.constants.at(b.index);
            switch (op) {
            case Cmp::lt: return pa < pb;
            case Cmp::eq: return pa == pb;
            case Cmp::gt: return pa > pb;
            }
        }
        // cross-cluster: one side is the root of a child cluster
        if (is_child_of(b, a.word)) {
            Cmp flipped = op == Cmp::lt ? Cmp::gt : op == Cmp::gt ? Cmp::lt : Cmp::eq;
            return cmp_atom(fr, b, flipped, a);
        }
        if (!is_child_of(a, b.word)) throw mc_error("cross-cluster comparison reached mc");
        const std::string& w = b.word;
        const auto& ball = fr.pointed.at(w);
        int pb = ball.constants.at(b.index);
        char letter = a.word.back();
        auto slot = fr.h.at(w).of_child.find(std::string(1, letter));
        if (slot == fr.h.at(w).of_child.end()) throw mc_error("child root missing from h");
        auto [kind, t] = slot->second;
        if (kind == 'e') {
            switch (op) {
            case Cmp::lt: return t < pb;
            case Cmp::eq: return t == pb;
            case Cmp::gt: return t > pb;
            }
        }
        // gap t lies strictly between positions t-1 and t
        switch (op) {
        case Cmp::lt: return t <= pb;
        case Cmp::eq: return false;
        case Cmp::gt: return t > pb;
        }
        return false;
    }

    bool run(const McFrame& fr, const FormulaPtr& f) const {
        switch (f->kind) {
        case Formula::Kind::truth:
            return f->value;
        case Formula::Kind::colour:
            return colour_atom(fr, f->colour_name, f->a);
        case Formula::Kind::edge:
            return edge_atom(fr, f->a, f->b);
        case Formula::Kind::cmp:
            return cmp_atom(fr, f->a, f->cmp, f->b);
        case Formula::Kind::neg:
            return !run(fr, f->lhs);
        case Formula::Kind::conj:
            return run(fr, f->lhs) && run(fr, f->rhs);
        case Formula::Kind::disj:
            return run(fr, f->lhs) || run(fr, f->rhs);
        case Formula::Kind::exists:
            return f->guard_index ? continuation(fr, f) : introduction(fr, f);
        }
        return false;
    }

    bool continuation(const McFrame& fr, const FormulaPtr& f) const {
        const std::string& w = f->var.word;
        const auto& ball = fr.pointed.at(w);
        int guard_pos = ball.constants.at(*f->guard_index);
        for (int e = 0; e < ball.m; ++e) {
            if (!ball.adj[guard_pos][e]) continue;
            McFrame next = fr;
            next.s.insert(w, f->var.index);
            next.pointed[w].constants[f->var.index] = e;
            if (run(next, f->body)) return true;
        }
        return false;
    }

    bool introduction(const McFrame& fr, const FormulaPtr& f) const {
        const std::string& child = f->var.word;
        if (child.empty()) throw mc_error("root introduction inside mc");
        std::string w = child.substr(0, child.size() - 1);
        std::string letter(1, child.back());
        int outer_id = fr.outer.at(w);
        const auto& d = store.data(outer_id);

        auto attempt = [&](int sub_ctx, char kind, int slot) {
            McFrame next = fr;
            next.s.insert(child, 0);
            next.outer[child] = sub_ctx;
            PointedBall pb = pointed_from_context(store, sub_ctx);
            pb.constants[0] = pb.centre;
            next.pointed[child] = std::move(pb);
            next.h[child] = SlotAssignment{};
            next.h[w].of_child[letter] = {kind, slot};
            return run(next, f->body);
        };

        if (d.depth == 0) {
            // a depth-0 cluster ball: single element, no recorded sub-data;
            // validated sentences never introduce below it
            return false;
        }
        // gap slots: the outer context records m+1 of them
        for (int t = 0; t < static_cast<int>(d.f.size()); ++t)
            for (int sub : d.f[t])
                if (attempt(sub, 'g', t)) return true;
        // element slots
        for (int p = 0; p < d.m; ++p)
            if (attempt(d.g[p], 'e', p)) return true;
        return false;
    }
};

} // namespace

bool mc(const ContextStore& store, const ColouredGraph& schema, const McFrame& frame,
        const FormulaPtr& formula) {
    McMachine m{store, schema};
    return m.run(frame, formula);
}

// ------------------------------------------------------------------ driver

namespace {

bool run_driver(ContextStore& store, const ColouredGraph& g, const TopDecomposition& top,
                const std::vector<int>& order, int k, FptResult& result) {
    using clock = std::chrono::steady_clock;
    OrderedGraph og(g, order);

    auto t0 = clock::now();
    RealisedContexts rc = realised_contexts(store, og, std::max(0, k - 1), true);
    auto t1 = clock::now();
    result.context_ms += std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    result.realised_outer = static_cast<int>(rc.realised.size());

    std::vector<bool> leaf_values(top.nodes.size(), false);
    for (int leaf : top.leaves) {
        const FormulaPtr& f = top.nodes[leaf].leaf;
        bool value = false;
        for (int o : rc.realised) {
            McFrame frame;
            frame.s.insert("", 0);
            frame.outer[""] = o;
            PointedBall pb = pointed_from_context(store, o);
            pb.constants[0] = pb.centre;
            frame.pointed[""] = std::move(pb);
            frame.h[""] = SlotAssignment{};
            if (mc(store, g, frame, f->body)) {
                value = true;
                break;
            }
        }
        leaf_values[leaf] = value;
    }
    auto t2 = clock::now();
    result.mc_ms += std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count();

    std::vector<bool> value(top.nodes.size(), false);
    for (size_t i = 0; i < top.nodes.size(); ++i) {
        const auto& n = top.nodes[i];
        switch (n.kind) {
        case TopDecomposition::Kind::constant: value[i] = n.value; break;
        case TopDecomposition::Kind::leaf: value[i] = leaf_values[i]; break;
        case TopDecomposition::Kind::neg: value[i] = !value[n.lhs]; break;
        case TopDecomposition::Kind::conj: value[i] = value[n.lhs] && value[n.rhs]; break;
        case TopDecomposition::Kind::disj: value[i] = value[n.lhs] || value[n.rhs]; break;
        }
    }
    return value[top.root];
}

} // namespace

FptResult fpt_check_detail(ContextStore& store, const ColouredGraph& g, const FormulaPtr& f,
                           bool paranoid, uint64_t paranoid_seed) {
    auto report = validate_sentence(f);
    if (!report.ok) throw mc_error("fpt-check requires a valid sentence:\n" + report.str());
    int k = quantifier_rank(f);
    TopDecomposition top = decompose_top(f);

    FptResult result;
    result.value = run_driver(store, g, top, identity_order(g.n()), k, result);
    if (paranoid && g.n() > 1) {
        SplitMix64 rng(paranoid_seed);
        std::vector<int> order = identity_order(g.n());
        rng.shuffle(order);
        FptResult second;
        bool other = run_driver(store, g, top, order, k, second);
        result.paranoid_agreed = other == result.value;
    }
    return result;
}

bool fpt_check(ContextStore& store, const ColouredGraph& g, const FormulaPtr& f) {
    return fpt_check_detail(store, g, f).value;
}

} // namespace cfo
