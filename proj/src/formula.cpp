#include "cfo/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace cfo {

std::string Variable::str() const {
    return "x[" + (word.empty() ? std::string("eps") : word) + "," + std::to_string(index) + "]";
}

bool IndexSet::valid() const {
    for (const auto& [w, i] : entries) {
        for (int j = 0; j < i; ++j)
            if (!contains(w, j)) return false;
        if (!w.empty()) {
            std::string parent = w.substr(0, w.size() - 1);
            if (!contains(parent, 0)) return false;
        }
    }
    return true;
}

IndexSet IndexSet::closure() const {
    IndexSet out = *this;
    bool changed = true;
    while (changed) {
        changed = false;
        auto snapshot = out.entries;
        for (const auto& [w, i] : snapshot) {
            for (int j = 0; j < i; ++j)
                if (!out.contains(w, j)) {
                    out.insert(w, j);
                    changed = true;
                }
            if (!w.empty()) {
                std::string parent = w.substr(0, w.size() - 1);
                if (!out.contains(parent, 0)) {
                    out.insert(parent, 0);
                    changed = true;
                }
            }
        }
    }
    return out;
}

int IndexSet::smallest_unused_index(const std::string& w) const {
    int i = 0;
    while (contains(w, i)) ++i;
    return i;
}

std::string IndexSet::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [w, i] : entries) {
        if (!first) out += ",";
        first = false;
        out += "(" + (w.empty() ? std::string("eps") : w) + "," + std::to_string(i) + ")";
    }
    return out + "}";
}

namespace {
std::shared_ptr<Formula> node(Formula::Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}
} // namespace

FormulaPtr mk_truth(bool v) {
    auto f = node(Formula::Kind::truth);
    f->value = v;
    return f;
}
FormulaPtr mk_colour(const std::string& name, Variable v) {
    auto f = node(Formula::Kind::colour);
    f->colour_name = name;
    f->a = std::move(v);
    return f;
}
FormulaPtr mk_edge(Variable a, Variable b) {
    auto f = node(Formula::Kind::edge);
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
}
FormulaPtr mk_cmp(Variable a, Cmp c, Variable b) {
    auto f = node(Formula::Kind::cmp);
    f->a = std::move(a);
    f->b = std::move(b);
    f->cmp = c;
    return f;
}
FormulaPtr mk_neg(FormulaPtr x) {
    auto f = node(Formula::Kind::neg);
    f->lhs = std::move(x);
    return f;
}
FormulaPtr mk_conj(FormulaPtr l, FormulaPtr r) {
    auto f = node(Formula::Kind::conj);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}
FormulaPtr mk_disj(FormulaPtr l, FormulaPtr r) {
    auto f = node(Formula::Kind::disj);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}
FormulaPtr mk_exists(Variable v, FormulaPtr body) {
    auto f = node(Formula::Kind::exists);
    f->var = std::move(v);
    f->body = std::move(body);
    return f;
}
FormulaPtr mk_exists_guarded(Variable v, int guard_index, FormulaPtr body) {
    auto f = node(Formula::Kind::exists);
    f->var = std::move(v);
    f->guard_index = guard_index;
    f->body = std::move(body);
    return f;
}
FormulaPtr mk_forall(Variable v, FormulaPtr body) {
    return mk_neg(mk_exists(std::move(v), mk_neg(std::move(body))));
}
FormulaPtr mk_forall_guarded(Variable v, int guard, FormulaPtr b) {
    return mk_neg(mk_exists_guarded(std::move(v), guard, mk_neg(std::move(b))));
}
FormulaPtr mk_conj_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_truth(true);
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = mk_conj(acc, fs[i]);
    return acc;
}
FormulaPtr mk_disj_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return mk_truth(false);
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = mk_disj(acc, fs[i]);
    return acc;
}

bool formula_equal(const FormulaPtr& x, const FormulaPtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case Formula::Kind::truth:
        return x->value == y->value;
    case Formula::Kind::colour:
        return x->colour_name == y->colour_name && x->a == y->a;
    case Formula::Kind::edge:
        return x->a == y->a && x->b == y->b;
    case Formula::Kind::cmp:
        return x->a == y->a && x->b == y->b && x->cmp == y->cmp;
    case Formula::Kind::neg:
        return formula_equal(x->lhs, y->lhs);
    case Formula::Kind::conj:
    case Formula::Kind::disj:
        return formula_equal(x->lhs, y->lhs) && formula_equal(x->rhs, y->rhs);
    case Formula::Kind::exists:
        return x->var == y->var && x->guard_index == y->guard_index &&
               formula_equal(x->body, y->body);
    }
    return false;
}

// ---------------------------------------------------------------- parser

namespace {

struct Parser {
    const std::string& src;
    size_t pos = 0;

    explicit Parser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw formula_error("formula syntax error at offset " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < src.size() && isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(const std::string& tok) {
        skip_ws();
        if (src.compare(pos, tok.size(), tok) == 0) {
            // keywords must not run into identifier characters
            if (isalpha(static_cast<unsigned char>(tok[0]))) {
                size_t end = pos + tok.size();
                if (end < src.size() && (isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
                    return false;
            }
            pos += tok.size();
            return true;
        }
        return false;
    }

    void expect(const std::string& tok) {
        if (!eat(tok)) fail("expected '" + tok + "'");
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && (isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected identifier");
        return src.substr(start, pos - start);
    }

    int nat() {
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start) fail("expected number");
        return std::stoi(src.substr(start, pos - start));
    }

    Variable var() {
        expect("x");
        expect("[");
        skip_ws();
        size_t start = pos;
        while (pos < src.size() && islower(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start) fail("expected cluster word");
        std::string w = src.substr(start, pos - start);
        if (w == "eps") w.clear();
        expect(",");
        int i = nat();
        expect("]");
        return Variable{w, i};
    }

    bool peek_var() {
        skip_ws();
        return pos + 1 < src.size() && src[pos] == 'x' && src[pos + 1] == '[';
    }

    FormulaPtr formula() {
        skip_ws();
        if (eat("exists")) return quant(false);
        if (eat("forall")) return quant(true);
        return boolean();
    }

    FormulaPtr quant(bool universal) {
        Variable v = var();
        std::optional<int> guard;
        if (eat("adj")) {
            Variable g = var();
            if (g.word != v.word)
                fail("guard variable must be in cluster '" + (v.word.empty() ? "eps" : v.word) + "'");
            guard = g.index;
        }
        expect(".");
        FormulaPtr body = formula();
        if (universal) {
            if (guard) return mk_forall_guarded(v, *guard, body);
            return mk_forall(v, body);
        }
        if (guard) return mk_exists_guarded(v, *guard, body);
        return mk_exists(v, body);
    }

    // precedence: ! > & > | > ->, binary ops left-associative
    FormulaPtr boolean() { return impl(); }

    FormulaPtr impl() {
        FormulaPtr l = disj();
        while (eat("->")) {
            FormulaPtr r = disj();
            l = mk_disj(mk_neg(l), r);
        }
        return l;
    }

    FormulaPtr disj() {
        FormulaPtr l = conj();
        while (true) {
            skip_ws();
            if (pos < src.size() && src[pos] == '|') {
                ++pos;
                l = mk_disj(l, conj());
            } else {
                return l;
            }
        }
    }

    FormulaPtr conj() {
        FormulaPtr l = unit();
        while (eat("&")) l = mk_conj(l, unit());
        return l;
    }

    FormulaPtr unit() {
        skip_ws();
        if (eat("!")) return mk_neg(unit());
        if (eat("(")) {
            FormulaPtr f = formula();
            expect(")");
            return f;
        }
        // a quantifier may close a boolean chain; its body extends maximally
        // to the right
        if (eat("exists")) return quant(false);
        if (eat("forall")) return quant(true);
        return atom();
    }

    FormulaPtr atom() {
        skip_ws();
        if (eat("true")) return mk_truth(true);
        if (eat("false")) return mk_truth(false);
        if (peek_var()) {
            Variable a = var();
            skip_ws();
            Cmp c;
            if (eat("<")) c = Cmp::lt;
            else if (eat("=")) c = Cmp::eq;
            else if (eat(">")) c = Cmp::gt;
            else fail("expected comparison operator");
            Variable b = var();
            return mk_cmp(a, c, b);
        }
        std::string name = ident();
        expect("(");
        if (name == "E") {
            Variable a = var();
            expect(",");
            Variable b = var();
            expect(")");
            return mk_edge(a, b);
        }
        Variable a = var();
        expect(")");
        return mk_colour(name, a);
    }
};

} // namespace

FormulaPtr parse_formula(const std::string& text) {
    Parser p(text);
    FormulaPtr f = p.formula();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

namespace {
void print_rec(const FormulaPtr& f, std::string& out) {
    switch (f->kind) {
    case Formula::Kind::truth:
        out += f->value ? "true" : "false";
        return;
    case Formula::Kind::colour:
        out += f->colour_name + "(" + f->a.str() + ")";
        return;
    case Formula::Kind::edge:
        out += "E(" + f->a.str() + "," + f->b.str() + ")";
        return;
    case Formula::Kind::cmp:
        out += f->a.str();
        out += f->cmp == Cmp::lt ? " < " : f->cmp == Cmp::eq ? " = " : " > ";
        out += f->b.str();
        return;
    case Formula::Kind::neg:
        out += "!";
        if (f->lhs->kind == Formula::Kind::truth || f->lhs->kind == Formula::Kind::colour ||
            f->lhs->kind == Formula::Kind::edge || f->lhs->kind == Formula::Kind::neg) {
            print_rec(f->lhs, out);
        } else {
            out += "(";
            print_rec(f->lhs, out);
            out += ")";
        }
        return;
    case Formula::Kind::conj:
    case Formula::Kind::disj: {
        // a quantifier in operand position needs its own parentheses, or its
        // body would swallow the rest of the chain on reparse
        auto operand = [&](const FormulaPtr& g) {
            if (g->kind == Formula::Kind::exists) {
                out += "(";
                print_rec(g, out);
                out += ")";
            } else {
                print_rec(g, out);
            }
        };
        out += "(";
        operand(f->lhs);
        out += f->kind == Formula::Kind::conj ? " & " : " | ";
        operand(f->rhs);
        out += ")";
        return;
    }
    case Formula::Kind::exists:
        out += "exists " + f->var.str();
        if (f->guard_index) out += " adj " + Variable{f->var.word, *f->guard_index}.str();
        out += " . ";
        if (f->body->kind == Formula::Kind::exists) {
            print_rec(f->body, out);
        } else {
            out += "(";
            print_rec(f->body, out);
            out += ")";
        }
        return;
    }
}
} // namespace

std::string print_formula(const FormulaPtr& f) {
    std::string out;
    print_rec(f, out);
    return out;
}

int quantifier_rank(const FormulaPtr& f) {
    switch (f->kind) {
    case Formula::Kind::truth:
    case Formula::Kind::colour:
    case Formula::Kind::edge:
    case Formula::Kind::cmp:
        return 0;
    case Formula::Kind::neg:
        return quantifier_rank(f->lhs);
    case Formula::Kind::conj:
    case Formula::Kind::disj:
        return std::max(quantifier_rank(f->lhs), quantifier_rank(f->rhs));
    case Formula::Kind::exists:
        return 1 + quantifier_rank(f->body);
    }
    return 0;
}

namespace {
void collect_free(const FormulaPtr& f, std::set<Variable>& bound, std::set<Variable>& free) {
    switch (f->kind) {
    case Formula::Kind::truth:
        return;
    case Formula::Kind::colour:
        if (!bound.count(f->a)) free.insert(f->a);
        return;
    case Formula::Kind::edge:
    case Formula::Kind::cmp:
        if (!bound.count(f->a)) free.insert(f->a);
        if (!bound.count(f->b)) free.insert(f->b);
        return;
    case Formula::Kind::neg:
        collect_free(f->lhs, bound, free);
        return;
    case Formula::Kind::conj:
    case Formula::Kind::disj:
        collect_free(f->lhs, bound, free);
        collect_free(f->rhs, bound, free);
        return;
    case Formula::Kind::exists: {
        if (f->guard_index) {
            Variable g{f->var.word, *f->guard_index};
            if (!bound.count(g)) free.insert(g);
        }
        bool fresh = bound.insert(f->var).second;
        collect_free(f->body, bound, free);
        if (fresh) bound.erase(f->var);
        return;
    }
    }
}
} // namespace

IndexSet free_index_set(const FormulaPtr& f) {
    std::set<Variable> bound, free;
    collect_free(f, bound, free);
    IndexSet s;
    for (const auto& v : free) s.insert(v.word, v.index);
    return s.closure();
}

// ---------------------------------------------------------------- validate

namespace {

struct Validator {
    ValidationReport report;
    const std::vector<std::string>* schema;
    int sentence_rank = -1; // >= 0 when the formula is a sentence

    void add(const std::string& rule, const std::string& path, const std::string& msg,
             bool warning = false) {
        Violation v{rule, path, msg, warning};
        if (warning) {
            report.warnings.push_back(std::move(v));
        } else {
            report.ok = false;
            report.violations.push_back(std::move(v));
        }
    }

    void check_scope(const Variable& v, const IndexSet& s, const std::string& path) {
        if (!s.contains(v))
            add("atom.scope", path, "variable " + v.str() + " not in scope " + s.str());
    }

    void check_namespace(const Variable& v, const std::string& path) {
        int k = sentence_rank;
        if (k < 0) return;
        if (static_cast<int>(v.word.size()) + v.index > k - 1)
            add("ns.bound", path,
                "variable " + v.str() + " violates i <= k-|w|-1 for rank " + std::to_string(k),
                /*warning=*/false);
    }

    static bool parent_child_cmp(const Variable& x, const Variable& y) {
        // x = x^0_{w alpha}, y = x^i_w
        return x.index == 0 && !x.word.empty() && x.word.substr(0, x.word.size() - 1) == y.word;
    }

    void walk(const FormulaPtr& f, IndexSet s, const std::string& path) {
        switch (f->kind) {
        case Formula::Kind::truth:
            return;
        case Formula::Kind::colour:
            check_scope(f->a, s, path);
            check_namespace(f->a, path);
            if (schema && std::find(schema->begin(), schema->end(), f->colour_name) == schema->end())
                add("colour.unknown", path, "unknown colour name: " + f->colour_name);
            return;
        case Formula::Kind::edge:
            check_scope(f->a, s, path);
            check_scope(f->b, s, path);
            check_namespace(f->a, path);
            check_namespace(f->b, path);
            if (f->a.word != f->b.word)
                add("atom.edge.cross", path,
                    "edge atom across clusters: " + f->a.str() + ", " + f->b.str());
            return;
        case Formula::Kind::cmp:
            check_scope(f->a, s, path);
            check_scope(f->b, s, path);
            check_namespace(f->a, path);
            check_namespace(f->b, path);
            if (f->a.word != f->b.word && !parent_child_cmp(f->a, f->b) &&
                !parent_child_cmp(f->b, f->a))
                add("atom.cmp.cross", path,
                    "comparison across clusters is only allowed between x^0_{wa} and cluster w: " +
                        f->a.str() + ", " + f->b.str());
            return;
        case Formula::Kind::neg:
            walk(f->lhs, s, path + ".0");
            return;
        case Formula::Kind::conj:
        case Formula::Kind::disj:
            walk(f->lhs, s, path + ".0");
            walk(f->rhs, s, path + ".1");
            return;
        case Formula::Kind::exists: {
            const Variable& v = f->var;
            check_namespace(v, path);
            if (f->guard_index) {
                // guarded continuation
                if (v.index == 0)
                    add("quant.cont.index", path, "continuation cannot introduce index 0");
                if (!s.contains(v.word, *f->guard_index))
                    add("quant.cont.guard", path,
                        "guard " + Variable{v.word, *f->guard_index}.str() + " not in scope");
                int want = s.smallest_unused_index(v.word);
                if (v.index != want)
                    add("quant.cont.index", path,
                        "continuation must introduce the smallest unused index " +
                            std::to_string(want) + ", got " + std::to_string(v.index));
                if (v.word.empty() && !s.contains("", 0) && v.index > 0)
                    add("quant.cont.guard", path, "continuation before the cluster is open");
            } else if (v.word.empty()) {
                // root introduction
                if (v.index != 0)
                    add("quant.cont.guard", path, "introduction of " + v.str() + " must be guarded");
                if (!s.empty())
                    add("quant.root", path, "root introduction requires an empty index set");
            } else {
                // child-cluster introduction
                if (v.index != 0)
                    add("quant.cont.guard", path, "introduction of " + v.str() + " must be guarded");
                std::string parent = v.word.substr(0, v.word.size() - 1);
                if (!s.contains(parent, 0))
                    add("quant.child.parent", path,
                        "parent cluster (" + (parent.empty() ? "eps" : parent) + ",0) not in scope");
                if (s.contains(v.word, 0))
                    add("quant.child.dup", path, "cluster already open: " + v.str());
            }
            IndexSet s2 = s;
            s2.insert(v.word, v.index);
            walk(f->body, s2, path + ".0");
            return;
        }
        }
    }
};

} // namespace

ValidationReport validate(const FormulaPtr& f, const IndexSet& ambient,
                          const std::vector<std::string>* colour_schema) {
    Validator v;
    v.schema = colour_schema;
    if (!ambient.valid()) {
        v.add("ambient.invalid", "", "ambient index set is not valid: " + ambient.str());
        return v.report;
    }
    bool is_sentence = free_index_set(f).empty();
    if (is_sentence) v.sentence_rank = quantifier_rank(f);
    v.walk(f, ambient, "0");
    if (!is_sentence) {
        // namespace bound is only a lemma about sentences; report as warnings
        Validator w;
        w.schema = nullptr;
        w.sentence_rank = quantifier_rank(f);
        w.walk(f, ambient, "0");
        for (auto& viol : w.report.violations)
            if (viol.rule == "ns.bound") {
                viol.warning = true;
                v.report.warnings.push_back(viol);
            }
    }
    return v.report;
}

ValidationReport validate_sentence(const FormulaPtr& f,
                                   const std::vector<std::string>* colour_schema) {
    IndexSet s = free_index_set(f);
    if (!s.empty()) {
        ValidationReport r;
        r.ok = false;
        r.violations.push_back({"sentence.free", "0", "formula has free variables " + s.str(), false});
        return r;
    }
    return validate(f, IndexSet{}, colour_schema);
}

std::string ValidationReport::str() const {
    std::ostringstream out;
    for (const auto& v : violations)
        out << "RULE " << v.rule << " AT " << v.path << ": " << v.message << "\n";
    for (const auto& v : warnings)
        out << "WARN " << v.rule << " AT " << v.path << ": " << v.message << "\n";
    return out.str();
}

} // namespace cfo
