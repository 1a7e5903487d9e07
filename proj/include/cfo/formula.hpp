#ifndef CFO_FORMULA_HPP
#define CFO_FORMULA_HPP

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfo {

// Cluster variable x_w^i. The empty word (written `eps` in the surface
// syntax) is the root cluster.
struct Variable {
    std::string word;
    int index = 0;
    auto operator<=>(const Variable&) const = default;
    std::string str() const;
};

// Valid set of (word, index) pairs: downward closed in the index and closed
// under word prefixes at index 0.
struct IndexSet {
    std::set<std::pair<std::string, int>> entries;

    bool contains(const std::string& w, int i) const { return entries.count({w, i}) > 0; }
    bool contains(const Variable& v) const { return contains(v.word, v.index); }
    void insert(const std::string& w, int i) { entries.insert({w, i}); }
    bool empty() const { return entries.empty(); }
    bool valid() const;
    IndexSet closure() const;
    int smallest_unused_index(const std::string& w) const;
    std::string str() const;
    auto operator<=>(const IndexSet&) const = default;
};

enum class Cmp { lt, eq, gt };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// CFO AST. Universal quantifiers are parser sugar and are stored desugared
// as !exists ... !body, so negation/conjunction/disjunction/exists are the
// only connective kinds. A continuation quantifier carries its guard.
struct Formula {
    enum class Kind { truth, colour, edge, cmp, neg, conj, disj, exists };

    Kind kind;
    bool value = false;                  // truth
    std::string colour_name;             // colour
    Variable a, b;                       // colour uses a; edge/cmp use a,b
    Cmp cmp = Cmp::eq;                   // cmp
    FormulaPtr lhs, rhs;                 // neg uses lhs; conj/disj use both
    Variable var;                        // exists
    std::optional<int> guard_index;      // exists: continuation guard x_w^j
    FormulaPtr body;                     // exists
};

FormulaPtr mk_truth(bool v);
FormulaPtr mk_colour(const std::string& name, Variable v);
FormulaPtr mk_edge(Variable a, Variable b);
FormulaPtr mk_cmp(Variable a, Cmp c, Variable b);
FormulaPtr mk_neg(FormulaPtr f);
FormulaPtr mk_conj(FormulaPtr l, FormulaPtr r);
FormulaPtr mk_disj(FormulaPtr l, FormulaPtr r);
FormulaPtr mk_exists(Variable v, FormulaPtr body);
FormulaPtr mk_exists_guarded(Variable v, int guard_index, FormulaPtr body);
FormulaPtr mk_forall(Variable v, FormulaPtr body);                   // !exists v !body
FormulaPtr mk_forall_guarded(Variable v, int guard, FormulaPtr b);   // !exists v adj g !b
FormulaPtr mk_conj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr mk_disj_all(const std::vector<FormulaPtr>& fs);

bool formula_equal(const FormulaPtr& x, const FormulaPtr& y);

struct formula_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Surface syntax (see README for the grammar). Throws parse_error-style
// formula_error with a position on bad input.
FormulaPtr parse_formula(const std::string& text);
std::string print_formula(const FormulaPtr& f);

int quantifier_rank(const FormulaPtr& f);
IndexSet free_index_set(const FormulaPtr& f);

struct Violation {
    std::string rule;
    std::string path; // dotted child indices from the root
    std::string message;
    bool warning = false;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations; // errors only
    std::vector<Violation> warnings;
    std::string str() const;
};

// Structural validation under an ambient index set: quantifier forms, the
// cluster discipline on atoms, continuation indices, and (for sentences) the
// i <= k-|w|-1 namespace bound. The namespace bound is a warning for open
// formulas.
ValidationReport validate(const FormulaPtr& f, const IndexSet& ambient,
                          const std::vector<std::string>* colour_schema = nullptr);

ValidationReport validate_sentence(const FormulaPtr& f,
                                   const std::vector<std::string>* colour_schema = nullptr);

} // namespace cfo

#endif
