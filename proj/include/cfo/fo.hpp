#ifndef CFO_FO_HPP
#define CFO_FO_HPP

#include "cfo/formula.hpp"
#include "cfo/graph.hpp"

#include <map>
#include <memory>
#include <string>

namespace cfo::fo {

// Plain first-order formulas over {E, colours, =, <} with named variables.
// This is the reference FO world: inputs to the FO->CFO translations and the
// independent oracle the translation tests evaluate against.
struct FoFormula;
using FoPtr = std::shared_ptr<const FoFormula>;

struct FoFormula {
    enum class Kind { truth, colour, edge, eq, less, neg, conj, disj, exists, forall };
    Kind kind;
    bool value = false;
    std::string colour_name;
    std::string x, y;   // atom variables
    FoPtr lhs, rhs;
    std::string var;    // quantifiers
    FoPtr body;
};

FoPtr fo_truth(bool v);
FoPtr fo_colour(const std::string& name, const std::string& x);
FoPtr fo_edge(const std::string& x, const std::string& y);
FoPtr fo_eq(const std::string& x, const std::string& y);
FoPtr fo_less(const std::string& x, const std::string& y);
FoPtr fo_neg(FoPtr f);
FoPtr fo_conj(FoPtr l, FoPtr r);
FoPtr fo_disj(FoPtr l, FoPtr r);
FoPtr fo_impl(FoPtr l, FoPtr r);
FoPtr fo_exists(const std::string& v, FoPtr body);
FoPtr fo_forall(const std::string& v, FoPtr body);

bool uses_order(const FoPtr& f);
int fo_quantifier_rank(const FoPtr& f);
std::string fo_print(const FoPtr& f);

// Direct recursive FO satisfaction; the oracle for the translations.
bool fo_evaluate(const OrderedGraph& og, const FoPtr& f,
                 std::map<std::string, int> env = {});

// Bounded-diameter translation: prepend an introduction of the root variable
// and replace each existential by the disjunction over guard chains from the
// root of length 0..diameter. Requires an order-free sentence; universal
// quantifiers are dualised first. Structures are assumed non-empty.
FormulaPtr fo_to_cfo_bounded_diameter(const FoPtr& sentence, int diameter);

// Relativization into the root cluster: each quantifier on the way in picks
// the smallest fresh x_eps^i, guarded by an edge to x_eps^0. The result has
// x_eps^0 free. Order atoms are allowed.
FormulaPtr relativize_to_root(const FoPtr& sentence);

} // namespace cfo::fo

#endif
