#ifndef CFO_EVALUATOR_HPP
#define CFO_EVALUATOR_HPP

#include "cfo/formula.hpp"
#include "cfo/graph.hpp"

#include <map>
#include <optional>
#include <vector>

namespace cfo {

struct eval_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Valuation = std::map<Variable, int>;

// Domain of the valuation must be X_S for a valid S, and every x_w^i with
// i > 0 must be mapped to a neighbour of some x_w^j, j < i.
bool valuation_consistent(const OrderedGraph& og, const Valuation& v);

struct EvalOptions {
    // When true, guarded continuations iterate over the guard vertex's
    // adjacency list; when false they range over all vertices and evaluate
    // the guard atom like any conjunct. Same outputs, different code paths.
    bool prerestrict_guards = true;
    // Skip revalidation of the formula (callers that already validated).
    bool assume_validated = false;
};

// Reference semantics: structural recursion with explicit environments, no
// memoisation. This is the oracle the rest of the toolkit is checked against.
bool evaluate(const OrderedGraph& og, const Valuation& v, const FormulaPtr& f,
              const EvalOptions& opts = {});

bool evaluate_sentence(const OrderedGraph& og, const FormulaPtr& f,
                       const EvalOptions& opts = {});

struct InvarianceVerdict {
    bool invariant = true;
    std::optional<std::pair<std::vector<int>, std::vector<int>>> witness; // orders by rank
    long long orders_tested = 0;
    enum class Mode { exhaustive, sampled } mode = Mode::exhaustive;
    bool value = false; // truth value when invariant
};

// Evaluates the sentence under every one of the n! orders. Guarded to n <= 8
// unless force is set. The witness, when present, is the lexicographically
// least disagreeing pair of orders.
InvarianceVerdict check_invariance_exhaustive(const ColouredGraph& g, const FormulaPtr& f,
                                              bool force = false);

InvarianceVerdict check_invariance_sampled(const ColouredGraph& g, const FormulaPtr& f,
                                           int trials, uint64_t seed);

struct CorpusVerdict {
    bool agree = true;
    std::optional<FormulaPtr> distinguishing;
    std::optional<size_t> index;
};

CorpusVerdict agree_on_corpus(const OrderedGraph& a, const OrderedGraph& b,
                              const std::vector<FormulaPtr>& corpus);

} // namespace cfo

#endif
