#ifndef CFO_MC_HPP
#define CFO_MC_HPP

#include "cfo/context.hpp"
#include "cfo/formula.hpp"
#include "cfo/graph.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace cfo {

struct mc_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Boolean-combination tree over the maximal root-introduction subsentences.
struct TopDecomposition {
    enum class Kind { leaf, constant, neg, conj, disj };
    struct Node {
        Kind kind;
        bool value = false;          // constant
        FormulaPtr leaf;             // leaf: an exists-x[eps,0] subsentence
        int lhs = -1, rhs = -1;
    };
    std::vector<Node> nodes;
    int root = -1;
    std::vector<int> leaves; // node indices
};

TopDecomposition decompose_top(const FormulaPtr& sentence);

// Pointed ball structure carved out of an outer context, with the named
// constants c_w^i placed on ball positions.
struct PointedBall {
    int ctx = -1; // the outer context it came from
    int m = 0;
    int centre = 0;
    std::vector<uint64_t> colours;
    std::vector<std::vector<bool>> adj;
    std::map<int, int> constants; // index i -> ball position
};

PointedBall pointed_from_context(const ContextStore& store, int ctx_id);

// Slot assignment of child-cluster roots relative to a cluster's ball:
// element slots are ball positions, gap slots are 0..m with 0 leftmost.
struct SlotAssignment {
    std::map<std::string, std::pair<char, int>> of_child; // letter word suffix -> ('e'|'g', slot)
};

struct McFrame {
    IndexSet s;
    std::map<std::string, int> outer;          // w -> outer-context id
    std::map<std::string, PointedBall> pointed;
    std::map<std::string, SlotAssignment> h;
};

// The recursive model-checking procedure: answers whether the formula holds
// under any valuation consistent with the frame data. Exact for every
// formula, not only invariant ones.
bool mc(const ContextStore& store, const ColouredGraph& schema, const McFrame& frame,
        const FormulaPtr& formula);

struct FptResult {
    bool value = false;
    long long context_ms = 0;
    long long mc_ms = 0;
    int realised_outer = 0;
    bool paranoid_agreed = true;
};

// Fixes the ascending id order, computes the realised outer (k-1)-contexts,
// and answers each root-introduction leaf by scanning them through mc. Equal
// to naive evaluation under the id order for every sentence; equal to the
// graph-level truth exactly when the sentence is order-invariant. The
// paranoid mode cross-checks one random order.
FptResult fpt_check_detail(ContextStore& store, const ColouredGraph& g, const FormulaPtr& f,
                           bool paranoid = false, uint64_t paranoid_seed = 1);

bool fpt_check(ContextStore& store, const ColouredGraph& g, const FormulaPtr& f);

} // namespace cfo

#endif
