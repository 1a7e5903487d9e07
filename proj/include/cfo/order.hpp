#ifndef CFO_ORDER_HPP
#define CFO_ORDER_HPP

#include "cfo/context.hpp"
#include "cfo/graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cfo {

// Segment layout of a (k,F)-order. Segments are indexed left to right:
//   X, (LU_1, LN_1), ..., (LU_{k^2}, LN_{k^2}), LN_{k^2+1..2k^2},
//   J, RN_{2k^2..k^2+1}, (RN_{k^2}, RU_{k^2}), ..., (RN_1, RU_1)
// which is 6k^2+2 parts in total.
struct SegmentLayout {
    int k = 0;

    int count() const { return 6 * k * k + 2; }
    // canonical names, by global segment position
    std::string name(int seg) const;
    int index_of(const std::string& name) const;
    int jungle() const { return 3 * k * k + 1; } // position of J
    // global position of LU_i / RU_i / LN_i / RN_i
    int lu(int i) const;
    int ln(int i) const;
    int ru(int i) const;
    int rn(int i) const;
    bool is_left_universal(int seg, int* i = nullptr) const;
    bool is_right_universal(int seg, int* i = nullptr) const;
    // context depth placed in universal segment index i (1-based): tier j for
    // jk+1 <= i <= jk+k
    int tier_of(int i) const { return (i - 1) / k; }
    // the safety part S^{k-r} covers X and L_i/R_i for i <= (k-r)k
    bool in_safety(int seg, int level) const; // level = k-r
};

struct KfOrder {
    int k = 0;
    SegmentLayout layout;
    std::vector<int> segment_of;     // vertex -> segment position
    std::vector<int> by_rank;        // the induced total order
    std::vector<int> rank;           // vertex -> rank
    // builder metadata
    long long border_size = 0;       // |A \ J|
    std::map<int, std::vector<std::pair<int, int>>> placed; // seg -> (context id, centre)

    int n() const { return static_cast<int>(segment_of.size()); }
    OrderedGraph ordered(const ColouredGraph& g) const { return OrderedGraph(g, by_rank); }
    int segment_distance(int u, int v) const;
    std::vector<int> safety_part(int r) const; // S^{k-r}, sorted vertex ids
    bool in_safety_part(int v, int r) const;
};

struct order_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PropertyReport {
    bool universality = true;
    bool extremality = true;        // X == rare set, the construction's filling rule
    bool extremality_inclusion = true; // rare set subseteq X, the definitional reading
    bool contraction = true;
    bool tameness = true;
    bool refinement = true;
    std::vector<std::string> witnesses;
    bool all_true() const {
        return universality && extremality && contraction && tameness && refinement;
    }
    std::string str() const;
};

struct BuildReport {
    FrequentTypeSet freq;
    std::vector<std::vector<int>> tier_contexts; // tier j -> context ids placed
    bool tiers_complete = true;                  // synthesis completeness flag
    long long m_used = 0;
    int r_used = 0;
    PropertyReport check;
};

struct BuildResult {
    KfOrder order;
    BuildReport report;
};

enum class ContextSource { synthesized, realised_seeded };

struct BuildPlan {
    FrequentTypeSet freq;
    std::vector<std::vector<int>> tiers;
    bool tiers_complete = true;
    long long m = 0;
    int r = 0;
};

// Frequency analysis and tier-context enumeration, iterated until the
// witness demand stabilises. With relax_m the demand is the actual element
// count of the placements instead of the bc-bound times the context count.
BuildPlan plan_kf_order(ContextStore& store, const ColouredGraph& g, int k, bool relax_m = false);

// Construction per the four filling steps: rare vertices into X, one
// occurrence of every tier context into each universal segment (assembled
// from scattered witnesses), neighbourhood closures into the buffering
// segments, everything else into the jungle. The checker runs before
// returning.
BuildResult build_kf_order(ContextStore& store, const ColouredGraph& g, int k,
                           ContextSource source = ContextSource::synthesized,
                           bool relax_m = false);

PropertyReport check_kf_order(ContextStore& store, const ColouredGraph& g, const KfOrder& o,
                              const FrequentTypeSet& freq,
                              const std::vector<std::vector<int>>& tier_contexts);

struct BorderBijection {
    std::map<int, int> map; // A-vertex -> B-vertex over A \ J^A
};

// Transfers the order along phi: every named part maps through phi, the
// jungle is the complement ordered by ascending id. Validates that phi is a
// border-preserving bijection and re-checks the result.
BuildResult transfer_order(ContextStore& store, const ColouredGraph& ga, const KfOrder& oa,
                           const BuildReport& ra, const ColouredGraph& gb,
                           const BorderBijection& phi);

struct BijectionSearchStats {
    long long nodes = 0;
    long long cap = 0;
    bool capped = false;
};

// Backtracking search for an injection of A's border into B that is a graph
// isomorphism onto its image and leaves a viable jungle. Returns the
// lexicographically least solution.
std::optional<BorderBijection> find_border_bijection(const ColouredGraph& ga, const KfOrder& oa,
                                                     const FrequentTypeSet& freq,
                                                     const ColouredGraph& gb,
                                                     long long node_cap = 2'000'000,
                                                     BijectionSearchStats* stats = nullptr);

// order-file serialisation: an `order` line plus `segment <name> <id>*` lines
std::string save_order_file(const KfOrder& o);
KfOrder load_order_file(const std::string& text, int n);

} // namespace cfo

#endif
