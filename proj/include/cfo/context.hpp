#ifndef CFO_CONTEXT_HPP
#define CFO_CONTEXT_HPP

#include "cfo/bits.hpp"
#include "cfo/graph.hpp"

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace cfo {

// Interning store for canonical contexts. A k-context is the order-restricted
// k-ball of a vertex (vertices renamed 0..m-1 by rank), the (k-1)-context of
// every ball member (g), and the set of (k-1)-contexts realised in each order
// gap between rank-consecutive ball members (f). Outer contexts additionally
// carry the leftmost and rightmost infinite gaps, and their nested
// descriptions are themselves outer. Equality is id equality within a store;
// digests are structural and stable across stores and runs.
class ContextStore {
public:
    struct Data {
        int depth = 0;
        bool outer = false;     // depth 0 is normalised to inner
        uint64_t colour0 = 0;   // depth 0 payload
        int m = 0;              // ball size
        int centre = -1;        // centre position by rank
        std::vector<uint64_t> colours;          // by position
        std::vector<std::pair<int, int>> edges; // sorted position pairs
        std::vector<int> g;                     // child id per position
        std::vector<std::vector<int>> f;        // sorted child-id set per gap
    };

    int intern(Data d);
    const Data& data(int id) const { return nodes_.at(id); }
    const std::string& code(int id) const { return codes_.at(id); }
    Digest128 digest(int id) const { return digests_.at(id); }
    int size() const { return static_cast<int>(nodes_.size()); }

    // forget the two outer gaps, recursively demoting nested descriptions
    int demote(int id);

private:
    std::vector<Data> nodes_;
    std::vector<std::string> codes_;
    std::vector<Digest128> digests_;
    std::unordered_map<std::string, int> by_code_;
    std::unordered_map<int, int> demoted_;
};

// Per-vertex recursion; the independent counterpart of the level-wise maps.
int context_of(ContextStore& store, const OrderedGraph& og, int v, int k);
int outer_context_of(ContextStore& store, const OrderedGraph& og, int v, int k);

// E^k(v): the ball plus, recursively, the elements of the (k-1)-contexts of
// every vertex lying in an inner gap of the ball. Sorted vertex ids.
std::vector<int> context_elements(const OrderedGraph& og, int v, int k);

struct RealisedContexts {
    int depth = 0;
    bool outer = false;
    std::vector<int> of_vertex;        // vertex -> context id
    std::vector<int> realised;         // distinct ids, sorted
    // maps for every level below, of_vertex[j][v]
    std::vector<std::vector<int>> levels;
};

// Level-by-level computation of all (outer) j-contexts for j <= k; each level
// reuses the full previous level, one linear pass over the order per vertex.
// Quadratic in n for bounded degree.
RealisedContexts realised_contexts(ContextStore& store, const OrderedGraph& og, int k, bool outer);

struct FrequentTypeSet {
    int k = 0;
    int m = 0, r = 0;
    long long threshold = 0;
    long long rare_mass = 0; // number of rare-type vertices
    std::set<NeighbourhoodType> frequent;
    std::map<NeighbourhoodType, std::vector<int>> witnesses;
    std::vector<int> rare_vertices; // sorted
    bool is_frequent(const NeighbourhoodType& t) const { return frequent.count(t) > 0; }
};

struct richness_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative threshold search with the conservative greedy bound
// (s + m * #types) * maxball(r) + m, then greedy witness selection (delete a
// radius-r ball around every pick and around every rare vertex) and a BFS
// verification of all separation requirements. Throws richness_error when no
// type ends up frequent or selection fails.
FrequentTypeSet frequent_types(const ColouredGraph& g, int k, int m, int r);

struct SynthesisResult {
    std::vector<int> contexts; // sorted ids
    bool complete = false;
};

// All j-contexts realisable with the neighbourhood types of F. Complete for
// j <= 1; for deeper levels the gap-set powersets explode, so enumeration
// stops at the budget and the result is flagged truncated (seeds are always
// included).
SynthesisResult synthesize_contexts(ContextStore& store, const FrequentTypeSet& F, int j,
                                    long long budget, const std::vector<int>& realised_seed = {});

struct ContextBounds {
    BigUint nc; // upper bound on the number of realisable k-contexts
    BigUint bc; // upper bound on the size of a minimally realised k-context
};

ContextBounds context_bounds(int k, int d, int colour_count);

} // namespace cfo

#endif
