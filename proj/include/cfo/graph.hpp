#ifndef CFO_GRAPH_HPP
#define CFO_GRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfo {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct graph_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Loopless undirected vertex-coloured graph. Vertices are dense ids 0..n-1;
// a vertex may carry any subset of the declared colours (one bit each, at
// most 64 colours). Immutable once built, safe to share across threads.
class ColouredGraph {
public:
    ColouredGraph() = default;
    explicit ColouredGraph(int n) : n_(n), colour_of_(n, 0), adj_(n) {}

    int n() const { return n_; }
    int colour_count() const { return static_cast<int>(colour_names_.size()); }
    const std::vector<std::string>& colour_names() const { return colour_names_; }

    int declare_colour(const std::string& name);
    std::optional<int> colour_index(const std::string& name) const;

    void set_colour(int v, int colour);
    uint64_t colour_mask(int v) const { check_vertex(v); return colour_of_[v]; }
    bool has_colour(int v, int colour) const { check_vertex(v); return (colour_of_[v] >> colour) & 1; }

    void add_edge(int u, int v);
    bool adjacent(int u, int v) const;
    const std::vector<int>& neighbours(int v) const { check_vertex(v); return adj_[v]; }
    int degree(int v) const { check_vertex(v); return static_cast<int>(adj_[v].size()); }
    int max_degree() const;
    int edge_count() const;

    void check_vertex(int v) const {
        if (v < 0 || v >= n_) throw graph_error("vertex out of range: " + std::to_string(v));
    }

private:
    int n_ = 0;
    std::vector<std::string> colour_names_;
    std::vector<uint64_t> colour_of_;
    std::vector<std::vector<int>> adj_; // sorted
};

// A graph together with a linear order on its vertices. `rank[v]` is the
// position of v (rank 0 = smallest); `by_rank` lists vertices smallest first.
struct OrderedGraph {
    ColouredGraph graph;
    std::vector<int> rank;    // vertex -> position
    std::vector<int> by_rank; // position -> vertex

    OrderedGraph() = default;
    OrderedGraph(ColouredGraph g, std::vector<int> order_by_rank);

    int n() const { return graph.n(); }
    bool less(int u, int v) const { return rank[u] < rank[v]; }

    static OrderedGraph with_id_order(ColouredGraph g);
};

std::vector<int> identity_order(int n);

// Result of loading a graph file: the graph plus the optional `order` line.
struct GraphFile {
    ColouredGraph graph;
    std::optional<std::vector<int>> order; // by rank, smallest first
    std::map<std::string, int> label_to_id;
};

GraphFile load_graph_file(const std::string& text);
ColouredGraph load_graph(const std::string& text);
std::string save_graph(const ColouredGraph& g, const std::vector<int>* order_by_rank = nullptr);

// BFS distances from v, -1 where unreachable.
std::vector<int> bfs_distances(const ColouredGraph& g, int v, int cap = -1);

// N^r(v): all vertices at distance <= r, sorted by id.
std::vector<int> ball(const ColouredGraph& g, int v, int r);

// Canonical code of the pointed r-ball around v: equal codes iff the pointed
// balls are isomorphic. Colour/degree/distance refinement plus backtracking
// over the first non-singleton cell; exact, not fast, fine for small balls.
struct NeighbourhoodType {
    std::string canonical_code;
    auto operator<=>(const NeighbourhoodType&) const = default;
};

NeighbourhoodType pointed_type(const ColouredGraph& g, int v, int r);

struct TypeCensus {
    int radius = 0;
    std::map<NeighbourhoodType, int> counts;
    int total() const;
};

TypeCensus type_census(const ColouredGraph& g, int k);

bool threshold_equivalent(const ColouredGraph& g1, const ColouredGraph& g2, int k, long long t);

// Relation selection for partial-isomorphism checks.
struct Relations {
    bool edge = true;
    bool order = false;
    bool colours = true;
    bool equality = true;
};

// pairs maps vertices of g1 to vertices of g2. For the selected relations all
// atomic facts must be preserved in both directions; if `equality` is
// selected the pairs must form a partial injection.
bool is_partial_isomorphism(const OrderedGraph& g1, const OrderedGraph& g2,
                            const std::vector<std::pair<int, int>>& pairs,
                            const Relations& rel);

} // namespace cfo

#endif
