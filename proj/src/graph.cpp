#include "cfo/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace cfo {

int ColouredGraph::declare_colour(const std::string& name) {
    auto idx = colour_index(name);
    if (idx) return *idx;
    if (colour_names_.size() >= 64) throw graph_error("too many colours (max 64)");
    colour_names_.push_back(name);
    return static_cast<int>(colour_names_.size()) - 1;
}

std::optional<int> ColouredGraph::colour_index(const std::string& name) const {
    for (size_t i = 0; i < colour_names_.size(); ++i)
        if (colour_names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

void ColouredGraph::set_colour(int v, int colour) {
    check_vertex(v);
    if (colour < 0 || colour >= colour_count()) throw graph_error("colour index out of range");
    colour_of_[v] |= (1ULL << colour);
}

void ColouredGraph::add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw graph_error("self-loop forbidden on vertex " + std::to_string(u));
    if (adjacent(u, v)) return;
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
}

bool ColouredGraph::adjacent(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    int t = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), t);
}

int ColouredGraph::max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
}

int ColouredGraph::edge_count() const {
    int m = 0;
    for (int v = 0; v < n_; ++v) m += degree(v);
    return m / 2;
}

OrderedGraph::OrderedGraph(ColouredGraph g, std::vector<int> order_by_rank)
    : graph(std::move(g)), by_rank(std::move(order_by_rank)) {
    int n = graph.n();
    if (static_cast<int>(by_rank.size()) != n) throw graph_error("order does not cover all vertices");
    rank.assign(n, -1);
    for (int pos = 0; pos < n; ++pos) {
        int v = by_rank[pos];
        graph.check_vertex(v);
        if (rank[v] != -1) throw graph_error("order repeats vertex " + std::to_string(v));
        rank[v] = pos;
    }
}

OrderedGraph OrderedGraph::with_id_order(ColouredGraph g) {
    int n = g.n();
    return OrderedGraph(std::move(g), identity_order(n));
}

std::vector<int> identity_order(int n) {
    std::vector<int> o(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    return o;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

GraphFile load_graph_file(const std::string& text) {
    GraphFile out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    int n = 0;
    bool numeric_ids = false, label_ids = false;
    std::set<int> declared_nodes;

    auto fail = [&](const std::string& msg) {
        throw parse_error("graph file line " + std::to_string(lineno) + ": " + msg);
    };

    auto resolve = [&](const std::string& tok) -> int {
        if (is_number(tok)) {
            if (label_ids) fail("cannot mix numeric ids and labels");
            numeric_ids = true;
            long long v = std::stoll(tok);
            if (v >= n) fail("vertex id out of range: " + tok);
            return static_cast<int>(v);
        }
        if (numeric_ids) fail("cannot mix numeric ids and labels");
        label_ids = true;
        auto it = out.label_to_id.find(tok);
        if (it != out.label_to_id.end()) return it->second;
        int id = static_cast<int>(out.label_to_id.size());
        if (id >= n) fail("more labels than declared vertices: " + tok);
        out.label_to_id.emplace(tok, id);
        return id;
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "graph") {
            if (have_header) fail("duplicate graph header");
            if (toks.size() != 2 || !is_number(toks[1])) fail("expected 'graph <n>'");
            n = std::stoi(toks[1]);
            out.graph = ColouredGraph(n);
            have_header = true;
        } else if (!have_header) {
            fail("'graph <n>' header must come first");
        } else if (kw == "colors" || kw == "colours") {
            for (size_t i = 1; i < toks.size(); ++i) out.graph.declare_colour(toks[i]);
        } else if (kw == "node") {
            if (toks.size() < 2) fail("expected 'node <id> [colour]*'");
            int v = resolve(toks[1]);
            if (declared_nodes.count(v)) fail("duplicate vertex id: " + toks[1]);
            declared_nodes.insert(v);
            for (size_t i = 2; i < toks.size(); ++i) {
                auto c = out.graph.colour_index(toks[i]);
                if (!c) fail("unknown colour name: " + toks[i]);
                out.graph.set_colour(v, *c);
            }
        } else if (kw == "edge") {
            if (toks.size() != 3) fail("expected 'edge <u> <v>'");
            int u = resolve(toks[1]), v = resolve(toks[2]);
            if (u == v) fail("self-loop forbidden");
            out.graph.add_edge(u, v);
        } else if (kw == "order") {
            if (static_cast<int>(toks.size()) - 1 != n) fail("order line must list all vertices");
            std::vector<int> o;
            for (size_t i = 1; i < toks.size(); ++i) o.push_back(resolve(toks[i]));
            std::vector<bool> seen(n, false);
            for (int v : o) {
                if (seen[v]) fail("order repeats a vertex");
                seen[v] = true;
            }
            out.order = std::move(o);
        } else {
            fail("unknown directive: " + kw);
        }
    }
    if (!have_header) throw parse_error("graph file: missing 'graph <n>' header");
    return out;
}

ColouredGraph load_graph(const std::string& text) { return load_graph_file(text).graph; }

std::string save_graph(const ColouredGraph& g, const std::vector<int>* order_by_rank) {
    std::ostringstream out;
    out << "graph " << g.n() << "\n";
    if (g.colour_count() > 0) {
        out << "colors";
        for (const auto& c : g.colour_names()) out << " " << c;
        out << "\n";
    }
    for (int v = 0; v < g.n(); ++v) {
        if (g.colour_mask(v) == 0) continue;
        out << "node " << v;
        for (int c = 0; c < g.colour_count(); ++c)
            if (g.has_colour(v, c)) out << " " << g.colour_names()[c];
        out << "\n";
    }
    for (int u = 0; u < g.n(); ++u)
        for (int v : g.neighbours(u))
            if (u < v) out << "edge " << u << " " << v << "\n";
    if (order_by_rank) {
        out << "order";
        for (int v : *order_by_rank) out << " " << v;
        out << "\n";
    }
    return out.str();
}

std::vector<int> bfs_distances(const ColouredGraph& g, int v, int cap) {
    g.check_vertex(v);
    std::vector<int> dist(g.n(), -1);
    std::deque<int> q{v};
    dist[v] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        if (cap >= 0 && dist[u] >= cap) continue;
        for (int w : g.neighbours(u))
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

std::vector<int> ball(const ColouredGraph& g, int v, int r) {
    if (r < 0) throw graph_error("radius must be non-negative");
    auto dist = bfs_distances(g, v, r);
    std::vector<int> out;
    for (int u = 0; u < g.n(); ++u)
        if (dist[u] >= 0 && dist[u] <= r) out.push_back(u);
    return out;
}

namespace {

// Canonical labelling of a small pointed coloured graph. Vertex invariants
// start from (is-centre, colour mask, distance to centre, degree); cells are
// refined to a fixpoint by multiset of neighbour cells, then the first
// non-singleton cell is split by individualisation and the minimal code wins.
struct Canonicaliser {
    int m;
    std::vector<uint64_t> colour;
    std::vector<int> dist;
    std::vector<std::vector<int>> adj; // local indices, sorted
    std::string best;
    bool have_best = false;

    std::vector<int> refine(std::vector<int> cls) const {
        for (;;) {
            // signature: (class, sorted multiset of neighbour classes)
            std::vector<std::pair<std::vector<int>, int>> sig(m);
            for (int v = 0; v < m; ++v) {
                std::vector<int> s{cls[v]};
                std::vector<int> ns;
                for (int w : adj[v]) ns.push_back(cls[w]);
                std::sort(ns.begin(), ns.end());
                s.insert(s.end(), ns.begin(), ns.end());
                sig[v] = {std::move(s), v};
            }
            auto sorted = sig;
            std::sort(sorted.begin(), sorted.end());
            std::vector<int> next(m);
            int c = 0;
            for (int i = 0; i < m; ++i) {
                if (i > 0 && sorted[i].first != sorted[i - 1].first) ++c;
                next[sorted[i].second] = c;
            }
            if (next == cls) return cls;
            cls = std::move(next);
        }
    }

    std::string encode(const std::vector<int>& perm) const {
        // perm[i] = original local index placed at canonical position i
        std::vector<int> pos(m);
        for (int i = 0; i < m; ++i) pos[perm[i]] = i;
        std::string out;
        out += std::to_string(m);
        out += ';';
        for (int i = 0; i < m; ++i) {
            out += std::to_string(colour[perm[i]]);
            out += ',';
            out += std::to_string(dist[perm[i]]);
            out += ';';
        }
        for (int i = 0; i < m; ++i) {
            std::vector<int> later;
            for (int w : adj[perm[i]])
                if (pos[w] > i) later.push_back(pos[w]);
            std::sort(later.begin(), later.end());
            for (int p : later) {
                out += std::to_string(i);
                out += '-';
                out += std::to_string(p);
                out += ';';
            }
        }
        return out;
    }

    void search(std::vector<int> cls) {
        cls = refine(cls);
        // find first non-singleton cell (by class id)
        std::vector<std::vector<int>> members(m);
        for (int v = 0; v < m; ++v) members[cls[v]].push_back(v);
        int split = -1;
        for (int c = 0; c < m; ++c)
            if (members[c].size() > 1) {
                split = c;
                break;
            }
        if (split < 0) {
            std::vector<int> perm(m);
            for (int v = 0; v < m; ++v) perm[cls[v]] = v;
            std::string code = encode(perm);
            if (!have_best || code < best) {
                best = std::move(code);
                have_best = true;
            }
            return;
        }
        for (int v : members[split]) {
            auto next = cls;
            for (int u = 0; u < m; ++u)
                if (next[u] >= split && u != v) next[u]++;
            search(std::move(next));
        }
    }
};

} // namespace

NeighbourhoodType pointed_type(const ColouredGraph& g, int v, int r) {
    auto verts = ball(g, v, r);
    int m = static_cast<int>(verts.size());
    std::vector<int> local(g.n(), -1);
    for (int i = 0; i < m; ++i) local[verts[i]] = i;
    auto dist = bfs_distances(g, v, r);

    Canonicaliser c;
    c.m = m;
    c.colour.resize(m);
    c.dist.resize(m);
    c.adj.assign(m, {});
    for (int i = 0; i < m; ++i) {
        c.colour[i] = g.colour_mask(verts[i]);
        c.dist[i] = dist[verts[i]];
        for (int w : g.neighbours(verts[i]))
            if (local[w] >= 0) c.adj[i].push_back(local[w]);
    }
    // initial classes: centre alone, others by (colour, dist, degree); ids
    // compacted by sorting the invariant tuples
    std::vector<std::tuple<int, uint64_t, int, int, int>> inv(m);
    for (int i = 0; i < m; ++i)
        inv[i] = {c.dist[i] == 0 ? 0 : 1, c.colour[i], c.dist[i], static_cast<int>(c.adj[i].size()), i};
    auto sorted = inv;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> cls(m);
    int id = 0;
    for (int i = 0; i < m; ++i) {
        if (i > 0 && std::tie(std::get<0>(sorted[i]), std::get<1>(sorted[i]), std::get<2>(sorted[i]),
                              std::get<3>(sorted[i])) !=
                         std::tie(std::get<0>(sorted[i - 1]), std::get<1>(sorted[i - 1]),
                                  std::get<2>(sorted[i - 1]), std::get<3>(sorted[i - 1])))
            ++id;
        cls[std::get<4>(sorted[i])] = id;
    }
    c.search(std::move(cls));
    return NeighbourhoodType{c.best};
}

int TypeCensus::total() const {
    int s = 0;
    for (const auto& [t, c] : counts) s += c;
    return s;
}

TypeCensus type_census(const ColouredGraph& g, int k) {
    TypeCensus census;
    census.radius = k;
    for (int v = 0; v < g.n(); ++v) census.counts[pointed_type(g, v, k)]++;
    return census;
}

bool threshold_equivalent(const ColouredGraph& g1, const ColouredGraph& g2, int k, long long t) {
    if (t < 0) throw graph_error("threshold must be non-negative");
    auto c1 = type_census(g1, k), c2 = type_census(g2, k);
    std::set<NeighbourhoodType> all;
    for (const auto& [ty, c] : c1.counts) all.insert(ty);
    for (const auto& [ty, c] : c2.counts) all.insert(ty);
    for (const auto& ty : all) {
        long long a = c1.counts.count(ty) ? c1.counts.at(ty) : 0;
        long long b = c2.counts.count(ty) ? c2.counts.at(ty) : 0;
        if (a != b && !(a > t && b > t)) return false;
    }
    return true;
}

bool is_partial_isomorphism(const OrderedGraph& g1, const OrderedGraph& g2,
                            const std::vector<std::pair<int, int>>& pairs,
                            const Relations& rel) {
    for (const auto& [a, b] : pairs) {
        g1.graph.check_vertex(a);
        g2.graph.check_vertex(b);
    }
    if (rel.equality) {
        for (size_t i = 0; i < pairs.size(); ++i)
            for (size_t j = i + 1; j < pairs.size(); ++j) {
                bool left_eq = pairs[i].first == pairs[j].first;
                bool right_eq = pairs[i].second == pairs[j].second;
                if (left_eq != right_eq) return false;
            }
    }
    if (rel.colours) {
        for (const auto& [a, b] : pairs)
            if (g1.graph.colour_mask(a) != g2.graph.colour_mask(b)) return false;
    }
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j) {
            if (i == j) continue;
            int a1 = pairs[i].first, a2 = pairs[j].first;
            int b1 = pairs[i].second, b2 = pairs[j].second;
            if (rel.edge && g1.graph.adjacent(a1, a2) != g2.graph.adjacent(b1, b2)) return false;
            if (rel.order && g1.less(a1, a2) != g2.less(b1, b2)) return false;
        }
    return true;
}

} // namespace cfo
