#include "cfo/context.hpp"

#include <algorithm>
#include <sstream>

namespace cfo {

// ------------------------------------------------------------------ store

namespace {

std::string build_code(const ContextStore::Data& d) {
    std::ostringstream out;
    out << "C" << d.depth << (d.outer ? "o" : "i") << "|";
    if (d.depth == 0) {
        out << d.colour0;
        return out.str();
    }
    out << d.m << "," << d.centre << "|";
    for (auto c : d.colours) out << c << ",";
    out << "|";
    for (auto [a, b] : d.edges) out << a << "-" << b << ",";
    out << "|g:";
    for (int id : d.g) out << id << ",";
    out << "|f:";
    for (const auto& set : d.f) {
        out << "{";
        for (int id : set) out << id << ",";
        out << "}";
    }
    return out.str();
}

} // namespace

int ContextStore::intern(Data d) {
    if (d.depth == 0) d.outer = false; // outer and inner coincide at depth 0
    for (auto& set : d.f) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    std::sort(d.edges.begin(), d.edges.end());
    std::string code = build_code(d);
    auto it = by_code_.find(code);
    if (it != by_code_.end()) return it->second;
    // structural digest: children contribute their own digests, and gap sets
    // are sorted by digest, so the value is store- and run-independent
    std::ostringstream ds;
    ds << "C" << d.depth << (d.outer ? "o" : "i") << "|";
    if (d.depth == 0) {
        ds << d.colour0;
    } else {
        ds << d.m << "," << d.centre << "|";
        for (auto c : d.colours) ds << c << ",";
        ds << "|";
        for (auto [a, b] : d.edges) ds << a << "-" << b << ",";
        ds << "|g:";
        for (int id : d.g) ds << digests_.at(id).hex() << ",";
        ds << "|f:";
        for (const auto& set : d.f) {
            std::vector<std::string> hx;
            for (int id : set) hx.push_back(digests_.at(id).hex());
            std::sort(hx.begin(), hx.end());
            ds << "{";
            for (const auto& h : hx) ds << h << ",";
            ds << "}";
        }
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(d));
    codes_.push_back(std::move(code));
    digests_.push_back(digest128(ds.str()));
    by_code_.emplace(codes_.back(), id);
    return id;
}

int ContextStore::demote(int id) {
    auto it = demoted_.find(id);
    if (it != demoted_.end()) return it->second;
    const Data d = nodes_.at(id); // copy: intern below may reallocate
    int result;
    if (!d.outer || d.depth == 0) {
        result = id;
    } else {
        Data inner = d;
        inner.outer = false;
        inner.f.erase(inner.f.begin());
        inner.f.pop_back();
        for (auto& child : inner.g) child = demote(child);
        for (auto& set : inner.f)
            for (auto& child : set) child = demote(child);
        result = intern(std::move(inner));
    }
    demoted_.emplace(id, result);
    return result;
}

// ------------------------------------------------------- per-vertex oracle

namespace {

int ctx_rec(ContextStore& store, const OrderedGraph& og, int v, int depth, bool outer) {
    if (depth == 0) {
        ContextStore::Data d;
        d.depth = 0;
        d.colour0 = og.graph.colour_mask(v);
        return store.intern(std::move(d));
    }
    auto members = ball(og.graph, v, depth);
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return og.rank[a] < og.rank[b]; });
    int m = static_cast<int>(members.size());
    ContextStore::Data d;
    d.depth = depth;
    d.outer = outer;
    d.m = m;
    d.colours.resize(m);
    for (int i = 0; i < m; ++i) {
        d.colours[i] = og.graph.colour_mask(members[i]);
        if (members[i] == v) d.centre = i;
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (og.graph.adjacent(members[i], members[j])) d.edges.push_back({i, j});
    for (int i = 0; i < m; ++i) d.g.push_back(ctx_rec(store, og, members[i], depth - 1, outer));

    auto gap_set = [&](int lo, int hi) { // rank positions, exclusive
        std::vector<int> ids;
        for (int pos = lo + 1; pos < hi; ++pos)
            ids.push_back(ctx_rec(store, og, og.by_rank[pos], depth - 1, outer));
        return ids;
    };

    if (outer) d.f.push_back(gap_set(-1, og.rank[members[0]]));
    for (int i = 1; i < m; ++i)
        d.f.push_back(gap_set(og.rank[members[i - 1]], og.rank[members[i]]));
    if (outer) d.f.push_back(gap_set(og.rank[members[m - 1]], og.n()));
    return store.intern(std::move(d));
}

} // namespace

int context_of(ContextStore& store, const OrderedGraph& og, int v, int k) {
    og.graph.check_vertex(v);
    return ctx_rec(store, og, v, k, false);
}

int outer_context_of(ContextStore& store, const OrderedGraph& og, int v, int k) {
    og.graph.check_vertex(v);
    return ctx_rec(store, og, v, k, true);
}

std::vector<int> context_elements(const OrderedGraph& og, int v, int k) {
    og.graph.check_vertex(v);
    if (k == 0) return {v};
    auto members = ball(og.graph, v, k);
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return og.rank[a] < og.rank[b]; });
    std::set<int> out(members.begin(), members.end());
    for (size_t i = 1; i < members.size(); ++i) {
        int lo = og.rank[members[i - 1]], hi = og.rank[members[i]];
        for (int pos = lo + 1; pos < hi; ++pos) {
            auto sub = context_elements(og, og.by_rank[pos], k - 1);
            out.insert(sub.begin(), sub.end());
        }
    }
    return {out.begin(), out.end()};
}

// --------------------------------------------------------- level-wise maps

RealisedContexts realised_contexts(ContextStore& store, const OrderedGraph& og, int k,
                                   bool outer) {
    int n = og.n();
    RealisedContexts out;
    out.depth = k;
    out.outer = outer;

    std::vector<int> level(n);
    for (int v = 0; v < n; ++v) {
        ContextStore::Data d;
        d.depth = 0;
        d.colour0 = og.graph.colour_mask(v);
        level[v] = store.intern(std::move(d));
    }
    out.levels.push_back(level);

    for (int depth = 1; depth <= k; ++depth) {
        const std::vector<int>& prev = out.levels.back();
        // occurrence positions per distinct previous-level id; gap queries
        // run by binary search when the id list is small
        std::map<int, std::vector<int>> occ;
        for (int pos = 0; pos < n; ++pos) occ[prev[og.by_rank[pos]]].push_back(pos);
        bool use_index = occ.size() <= 48;

        std::vector<int> cur(n);
        for (int v = 0; v < n; ++v) {
            auto members = ball(og.graph, v, depth);
            std::sort(members.begin(), members.end(),
                      [&](int a, int b) { return og.rank[a] < og.rank[b]; });
            int m = static_cast<int>(members.size());
            ContextStore::Data d;
            d.depth = depth;
            d.outer = outer;
            d.m = m;
            d.colours.resize(m);
            for (int i = 0; i < m; ++i) {
                d.colours[i] = og.graph.colour_mask(members[i]);
                if (members[i] == v) d.centre = i;
            }
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (og.graph.adjacent(members[i], members[j])) d.edges.push_back({i, j});
            for (int i = 0; i < m; ++i) d.g.push_back(prev[members[i]]);

            auto gap_set = [&](int lo, int hi) {
                std::vector<int> ids;
                if (hi - lo <= 1) return ids;
                if (use_index) {
                    for (const auto& [id, positions] : occ) {
                        auto it = std::lower_bound(positions.begin(), positions.end(), lo + 1);
                        if (it != positions.end() && *it < hi) ids.push_back(id);
                    }
                } else {
                    for (int pos = lo + 1; pos < hi; ++pos) {
                        int id = prev[og.by_rank[pos]];
                        if (std::find(ids.begin(), ids.end(), id) == ids.end())
                            ids.push_back(id);
                    }
                }
                return ids;
            };

            if (outer) d.f.push_back(gap_set(-1, og.rank[members[0]]));
            for (int i = 1; i < m; ++i)
                d.f.push_back(gap_set(og.rank[members[i - 1]], og.rank[members[i]]));
            if (outer) d.f.push_back(gap_set(og.rank[members[m - 1]], n));
            cur[v] = store.intern(std::move(d));
        }
        out.levels.push_back(std::move(cur));
    }

    out.of_vertex = out.levels.back();
    out.realised = out.of_vertex;
    std::sort(out.realised.begin(), out.realised.end());
    out.realised.erase(std::unique(out.realised.begin(), out.realised.end()), out.realised.end());
    return out;
}

// ----------------------------------------------------------- frequent types

FrequentTypeSet frequent_types(const ColouredGraph& g, int k, int m, int r) {
    if (m < 1 || r < 1) throw richness_error("frequency parameters must be positive");
    FrequentTypeSet out;
    out.k = k;
    out.m = m;
    out.r = r;

    int n = g.n();
    std::vector<NeighbourhoodType> type_of(n);
    std::map<NeighbourhoodType, long long> counts;
    for (int v = 0; v < n; ++v) {
        type_of[v] = pointed_type(g, v, k);
        counts[type_of[v]]++;
    }
    long long maxball = 1;
    for (int v = 0; v < n; ++v)
        maxball = std::max(maxball, static_cast<long long>(ball(g, v, r).size()));
    long long total_types = static_cast<long long>(counts.size());

    // conservative greedy bound, iterated to a fixpoint of the rare mass
    long long s = 0;
    std::set<NeighbourhoodType> freq;
    for (;;) {
        long long t = (s + static_cast<long long>(m) * total_types) * maxball + m;
        std::set<NeighbourhoodType> next;
        long long rare = 0;
        for (const auto& [ty, c] : counts) {
            if (c >= t) next.insert(ty);
            else rare += c;
        }
        out.threshold = t;
        bool stable = next == freq && rare == s;
        freq = std::move(next);
        s = rare;
        if (stable) break;
    }
    out.frequent = freq;
    out.rare_mass = s;
    for (int v = 0; v < n; ++v)
        if (!freq.count(type_of[v])) out.rare_vertices.push_back(v);

    if (freq.empty())
        throw richness_error("no neighbourhood type reaches the frequency threshold " +
                             std::to_string(out.threshold));

    // greedy selection: delete the radius-r ball around every rare vertex and
    // around every pick
    std::vector<bool> forbidden(n, false);
    for (int v : out.rare_vertices)
        for (int u : ball(g, v, r)) forbidden[u] = true;
    for (const auto& ty : freq) {
        auto& picks = out.witnesses[ty];
        for (int v = 0; v < n && static_cast<int>(picks.size()) < m; ++v) {
            if (forbidden[v] || !(type_of[v] == ty)) continue;
            picks.push_back(v);
            for (int u : ball(g, v, r)) forbidden[u] = true;
        }
        if (static_cast<int>(picks.size()) < m)
            throw richness_error("cannot scatter " + std::to_string(m) +
                                 " witnesses for a frequent type (got " +
                                 std::to_string(picks.size()) + " of " + std::to_string(m) + ")");
    }

    // post-condition, not just a test: verify every separation by BFS
    std::vector<int> all;
    for (const auto& [ty, picks] : out.witnesses)
        all.insert(all.end(), picks.begin(), picks.end());
    for (int w : all) {
        auto dist = bfs_distances(g, w, r);
        for (int other : all)
            if (other != w && dist[other] >= 0) throw richness_error("witness separation violated");
        for (int rare : out.rare_vertices)
            if (dist[rare] >= 0) throw richness_error("witness too close to a rare vertex");
    }
    return out;
}

// ---------------------------------------------------------------- synthesis

namespace {

struct DecodedType {
    int m = 0;
    std::vector<uint64_t> colour;
    std::vector<int> dist;
    std::vector<std::vector<int>> adj;
};

DecodedType decode_type(const std::string& code) {
    DecodedType out;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : code) {
        if (c == ';') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    out.m = std::stoi(parts[0]);
    out.colour.resize(out.m);
    out.dist.resize(out.m);
    out.adj.assign(out.m, {});
    for (int i = 0; i < out.m; ++i) {
        const std::string& p = parts[1 + i];
        auto comma = p.find(',');
        out.colour[i] = std::stoull(p.substr(0, comma));
        out.dist[i] = std::stoi(p.substr(comma + 1));
    }
    for (size_t pi = 1 + static_cast<size_t>(out.m); pi < parts.size(); ++pi) {
        const std::string& p = parts[pi];
        if (p.empty()) continue;
        auto dash = p.find('-');
        int a = std::stoi(p.substr(0, dash));
        int b = std::stoi(p.substr(dash + 1));
        out.adj[a].push_back(b);
        out.adj[b].push_back(a);
    }
    return out;
}

} // namespace

SynthesisResult synthesize_contexts(ContextStore& store, const FrequentTypeSet& F, int j,
                                    long long budget, const std::vector<int>& realised_seed) {
    if (budget <= 0) throw richness_error("synthesis budget must be positive");
    SynthesisResult out;
    std::set<int> ids(realised_seed.begin(), realised_seed.end());

    if (j == 0) {
        for (const auto& ty : F.frequent) {
            auto dec = decode_type(ty.canonical_code);
            for (int i = 0; i < dec.m; ++i)
                if (dec.dist[i] == 0) {
                    ContextStore::Data d;
                    d.depth = 0;
                    d.colour0 = dec.colour[i];
                    ids.insert(store.intern(std::move(d)));
                }
        }
        out.contexts.assign(ids.begin(), ids.end());
        out.complete = true;
        return out;
    }

    if (j == 1) {
        auto c0 = synthesize_contexts(store, F, 0, budget);
        int c0n = static_cast<int>(c0.contexts.size());
        long long count = 0;
        bool complete = c0n <= 20;
        for (const auto& ty : F.frequent) {
            if (!complete) break;
            auto dec = decode_type(ty.canonical_code);
            std::vector<int> keep;
            for (int i = 0; i < dec.m; ++i)
                if (dec.dist[i] <= 1) keep.push_back(i);
            int m = static_cast<int>(keep.size());
            std::vector<int> local(dec.m, -1);
            for (int i = 0; i < m; ++i) local[keep[i]] = i;

            std::vector<int> perm(m); // perm[pos] = local member at rank pos
            for (int i = 0; i < m; ++i) perm[i] = i;
            do {
                std::vector<int> pos_of(m);
                for (int pos = 0; pos < m; ++pos) pos_of[perm[pos]] = pos;
                int gaps = m - 1;
                std::vector<int> choice(std::max(gaps, 0), 0);
                for (;;) {
                    ContextStore::Data d;
                    d.depth = 1;
                    d.outer = false;
                    d.m = m;
                    d.colours.resize(m);
                    for (int pos = 0; pos < m; ++pos) {
                        int member = keep[perm[pos]];
                        d.colours[pos] = dec.colour[member];
                        if (dec.dist[member] == 0) d.centre = pos;
                    }
                    for (int p1 = 0; p1 < m; ++p1)
                        for (int nb : dec.adj[keep[perm[p1]]]) {
                            int l = local[nb];
                            if (l < 0) continue;
                            int p2 = pos_of[l];
                            if (p2 > p1) d.edges.push_back({p1, p2});
                        }
                    for (int pos = 0; pos < m; ++pos) {
                        ContextStore::Data ch;
                        ch.depth = 0;
                        ch.colour0 = dec.colour[keep[perm[pos]]];
                        d.g.push_back(store.intern(std::move(ch)));
                    }
                    for (int gi = 0; gi < gaps; ++gi) {
                        std::vector<int> set;
                        for (int b = 0; b < c0n; ++b)
                            if ((choice[gi] >> b) & 1) set.push_back(c0.contexts[b]);
                        d.f.push_back(std::move(set));
                    }
                    ids.insert(store.intern(std::move(d)));
                    if (++count > budget) {
                        complete = false;
                        break;
                    }
                    int gi = 0;
                    while (gi < gaps) {
                        if (++choice[gi] < (1 << c0n)) break;
                        choice[gi] = 0;
                        ++gi;
                    }
                    if (gi >= gaps) break;
                }
                if (!complete) break;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        out.contexts.assign(ids.begin(), ids.end());
        out.complete = complete;
        return out;
    }

    // j >= 2: the gap-set powersets over the previous level explode; return
    // the seeds and flag the truncation for consumers to branch on
    out.contexts.assign(ids.begin(), ids.end());
    out.complete = false;
    return out;
}

// ------------------------------------------------------------------ bounds

ContextBounds context_bounds(int k, int d, int colour_count) {
    if (d < 1) throw richness_error("degree bound must be >= 1");
    auto ballsize = [&](int depth) -> uint64_t {
        if (depth == 0) return 1;
        if (d == 1) return 2;
        if (d == 2) return 2ULL * depth + 1;
        uint64_t pw = 1;
        for (int i = 0; i < depth; ++i) pw *= static_cast<uint64_t>(d - 1);
        return 1 + static_cast<uint64_t>(d) * (pw - 1) / (d - 2);
    };
    BigUint nc = BigUint::pow(BigUint(2), colour_count); // 0-contexts: colour sets
    BigUint bc(1);
    for (int depth = 1; depth <= k; ++depth) {
        uint64_t u = ballsize(depth);
        // crude neighbourhood-type bound: colour choices times adjacency choices
        BigUint types = BigUint::pow(BigUint(2), static_cast<uint64_t>(colour_count) * u) *
                        BigUint::pow(BigUint(2), u * (u - 1) / 2);
        uint64_t dk = 1;
        for (int i = 0; i < depth; ++i) dk *= static_cast<uint64_t>(d);
        uint64_t ball_minus = dk > 0 ? dk - 1 : 0;
        BigUint fact = BigUint::factorial(ball_minus);
        BigUint gap_factor(1);
        if (dk >= 2) {
            BigUint base = BigUint::two_pow_capped(nc, 1 << 20);
            gap_factor = BigUint::pow(base, dk - 2);
        }
        BigUint nc_next = types * fact * gap_factor;
        BigUint bc_next = BigUint(ball_minus) + BigUint(dk >= 2 ? dk - 2 : 0) * nc * bc;
        nc = nc_next;
        bc = bc_next;
    }
    return ContextBounds{nc, bc};
}

} // namespace cfo
