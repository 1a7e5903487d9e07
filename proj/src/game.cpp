#include "cfo/game.hpp"

#include "cfo/bits.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace cfo {

std::string Move::str() const {
    std::ostringstream out;
    out << (side == Side::A ? "A " : "B ");
    switch (kind) {
    case Kind::root_intro: out << "intro x[eps,0]"; break;
    case Kind::child_intro: out << "intro x[" << word << ",0]"; break;
    case Kind::continuation:
        out << "cont x[" << (word.empty() ? "eps" : word) << "," << index << "] adj "
            << Variable{word, guard}.str();
        break;
    }
    out << " -> " << vertex;
    return out.str();
}

namespace {

std::vector<std::string> clusters_of(const IndexSet& s) {
    std::vector<std::string> out;
    for (const auto& [w, i] : s.entries)
        if (i == 0) out.push_back(w);
    return out;
}

std::string fresh_letter(const IndexSet& s, const std::string& w) {
    for (char a = 'a'; a <= 'z'; ++a) {
        std::string child = w + std::string(1, a);
        if (!s.contains(child, 0)) return child;
    }
    throw game_error("cluster alphabet exhausted");
}

} // namespace

std::vector<Move> legal_moves(const OrderedGraph& oa, const OrderedGraph& ob,
                              const GameConfiguration& c, Side side) {
    const OrderedGraph& og = side == Side::A ? oa : ob;
    const Valuation& val = side == Side::A ? c.val_a : c.val_b;
    std::vector<Move> out;
    if (c.rounds_left <= 0) return out;
    if (c.index_set.empty()) {
        for (int v = 0; v < og.n(); ++v)
            out.push_back(Move{Move::Kind::root_intro, side, "", 0, -1, v});
        return out;
    }
    for (const auto& w : clusters_of(c.index_set)) {
        // child introduction: letters are interchangeable, so only the least
        // unused letter is generated
        std::string child = fresh_letter(c.index_set, w);
        for (int v = 0; v < og.n(); ++v)
            out.push_back(Move{Move::Kind::child_intro, side, child, 0, -1, v});
        // guarded continuation from any pebbled index of the cluster
        int next = c.index_set.smallest_unused_index(w);
        for (int j = 0; j < next; ++j) {
            int gv = val.at(Variable{w, j});
            for (int v : og.graph.neighbours(gv))
                out.push_back(Move{Move::Kind::continuation, side, w, next, j, v});
        }
    }
    return out;
}

std::vector<int> duplicator_answers(const OrderedGraph& oa, const OrderedGraph& ob,
                                    const GameConfiguration& c, const Move& spoiler) {
    Side mirror = spoiler.side == Side::A ? Side::B : Side::A;
    const OrderedGraph& og = mirror == Side::A ? oa : ob;
    const Valuation& val = mirror == Side::A ? c.val_a : c.val_b;
    if (spoiler.kind == Move::Kind::continuation) {
        auto it = val.find(Variable{spoiler.word, spoiler.guard});
        if (it == val.end()) throw game_error("mirror guard pebble missing");
        return og.graph.neighbours(it->second);
    }
    std::vector<int> out(og.n());
    for (int v = 0; v < og.n(); ++v) out[v] = v;
    return out;
}

bool is_winning_config(const OrderedGraph& oa, const OrderedGraph& ob,
                       const GameConfiguration& c) {
    // per cluster: edges, colours, equality and the within-cluster order;
    // the atoms of CFO_S[0] over one cluster are exactly these
    for (const auto& w : clusters_of(c.index_set)) {
        std::vector<std::pair<int, int>> pairs;
        int next = c.index_set.smallest_unused_index(w);
        for (int i = 0; i < next; ++i)
            pairs.push_back({c.val_a.at(Variable{w, i}), c.val_b.at(Variable{w, i})});
        if (!is_partial_isomorphism(oa, ob, pairs, Relations{true, true, true, true}))
            return false;
        // cross-cluster order: each child root against its parent cluster
        for (const auto& [cw, ci] : c.index_set.entries) {
            if (ci != 0 || cw.empty()) continue;
            if (cw.substr(0, cw.size() - 1) != w) continue;
            auto cross = pairs;
            cross.push_back({c.val_a.at(Variable{cw, 0}), c.val_b.at(Variable{cw, 0})});
            if (!is_partial_isomorphism(oa, ob, cross, Relations{false, true, false, false}))
                return false;
        }
    }
    return true;
}

// -------------------------------------------------------------------- solve

namespace {

struct Solver {
    const OrderedGraph& oa;
    const OrderedGraph& ob;
    std::unordered_map<std::string, bool> memo;
    long long nodes = 0, budget;

    std::string key(const GameConfiguration& c) const {
        std::ostringstream out;
        out << c.rounds_left << "#";
        for (const auto& [v, vertex] : c.val_a)
            out << v.word << "," << v.index << ":" << vertex << ";";
        out << "#";
        for (const auto& [v, vertex] : c.val_b)
            out << v.word << "," << v.index << ":" << vertex << ";";
        return out.str();
    }

    GameConfiguration apply(const GameConfiguration& c, const Move& m, int answer) const {
        GameConfiguration next = c;
        next.rounds_left--;
        next.index_set.insert(m.word, m.index);
        Variable var{m.word, m.index};
        if (m.side == Side::A) {
            next.val_a[var] = m.vertex;
            next.val_b[var] = answer;
        } else {
            next.val_b[var] = m.vertex;
            next.val_a[var] = answer;
        }
        next.history.push_back(m);
        return next;
    }

    bool duplicator_wins(const GameConfiguration& c) {
        if (++nodes > budget) throw game_error("solver node budget exceeded");
        // broken atomic facts never recover: prune on the winning condition
        if (!is_winning_config(oa, ob, c)) return false;
        if (c.rounds_left == 0) return true;
        std::string k = key(c);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        bool result = true;
        for (Side side : {Side::A, Side::B}) {
            for (const auto& m : legal_moves(oa, ob, c, side)) {
                bool answered = false;
                for (int ans : duplicator_answers(oa, ob, c, m)) {
                    if (duplicator_wins(apply(c, m, ans))) {
                        answered = true;
                        break;
                    }
                }
                if (!answered) {
                    result = false;
                    break;
                }
            }
            if (!result) break;
        }
        memo.emplace(std::move(k), result);
        return result;
    }

    void principal_line(GameConfiguration c, std::vector<std::string>& trace) {
        while (c.rounds_left > 0) {
            if (!is_winning_config(oa, ob, c)) return;
            bool dup = duplicator_wins(c);
            const Move* pick = nullptr;
            std::vector<Move> all;
            for (Side side : {Side::A, Side::B}) {
                auto ms = legal_moves(oa, ob, c, side);
                all.insert(all.end(), ms.begin(), ms.end());
            }
            if (all.empty()) return;
            int answer = -1;
            if (dup) {
                pick = &all.front();
                for (int ans : duplicator_answers(oa, ob, c, *pick))
                    if (duplicator_wins(apply(c, *pick, ans))) {
                        answer = ans;
                        break;
                    }
            } else {
                for (const auto& m : all) {
                    bool answered = false;
                    for (int ans : duplicator_answers(oa, ob, c, m))
                        if (duplicator_wins(apply(c, m, ans))) {
                            answered = true;
                            break;
                        }
                    if (!answered) {
                        pick = &m;
                        auto answers = duplicator_answers(oa, ob, c, m);
                        answer = answers.empty() ? -1 : answers.front();
                        break;
                    }
                }
                if (!pick) pick = &all.front();
            }
            std::ostringstream line;
            line << "ply " << (c.history.size() + 1) << " " << pick->str() << " answer " << answer;
            trace.push_back(line.str());
            if (answer < 0) return;
            c = apply(c, *pick, answer);
        }
    }
};

} // namespace

SolveResult solve_game(const OrderedGraph& oa, const OrderedGraph& ob, int rounds,
                       const GameConfiguration* initial, long long node_budget) {
    GameConfiguration start;
    if (initial) start = *initial;
    start.rounds_left = rounds;
    if (!valuation_consistent(oa, start.val_a) || !valuation_consistent(ob, start.val_b))
        throw game_error("initial valuations are inconsistent");
    Solver s{oa, ob, {}, 0, node_budget};
    SolveResult out;
    out.winner = s.duplicator_wins(start) ? Winner::duplicator : Winner::spoiler;
    s.principal_line(start, out.trace);
    out.configurations = s.nodes;
    return out;
}

// ----------------------------------------------------------------- strategy

namespace {

struct ClusterInfo {
    int intro_round = 0; // l: the round the cluster root was placed
};

struct VerifyState {
    GameConfiguration config;
    std::map<std::string, ClusterInfo> clusters;
    std::vector<std::pair<int, int>> by_round; // round -> (a vertex, b vertex)
};

struct Verifier {
    ContextStore& store;
    const ColouredGraph& ga;
    const KfOrder& oa;
    const ColouredGraph& gb;
    const KfOrder& ob;
    const BorderBijection& phi;
    int k;
    int sample_per_node;
    uint64_t seed;

    OrderedGraph og_a, og_b;
    RealisedContexts rc_a, rc_b;
    std::map<int, int> phi_fwd, phi_inv;
    StrategyReport report;

    Verifier(ContextStore& st, const ColouredGraph& a, const KfOrder& ka, const ColouredGraph& b,
             const KfOrder& kb, const BorderBijection& bij, int rounds, int sample, uint64_t sd)
        : store(st), ga(a), oa(ka), gb(b), ob(kb), phi(bij), k(rounds), sample_per_node(sample),
          seed(sd), og_a(ka.ordered(a)), og_b(kb.ordered(b)),
          rc_a(realised_contexts(st, og_a, rounds - 1, false)),
          rc_b(realised_contexts(st, og_b, rounds - 1, false)) {
        phi_fwd = bij.map;
        for (const auto& [x, y] : bij.map) phi_inv[y] = x;
    }

    const KfOrder& order_of(Side s) const { return s == Side::A ? oa : ob; }
    const OrderedGraph& graph_of(Side s) const { return s == Side::A ? og_a : og_b; }
    const RealisedContexts& contexts_of(Side s) const { return s == Side::A ? rc_a : rc_b; }
    const std::map<int, int>& phi_of(Side s) const { return s == Side::A ? phi_fwd : phi_inv; }
    const Valuation& val_of(const VerifyState& st, Side s) const {
        return s == Side::A ? st.config.val_a : st.config.val_b;
    }

    std::vector<int> ball_by_rank(Side s, int centre, int radius) const {
        const OrderedGraph& og = graph_of(s);
        auto members = ball(og.graph, centre, radius);
        std::sort(members.begin(), members.end(),
                  [&](int x, int y) { return og.rank[x] < og.rank[y]; });
        return members;
    }

    // slot of v relative to a rank-sorted ball: (true, position) for members,
    // else (false, gap index) with gap 0 the leftmost outer one
    std::pair<bool, int> slot_of(Side s, const std::vector<int>& members, int v) const {
        const OrderedGraph& og = graph_of(s);
        int pos = 0;
        for (size_t i = 0; i < members.size(); ++i) {
            if (members[i] == v) return {true, static_cast<int>(i)};
            if (og.rank[v] > og.rank[members[i]]) pos = static_cast<int>(i) + 1;
        }
        return {false, pos};
    }

    void fail(const VerifyState& st, const std::string& invariant, const std::string& msg) {
        std::ostringstream trace;
        for (const auto& m : st.config.history) trace << m.str() << " / ";
        report.failures.push_back({trace.str() + msg, invariant});
    }

    // Duplicator's reply per the proof's case split; -1 when no legal reply
    // exists (recorded as a failure by the caller)
    int reply(const VerifyState& st, const Move& m, std::string& why) {
        Side x = m.side;
        Side y = x == Side::A ? Side::B : Side::A;
        int move_no = static_cast<int>(st.by_round.size()) + 1;
        int level = k - move_no; // the relevant safety part is S^{k-m}
        const KfOrder& ox = order_of(x);
        const KfOrder& oy = order_of(y);
        int p = m.vertex;

        if (m.kind == Move::Kind::continuation) {
            const auto& info = st.clusters.at(m.word);
            int radius = k - info.intro_round;
            int root_x = val_of(st, x).at(Variable{m.word, 0});
            int root_y = val_of(st, y).at(Variable{m.word, 0});
            auto bx = ball_by_rank(x, root_x, radius);
            auto by = ball_by_rank(y, root_y, radius);
            auto [inside, pos] = slot_of(x, bx, p);
            if (!inside) {
                why = "continuation outside the cluster ball";
                return -1;
            }
            if (by.size() != bx.size()) {
                why = "cluster balls differ in size";
                return -1;
            }
            return by[pos];
        }

        // introduction moves: tit-for-tat inside the safety part
        if (ox.layout.in_safety(ox.segment_of.at(p), level)) {
            auto it = phi_of(x).find(p);
            if (it == phi_of(x).end()) {
                why = "safety vertex outside the bijection";
                return -1;
            }
            return it->second;
        }

        bool left = true; // root intros answer on the left by convention
        if (m.kind == Move::Kind::child_intro) {
            std::string parent = m.word.substr(0, m.word.size() - 1);
            const auto& info = st.clusters.at(parent);
            int radius = k - info.intro_round;
            int root_x = val_of(st, x).at(Variable{parent, 0});
            int root_y = val_of(st, y).at(Variable{parent, 0});
            auto bx = ball_by_rank(x, root_x, radius);
            auto by = ball_by_rank(y, root_y, radius);
            auto [inside, slot] = slot_of(x, bx, p);
            if (by.size() == bx.size()) {
                if (inside) return by[slot];
                if (slot > 0 && slot < static_cast<int>(bx.size())) {
                    // inner gap: the least element of the mirrored gap with
                    // the same (k-l-1)-context
                    const OrderedGraph& ogy = graph_of(y);
                    int want = contexts_of(x).levels[radius - 1][p];
                    int lo = ogy.rank[by[slot - 1]], hi = ogy.rank[by[slot]];
                    for (int pos = lo + 1; pos < hi; ++pos) {
                        int cand = ogy.by_rank[pos];
                        if (contexts_of(y).levels[radius - 1][cand] == want) return cand;
                    }
                    why = "no matching element in the mirrored interval";
                    return -1;
                }
                left = slot == 0; // outer-gap side picks the universal side
            } else if (inside) {
                why = "cluster balls differ in size";
                return -1;
            }
        }

        // universal-segment answer: the first universal segment after
        // S^{k-m} on the chosen side, on an element with the same
        // (k-m)-context
        int seg_index = level * k + 1;
        int seg = left ? oy.layout.lu(seg_index) : oy.layout.ru(seg_index);
        int want = contexts_of(x).levels[level][p];
        const OrderedGraph& ogy = graph_of(y);
        for (int pos = 0; pos < ogy.n(); ++pos) {
            int cand = ogy.by_rank[pos];
            if (oy.segment_of.at(cand) != seg) continue;
            if (contexts_of(y).levels[level][cand] == want) return cand;
        }
        why = "universal witness missing in " + oy.layout.name(seg);
        return -1;
    }

    bool check_invariants(const VerifyState& st) {
        int r = static_cast<int>(st.by_round.size());
        bool ok = true;
        // S_r: safety membership matches level by level, with phi agreement
        for (int l = 1; l <= r; ++l) {
            auto [u, v] = st.by_round[l - 1];
            bool ina = oa.layout.in_safety(oa.segment_of.at(u), k - l);
            bool inb = ob.layout.in_safety(ob.segment_of.at(v), k - l);
            if (ina != inb || (ina && phi_fwd.at(u) != v)) {
                fail(st, "S_r", " round " + std::to_string(l));
                ok = false;
            }
        }
        // C_r: matching (k-j)-contexts for the round-j pebbles
        for (int l = 1; l <= r; ++l) {
            auto [u, v] = st.by_round[l - 1];
            if (rc_a.levels[k - l][u] != rc_b.levels[k - l][v]) {
                fail(st, "C_r", " round " + std::to_string(l));
                ok = false;
            }
        }
        // I_r: pointed cluster structures agree, constants and child roots
        // sit in corresponding slots
        for (const auto& [w, info] : st.clusters) {
            int radius = k - info.intro_round;
            int root_a = st.config.val_a.at(Variable{w, 0});
            int root_b = st.config.val_b.at(Variable{w, 0});
            auto bx = ball_by_rank(Side::A, root_a, radius);
            auto by = ball_by_rank(Side::B, root_b, radius);
            if (bx.size() != by.size()) {
                fail(st, "I_r", " cluster " + w + " ball sizes");
                ok = false;
                continue;
            }
            for (size_t i = 0; i < bx.size() && ok; ++i) {
                if (og_a.graph.colour_mask(bx[i]) != og_b.graph.colour_mask(by[i])) {
                    fail(st, "I_r", " cluster " + w + " colours");
                    ok = false;
                }
                for (size_t j = i + 1; j < bx.size(); ++j)
                    if (og_a.graph.adjacent(bx[i], bx[j]) != og_b.graph.adjacent(by[i], by[j])) {
                        fail(st, "I_r", " cluster " + w + " adjacency");
                        ok = false;
                        break;
                    }
            }
            int next = st.config.index_set.smallest_unused_index(w);
            for (int i = 0; i < next && ok; ++i) {
                auto [ia, pa] = slot_of(Side::A, bx, st.config.val_a.at(Variable{w, i}));
                auto [ib, pb] = slot_of(Side::B, by, st.config.val_b.at(Variable{w, i}));
                if (!ia || !ib || pa != pb) {
                    fail(st, "I_r", " cluster " + w + " constant " + std::to_string(i));
                    ok = false;
                }
            }
            for (const auto& [cw, ci] : st.config.index_set.entries) {
                if (ci != 0 || cw.empty() || cw.substr(0, cw.size() - 1) != w) continue;
                auto sa = slot_of(Side::A, bx, st.config.val_a.at(Variable{cw, 0}));
                auto sb = slot_of(Side::B, by, st.config.val_b.at(Variable{cw, 0}));
                if (sa != sb) {
                    fail(st, "I_r", " cluster " + w + " child " + cw);
                    ok = false;
                }
            }
        }
        return ok;
    }

    void walk(const VerifyState& st) {
        int r = static_cast<int>(st.by_round.size());
        if (r == k) {
            ++report.plays_checked;
            if (!is_winning_config(og_a, og_b, st.config)) fail(st, "winning", " final config");
            return;
        }
        std::vector<Move> moves;
        GameConfiguration cfg = st.config;
        cfg.rounds_left = k - r;
        for (Side side : {Side::A, Side::B}) {
            auto ms = legal_moves(og_a, og_b, cfg, side);
            moves.insert(moves.end(), ms.begin(), ms.end());
        }
        if (sample_per_node > 0 && static_cast<int>(moves.size()) > sample_per_node) {
            SplitMix64 rng(seed ^ (static_cast<uint64_t>(r) << 32) ^ moves.size());
            rng.shuffle(moves);
            moves.resize(sample_per_node);
        }
        for (const auto& m : moves) {
            std::string why;
            int answer = reply(st, m, why);
            if (answer < 0) {
                VerifyState probe = st;
                probe.config.history.push_back(m);
                fail(probe, "answer", " " + why);
                ++report.plays_checked;
                continue;
            }
            VerifyState next = st;
            next.config.rounds_left = k - r - 1;
            next.config.index_set.insert(m.word, m.index);
            Variable var{m.word, m.index};
            int av = m.side == Side::A ? m.vertex : answer;
            int bv = m.side == Side::A ? answer : m.vertex;
            next.config.val_a[var] = av;
            next.config.val_b[var] = bv;
            next.config.history.push_back(m);
            next.by_round.push_back({av, bv});
            if (m.kind != Move::Kind::continuation)
                next.clusters[m.word] = ClusterInfo{r + 1};
            if (!check_invariants(next)) {
                ++report.plays_checked;
                continue; // invariant broken: recorded, do not descend
            }
            walk(next);
        }
    }
};

} // namespace

StrategyReport verify_duplicator_strategy(ContextStore& store, const ColouredGraph& ga,
                                          const KfOrder& oa, const ColouredGraph& gb,
                                          const KfOrder& ob, const BorderBijection& phi,
                                          int rounds, int sample_per_node, uint64_t sample_seed) {
    if (rounds < 1) throw game_error("strategy verification needs rounds >= 1");
    if (oa.k != rounds || ob.k != rounds)
        throw game_error("orders must be built for the same k as the game depth");
    Verifier v(store, ga, oa, gb, ob, phi, rounds, sample_per_node, sample_seed);
    VerifyState start;
    start.config.rounds_left = rounds;
    v.walk(start);
    return v.report;
}

} // namespace cfo
