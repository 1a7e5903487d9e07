// Acceptance suite: one criterion per section, one PASS/FAIL line each, exit
// code = number of failed criteria. Informational sections are prefixed
// [info] and never gate.

#include "cfo/bits.hpp"
#include "cfo/context.hpp"
#include "cfo/corpus.hpp"
#include "cfo/evaluator.hpp"
#include "cfo/fo.hpp"
#include "cfo/formula.hpp"
#include "cfo/game.hpp"
#include "cfo/graph.hpp"
#include "cfo/mc.hpp"
#include "cfo/order.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace cfo;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<std::string()>& body) {
    auto t0 = clock_type::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!detail.empty() && detail.rfind("FAIL", 0) == 0) ok = false;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(clock_type::now() - t0);
    std::printf("criterion %d %-28s %s  (%lld ms)%s%s\n", number, name.c_str(),
                ok ? "PASS" : "FAIL", static_cast<long long>(ms.count()),
                detail.empty() ? "" : "  ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fail(const std::string& msg) { return "FAIL: " + msg; }

// ------------------------------------------------------------ criterion 1

std::string qeven_behaviour() {
    auto phi = corpus::gurevich_phi();
    const bool expected[5] = {true, false, true, false, true};
    for (int s = 0; s <= 4; ++s) {
        auto g = corpus::gen_boolean_algebra(s);
        bool id_value = evaluate_sentence(OrderedGraph::with_id_order(g), phi);
        if (id_value != expected[s])
            return fail("id-order value wrong at |X|=" + std::to_string(s));
        auto sampled = check_invariance_sampled(g, phi, 100, 424242 + s);
        if (!sampled.invariant || sampled.value != expected[s])
            return fail("sampled orders disagree at |X|=" + std::to_string(s));
        if (s <= 2) {
            auto ex = check_invariance_exhaustive(g, phi);
            if (!ex.invariant || ex.value != expected[s])
                return fail("exhaustive invariance broken at |X|=" + std::to_string(s));
        }
    }
    return "|X| in 0..4 under id + 100 sampled orders; exhaustive for |X| <= 2";
}

// ------------------------------------------------------------ criterion 2

std::string fpt_oracle_equivalence() {
    SplitMix64 rng(20260808);
    std::vector<std::string> schema{"red", "blue"};
    corpus::SentenceGenOptions opts;
    opts.allow_order_atoms = false;
    opts.order_tautologies_only = true;
    auto sentences = corpus::gen_cfo_sentences(3, schema, 200, 5150, opts);
    ContextStore store;
    int pair_count = 0;
    for (const auto& f : sentences) {
        int n = rng.range(1, 40);
        auto g = corpus::gen_random_bounded_degree(n, 3, schema, rng.next());
        bool fpt = fpt_check(store, g, f);
        bool naive = evaluate_sentence(OrderedGraph::with_id_order(g), f);
        if (fpt != naive) return fail("id-order disagreement on pair " + std::to_string(pair_count));
        for (int t = 0; t < 20; ++t) {
            std::vector<int> order = identity_order(n);
            rng.shuffle(order);
            if (evaluate_sentence(OrderedGraph(g, order), f) != fpt)
                return fail("sampled-order disagreement on pair " + std::to_string(pair_count));
        }
        ++pair_count;
    }
    return std::to_string(pair_count) + " pairs, id + 20 sampled orders each, 100% agreement";
}

// ------------------------------------------------------------ criterion 3

std::string fpt_quadratic_scaling() {
    auto f = parse_formula(
        "exists x[eps,0] . exists x[eps,1] adj x[eps,0] . "
        "(x[eps,1] < x[eps,0] | x[eps,0] < x[eps,1])");
    std::vector<int> sizes{1000, 2000, 4000, 8000};
    std::vector<double> log_n, log_t;
    std::ostringstream timing;
    for (int n : sizes) {
        auto g = corpus::gen_cycle(n);
        long long best_us = -1;
        for (int rep = 0; rep < 5; ++rep) {
            ContextStore store;
            auto t0 = clock_type::now();
            bool value = fpt_check(store, g, f);
            auto us = std::chrono::duration_cast<std::chrono::microseconds>(clock_type::now() - t0)
                          .count();
            if (!value) return fail("rank-2 sentence must hold on cycles");
            if (best_us < 0 || us < best_us) best_us = us;
        }
        timing << "n=" << n << ":" << best_us << "us ";
        log_n.push_back(std::log(static_cast<double>(n)));
        log_t.push_back(std::log(static_cast<double>(best_us + 1)));
    }
    double mean_x = 0, mean_y = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
        mean_x += log_n[i];
        mean_y += log_t[i];
    }
    mean_x /= log_n.size();
    mean_y /= log_t.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
        num += (log_n[i] - mean_x) * (log_t[i] - mean_y);
        den += (log_n[i] - mean_x) * (log_n[i] - mean_x);
    }
    double slope = num / den;
    std::ostringstream out;
    out << "fitted exponent " << slope << " (" << timing.str() << ")";
    if (slope < 0.8 || slope > 2.3) return fail(out.str());
    return out.str();
}

// ------------------------------------------------------------ criterion 4

std::string cef_soundness() {
    SplitMix64 rng(777001);
    std::vector<std::string> schema{"red"};
    auto sentences = corpus::gen_cfo_sentences(2, schema, 500, 31337);
    int dup_instances = 0, distinguishing_instances = 0;
    for (int t = 0; t < 100; ++t) {
        auto g1 = corpus::gen_random_bounded_degree(rng.range(1, 5), 3, schema, rng.next());
        auto g2 = corpus::gen_random_bounded_degree(rng.range(1, 5), 3, schema, rng.next());
        std::vector<int> o1 = identity_order(g1.n()), o2 = identity_order(g2.n());
        rng.shuffle(o1);
        rng.shuffle(o2);
        OrderedGraph a(g1, o1), b(g2, o2);
        auto game = solve_game(a, b, 2);
        auto verdict = agree_on_corpus(a, b, sentences);
        if (game.winner == Winner::duplicator) {
            ++dup_instances;
            if (!verdict.agree)
                return fail("duplicator win with a distinguishing sentence at instance " +
                            std::to_string(t));
        }
        if (!verdict.agree) {
            ++distinguishing_instances;
            if (game.winner != Winner::spoiler)
                return fail("distinguishing sentence without a spoiler win at instance " +
                            std::to_string(t));
        }
    }
    return "100 instances, 500 sentences: duplicator wins " + std::to_string(dup_instances) +
           ", distinguished " + std::to_string(distinguishing_instances) + ", zero violations";
}

// ------------------------------------------------------------ criterion 5

std::string context_projection() {
    SplitMix64 rng(555);
    ContextStore store;
    std::vector<std::string> schema{"red", "blue"};
    for (int t = 0; t < 10000; ++t) {
        int n = rng.range(1, 9);
        auto g = corpus::gen_random_bounded_degree(n, 3, schema, rng.next());
        std::vector<int> order = identity_order(n);
        rng.shuffle(order);
        OrderedGraph og(g, order);
        int v = rng.range(0, n - 1);
        int k = rng.range(1, 2);
        int ck = context_of(store, og, v, k);
        const auto& data = store.data(ck);
        int projected = data.g[data.centre];
        int direct = context_of(store, og, v, k - 1);
        if (projected != direct) return fail("projection mismatch at trial " + std::to_string(t));
    }
    return "10000 random (graph, order, vertex, k<=2) triples, 100%";
}

// ------------------------------------------------------------ criterion 6

std::string order_construction() {
    ContextStore store;
    // the threshold is size-independent on cycles; derive N0 from it
    auto plan = plan_kf_order(store, corpus::gen_cycle(1000), 1);
    long long n0 = plan.freq.threshold;
    std::ostringstream out;
    out << "N0 = " << n0;
    // below N0 the single cycle type stays rare
    try {
        build_kf_order(store, corpus::gen_cycle(static_cast<int>(n0) - 1), 1);
        return fail("construction should not succeed below N0");
    } catch (const richness_error&) {
    }
    long long border = -1;
    for (long long n : {n0, n0 + 1, n0 + 7, 3 * n0, 10 * n0}) {
        auto res = build_kf_order(store, corpus::gen_cycle(static_cast<int>(n)), 1);
        if (!res.report.check.all_true())
            return fail("checker not all-true at n=" + std::to_string(n));
        if (n == n0) border = res.order.border_size;
        if ((n == n0 || n == 10 * n0) && res.order.border_size != border)
            return fail("border size varies with n");
    }
    out << ", border " << border << " identical at N0 and 10*N0, checker all-true";
    return out.str();
}

// ------------------------------------------------------------ criterion 7

std::string pipeline_main_theorem() {
    ContextStore store;
    auto ga = corpus::gen_cycle(200);
    auto gb = corpus::gen_cycle(201);
    auto built = build_kf_order(store, ga, 1);
    if (!built.report.check.all_true()) return fail("build stage");
    if (!threshold_equivalent(ga, gb, 1, built.report.freq.threshold))
        return fail("threshold equivalence stage");
    auto phi = find_border_bijection(ga, built.order, built.report.freq, gb);
    if (!phi) return fail("bijection stage");
    auto transferred = transfer_order(store, ga, built.order, built.report, gb, *phi);
    if (!transferred.report.check.all_true()) return fail("transfer stage");
    auto strat =
        verify_duplicator_strategy(store, ga, built.order, gb, transferred.order, *phi, 1);
    if (!strat.verified())
        return fail("strategy verification: " + std::to_string(strat.failures.size()) +
                    " failures over " + std::to_string(strat.plays_checked) + " plays");
    auto sentences = corpus::gen_cfo_sentences(1, {}, 200, 808);
    auto verdict =
        agree_on_corpus(built.order.ordered(ga), transferred.order.ordered(gb), sentences);
    if (!verdict.agree) return fail("corpus stage: " + print_formula(*verdict.distinguishing));
    return "C_200 vs C_201 at k=1: all stages, " + std::to_string(strat.plays_checked) +
           " plays verified, " + std::to_string(sentences.size()) + " corpus sentences agree";
}

void pipeline_k2_informational() {
    auto t0 = clock_type::now();
    std::string line;
    try {
        ContextStore store;
        // the k=2 threshold only emerges from the demand fixpoint; grow the
        // probe cycle until the frequency analysis goes through
        int n = 600;
        BuildPlan plan;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 4) throw richness_error("probe did not stabilise");
            try {
                plan = plan_kf_order(store, corpus::gen_cycle(n), 2, /*relax_m=*/true);
                if (plan.freq.threshold <= n) break;
                n = static_cast<int>(plan.freq.threshold) + 10;
            } catch (const richness_error& e) {
                // the message ends with the failing threshold
                std::string msg = e.what();
                size_t pos = msg.find_last_of(' ');
                n = std::stoi(msg.substr(pos + 1)) + 10;
            }
        }
        auto ga = corpus::gen_cycle(n);
        auto gb = corpus::gen_cycle(n + 1);
        auto built = build_kf_order(store, ga, 2, ContextSource::realised_seeded, true);
        // the generic backtracking search cannot anchor hundreds of border
        // arcs at this scale; on cycles, inserting the extra vertex inside a
        // jungle run keeps every border arc intact, and the transfer checker
        // validates the map anyway
        int pivot = -1;
        for (int v = 0; v < n; ++v)
            if (built.order.segment_of[v] == built.order.layout.jungle()) pivot = v;
        BorderBijection phi;
        for (int v = 0; v < n; ++v) {
            if (built.order.segment_of[v] == built.order.layout.jungle()) continue;
            phi.map[v] = v < pivot ? v : v + 1;
        }
        auto transferred = transfer_order(store, ga, built.order, built.report, gb, phi);
        auto strat = verify_duplicator_strategy(store, ga, built.order, gb, transferred.order,
                                                phi, 2, /*sample_per_node=*/60, 99);
        std::ostringstream out;
        out << "k=2 pipeline on C_" << n << "/C_" << (n + 1) << ": border "
            << built.order.border_size << ", tiers "
            << (built.report.tiers_complete ? "complete" : "truncated")
            << ", sampled strategy plays " << strat.plays_checked << ", failures "
            << strat.failures.size();
        if (!strat.failures.empty()) out << " (first: " << strat.failures.front().invariant << ")";
        line = out.str();
    } catch (const std::exception& e) {
        line = std::string("k=2 pipeline: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(clock_type::now() - t0);
    std::printf("[info] %s  (%lld ms)\n", line.c_str(), static_cast<long long>(ms.count()));
    std::fflush(stdout);
}

// ------------------------------------------------------------ criterion 8

std::string namespace_enforcement() {
    std::vector<std::string> schema{"red"};
    auto valid = corpus::gen_cfo_sentences(4, schema, 100, 90210);
    int accepted = 0;
    for (const auto& f : valid)
        if (validate_sentence(f, &schema).ok) ++accepted;
    if (accepted != static_cast<int>(valid.size()))
        return fail("only " + std::to_string(accepted) + " conforming sentences accepted");

    auto pool = corpus::gen_cfo_sentences(4, schema, 400, 1234999);
    int mutants = 0, rejected = 0;
    for (size_t i = 0; i < pool.size() && mutants < 100; ++i) {
        auto op = static_cast<corpus::Mutation>(i % corpus::mutation_count);
        auto m = corpus::mutate_sentence(pool[i], op);
        if (!m) continue;
        ++mutants;
        auto rep = validate_sentence(*m, &schema);
        if (!rep.ok) ++rejected;
    }
    if (mutants < 100) return fail("could not build 100 violating sentences");
    if (rejected != mutants)
        return fail(std::to_string(mutants - rejected) + " violating sentences accepted");
    return std::to_string(accepted) + "/" + std::to_string(valid.size()) +
           " conforming accepted, " + std::to_string(rejected) + "/" + std::to_string(mutants) +
           " violating rejected";
}

// ------------------------------------------------------------ criterion 9

std::string bounded_diameter_translation() {
    SplitMix64 rng(4242);
    std::vector<std::string> schema{"Red"};
    auto fo_sentences = corpus::gen_fo_sentences(2, schema, 20, 606);
    int graphs = 0;
    long long checks = 0;
    while (graphs < 50) {
        int n = rng.range(1, 6);
        auto g = corpus::gen_random_bounded_degree(n, 4, schema, rng.next());
        int diam = 0;
        bool connected = true;
        for (int v = 0; v < n; ++v) {
            auto dist = bfs_distances(g, v);
            for (int u = 0; u < n; ++u) {
                if (dist[u] < 0) connected = false;
                diam = std::max(diam, dist[u]);
            }
        }
        if (!connected || diam > 3) continue;
        ++graphs;
        std::vector<int> perm = identity_order(n);
        do {
            OrderedGraph og(g, perm);
            for (const auto& f : fo_sentences) {
                auto translated = fo::fo_to_cfo_bounded_diameter(f, 3);
                if (evaluate_sentence(og, translated) != fo::fo_evaluate(og, f))
                    return fail("translation disagrees on graph " + std::to_string(graphs));
                ++checks;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return "50 graphs x 20 sentences x all orders: " + std::to_string(checks) + " checks, 100%";
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion(1, "qeven-behaviour", qeven_behaviour);
    criterion(2, "fpt-oracle-equivalence", fpt_oracle_equivalence);
    criterion(3, "fpt-quadratic-scaling", fpt_quadratic_scaling);
    criterion(4, "cef-soundness", cef_soundness);
    criterion(5, "context-projection", context_projection);
    criterion(6, "order-construction", order_construction);
    criterion(7, "pipeline-main-theorem", pipeline_main_theorem);
    pipeline_k2_informational();
    criterion(8, "namespace-enforcement", namespace_enforcement);
    criterion(9, "bounded-diameter-translation", bounded_diameter_translation);
    std::printf("failures %d\n", failures);
    return failures;
}
