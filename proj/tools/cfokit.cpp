// cfokit: command-line front end for the cluster first-order toolkit.
// Every run echoes its configuration; reports are line records (`KEY value`
// pairs) so scripts can consume them without a parser library. Exit codes:
// boolean results mirror 0/1, usage errors 2, resource caps 3, other
// failures 4.

#include "CLI11.hpp"

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
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using namespace cfo;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::vector<int> parse_order_string(const std::string& s) {
    std::istringstream in(s);
    std::vector<int> out;
    int v;
    while (in >> v) out.push_back(v);
    return out;
}

OrderedGraph ordered_from(const GraphFile& gf, const std::string& order_flag) {
    if (!order_flag.empty()) return OrderedGraph(gf.graph, parse_order_string(order_flag));
    if (gf.order) return OrderedGraph(gf.graph, *gf.order);
    return OrderedGraph::with_id_order(gf.graph);
}

FormulaPtr load_formula(const std::string& path) {
    auto f = parse_formula(slurp(path));
    auto report = validate(f, free_index_set(f));
    if (!report.ok) {
        std::cout << report.str();
        throw std::runtime_error("formula does not validate: " + path);
    }
    return f;
}

uint64_t default_seed() {
    if (const char* env = std::getenv("CFOKIT_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

void echo_config(int argc, char** argv, uint64_t seed, bool to_stderr = false) {
    std::ostream& out = to_stderr ? std::cerr : std::cout;
    out << "config";
    for (int i = 0; i < argc; ++i) out << " " << argv[i];
    out << "\nseed " << seed << "\n";
}

int run_pipeline(const std::string& file_a, const std::string& file_b, int k, int corpus_n,
                 uint64_t seed, bool relax_m, int sample) {
    ContextStore store;
    auto ga = load_graph(slurp(file_a));
    auto gb = load_graph(slurp(file_b));
    bool all_ok = true;
    auto stage = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << "stage " << name << " " << (ok ? "ok" : "fail");
        if (!detail.empty()) std::cout << " " << detail;
        std::cout << "\n";
        all_ok = all_ok && ok;
        return ok;
    };

    BuildResult built;
    try {
        built = build_kf_order(store, ga, k, ContextSource::synthesized, relax_m);
        stage("build-a", true,
              "border " + std::to_string(built.order.border_size) + " threshold " +
                  std::to_string(built.report.freq.threshold));
    } catch (const std::exception& e) {
        stage("build-a", false, e.what());
        return 1;
    }

    if (!stage("threshold-equivalence",
               threshold_equivalent(ga, gb, k, built.report.freq.threshold)))
        return 1;

    auto phi = find_border_bijection(ga, built.order, built.report.freq, gb);
    if (!stage("bijection", phi.has_value())) return 1;

    BuildResult transferred;
    try {
        transferred = transfer_order(store, ga, built.order, built.report, gb, *phi);
        stage("transfer", true, "border " + std::to_string(transferred.order.border_size));
    } catch (const std::exception& e) {
        stage("transfer", false, e.what());
        return 1;
    }

    auto strat = verify_duplicator_strategy(store, ga, built.order, gb, transferred.order, *phi,
                                            k, sample, seed);
    stage("verify-strategy", strat.verified(),
          "plays " + std::to_string(strat.plays_checked) + " failures " +
              std::to_string(strat.failures.size()));
    for (size_t i = 0; i < strat.failures.size() && i < 5; ++i)
        std::cout << "failure " << strat.failures[i].invariant << " " << strat.failures[i].trace
                  << "\n";

    std::vector<std::string> schema = ga.colour_names();
    auto sentences = corpus::gen_cfo_sentences(k, schema, corpus_n, seed);
    auto verdict =
        agree_on_corpus(built.order.ordered(ga), transferred.order.ordered(gb), sentences);
    stage("corpus", verdict.agree,
          verdict.agree ? std::to_string(sentences.size()) + " sentences"
                        : "distinguished by " + print_formula(*verdict.distinguishing));
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster first-order logic toolkit"};
    app.require_subcommand(1);

    uint64_t seed = default_seed();
    app.add_option("--seed", seed, "global seed (default: CFOKIT_SEED or 0)");
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker parallelism cap (evaluation is deterministic)");

    std::string graph_file, formula_file, order_flag, emit_file, order_file;
    std::string graph_a, graph_b, order_a, order_b, order_file_a, order_file_b, bijection_file;
    int depth = 1, rounds = 1, trials = 0, n = 10, dmax = 3, set_size = 2, corpus_n = 200;
    int sample = 0;
    long long node_budget = 50'000'000;
    bool exhaustive = false, force = false, outer = false, paranoid = false, timing = false;
    bool relax = false;
    std::string colours_csv;

    auto* c_eval = app.add_subcommand("eval", "evaluate a sentence on an ordered graph");
    c_eval->add_option("--graph", graph_file)->required();
    c_eval->add_option("--formula", formula_file)->required();
    c_eval->add_option("--order", order_flag, "explicit order, smallest first");

    auto* c_inv = app.add_subcommand("invariance", "test order invariance");
    c_inv->add_option("--graph", graph_file)->required();
    c_inv->add_option("--formula", formula_file)->required();
    c_inv->add_flag("--exhaustive", exhaustive);
    c_inv->add_flag("--force", force, "lift the n <= 8 exhaustive guard");
    c_inv->add_option("--trials", trials);

    auto* c_ctx = app.add_subcommand("contexts", "emit per-vertex context digests");
    c_ctx->add_option("--graph", graph_file)->required();
    c_ctx->add_option("--order", order_flag);
    c_ctx->add_option("--depth", depth)->required();
    c_ctx->add_flag("--outer", outer);

    auto* c_build = app.add_subcommand("build-order", "construct a (k,F)-order");
    c_build->add_option("--graph", graph_file)->required();
    c_build->add_option("--depth", depth)->required();
    c_build->add_option("--emit", emit_file, "write the order file here");
    c_build->add_flag("--relax-m", relax, "size the witness demand from actual placements");

    auto* c_check = app.add_subcommand("check-order", "check the four order properties");
    c_check->add_option("--graph", graph_file)->required();
    c_check->add_option("--order-file", order_file)->required();
    c_check->add_option("--depth", depth)->required();
    c_check->add_flag("--relax-m", relax);

    auto* c_game = app.add_subcommand("game", "cluster EF games");
    c_game->require_subcommand(1);
    auto* c_solve = c_game->add_subcommand("solve", "exact memoised solver");
    c_solve->add_option("--graph-a", graph_a)->required();
    c_solve->add_option("--graph-b", graph_b)->required();
    c_solve->add_option("--order-a", order_a);
    c_solve->add_option("--order-b", order_b);
    c_solve->add_option("--rounds", rounds)->required();
    c_solve->add_option("--node-budget", node_budget);
    auto* c_verify = c_game->add_subcommand("verify-strategy", "walk the explicit strategy");
    c_verify->add_option("--graph-a", graph_a)->required();
    c_verify->add_option("--order-file-a", order_file_a)->required();
    c_verify->add_option("--graph-b", graph_b)->required();
    c_verify->add_option("--order-file-b", order_file_b)->required();
    c_verify->add_option("--bijection", bijection_file)->required();
    c_verify->add_option("--rounds", rounds)->required();
    c_verify->add_option("--sample", sample, "bound Spoiler branching per node");

    auto* c_fpt = app.add_subcommand("fpt-check", "fixed-parameter model checking");
    c_fpt->add_option("--graph", graph_file)->required();
    c_fpt->add_option("--formula", formula_file)->required();
    c_fpt->add_flag("--paranoid", paranoid, "cross-check a second random order");
    c_fpt->add_flag("--timing", timing, "emit phase timings");

    auto* c_gen = app.add_subcommand("gen", "graph generators");
    c_gen->require_subcommand(1);
    auto* g_cycle = c_gen->add_subcommand("cycle");
    g_cycle->add_option("--n", n)->required();
    auto* g_path = c_gen->add_subcommand("path");
    g_path->add_option("--n", n)->required();
    auto* g_bool = c_gen->add_subcommand("boolean-algebra");
    g_bool->add_option("--set-size", set_size)->required();
    auto* g_rand = c_gen->add_subcommand("random");
    g_rand->add_option("--n", n)->required();
    g_rand->add_option("--d", dmax)->required();
    g_rand->add_option("--colors", colours_csv, "comma-separated colour names");

    auto* c_formulas = app.add_subcommand("formulas", "named fixtures");
    c_formulas->require_subcommand(1);
    std::string which;
    auto* f_emit = c_formulas->add_subcommand("emit");
    f_emit->add_option("name", which, "phi1 | phi2 | gurevich")->required();

    auto* c_pipe = app.add_subcommand("pipeline", "end-to-end order transfer pipeline");
    c_pipe->add_option("--graph-a", graph_a)->required();
    c_pipe->add_option("--graph-b", graph_b)->required();
    c_pipe->add_option("--depth", depth)->required();
    c_pipe->add_option("--corpus", corpus_n);
    c_pipe->add_flag("--relax-m", relax);
    c_pipe->add_option("--sample", sample);

    // global options may trail subcommand options
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
        cmd->fallthrough();
        for (auto* sub : cmd->get_subcommands({})) enable_fallthrough(sub);
    };
    for (auto* sub : app.get_subcommands({})) enable_fallthrough(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    (void)jobs;

    // commands whose stdout is the artifact itself echo to stderr
    echo_config(argc, argv, seed, *c_gen || *c_formulas);
    try {
        if (*c_eval) {
            auto gf = load_graph_file(slurp(graph_file));
            auto f = load_formula(formula_file);
            if (!free_index_set(f).empty())
                throw std::runtime_error("eval needs a sentence (no free variables)");
            bool value = evaluate_sentence(ordered_from(gf, order_flag), f);
            std::cout << "value " << (value ? "true" : "false") << "\n";
            return value ? 0 : 1;
        }
        if (*c_inv) {
            auto gf = load_graph_file(slurp(graph_file));
            auto f = load_formula(formula_file);
            InvarianceVerdict v;
            if (exhaustive) {
                v = check_invariance_exhaustive(gf.graph, f, force);
            } else {
                if (trials < 2) throw CLI::ValidationError("--trials must be >= 2");
                v = check_invariance_sampled(gf.graph, f, trials, seed);
            }
            std::cout << "mode "
                      << (v.mode == InvarianceVerdict::Mode::exhaustive ? "exhaustive" : "sampled")
                      << "\norders " << v.orders_tested << "\ninvariant "
                      << (v.invariant ? "true" : "false") << "\n";
            if (v.invariant) std::cout << "value " << (v.value ? "true" : "false") << "\n";
            if (v.witness) {
                auto print_order = [](const std::vector<int>& o) {
                    std::string s;
                    for (int x : o) s += std::to_string(x) + " ";
                    return s;
                };
                std::cout << "witness1 " << print_order(v.witness->first) << "\n";
                std::cout << "witness2 " << print_order(v.witness->second) << "\n";
            }
            return v.invariant ? 0 : 1;
        }
        if (*c_ctx) {
            auto gf = load_graph_file(slurp(graph_file));
            auto og = ordered_from(gf, order_flag);
            ContextStore store;
            auto rc = realised_contexts(store, og, depth, outer);
            for (int v = 0; v < og.n(); ++v) {
                auto elts = context_elements(og, v, depth);
                std::cout << "vertex " << v << " ctx " << store.digest(rc.of_vertex[v]).hex()
                          << " size " << elts.size() << "\n";
            }
            std::cout << "realised " << rc.realised.size() << "\n";
            return 0;
        }
        if (*c_build) {
            auto g = load_graph(slurp(graph_file));
            ContextStore store;
            auto res = build_kf_order(store, g, depth, ContextSource::synthesized, relax);
            std::cout << "border " << res.order.border_size << "\nthreshold "
                      << res.report.freq.threshold << "\nwitness-demand " << res.report.m_used
                      << "\nseparation " << res.report.r_used << "\ncheck "
                      << (res.report.check.all_true() ? "ok" : "fail") << "\n";
            if (!emit_file.empty()) spill(emit_file, save_order_file(res.order));
            return 0;
        }
        if (*c_check) {
            auto g = load_graph(slurp(graph_file));
            ContextStore store;
            auto o = load_order_file(slurp(order_file), g.n());
            if (o.k != depth) throw std::runtime_error("order file depth differs from --depth");
            auto plan = plan_kf_order(store, g, depth, relax);
            auto rep = check_kf_order(store, g, o, plan.freq, plan.tiers);
            std::cout << rep.str();
            return rep.all_true() ? 0 : 1;
        }
        if (*c_solve) {
            auto gfa = load_graph_file(slurp(graph_a));
            auto gfb = load_graph_file(slurp(graph_b));
            auto oa = ordered_from(gfa, order_a);
            auto ob = ordered_from(gfb, order_b);
            SolveResult res;
            try {
                res = solve_game(oa, ob, rounds, nullptr, node_budget);
            } catch (const game_error& e) {
                std::cout << "aborted " << e.what() << "\n";
                return 3;
            }
            std::cout << "winner " << (res.winner == Winner::duplicator ? "duplicator" : "spoiler")
                      << "\nconfigurations " << res.configurations << "\n";
            for (const auto& line : res.trace) std::cout << line << "\n";
            return res.winner == Winner::duplicator ? 0 : 1;
        }
        if (*c_verify) {
            auto ga = load_graph(slurp(graph_a));
            auto gb = load_graph(slurp(graph_b));
            auto oa = load_order_file(slurp(order_file_a), ga.n());
            auto ob = load_order_file(slurp(order_file_b), gb.n());
            BorderBijection phi;
            std::istringstream in(slurp(bijection_file));
            int a, b;
            while (in >> a >> b) phi.map[a] = b;
            ContextStore store;
            auto rep =
                verify_duplicator_strategy(store, ga, oa, gb, ob, phi, rounds, sample, seed);
            std::cout << "plays " << rep.plays_checked << "\nfailures " << rep.failures.size()
                      << "\nverified " << (rep.verified() ? "true" : "false") << "\n";
            for (size_t i = 0; i < rep.failures.size() && i < 10; ++i)
                std::cout << "failure " << rep.failures[i].invariant << " "
                          << rep.failures[i].trace << "\n";
            return rep.verified() ? 0 : 1;
        }
        if (*c_fpt) {
            auto g = load_graph(slurp(graph_file));
            auto f = load_formula(formula_file);
            ContextStore store;
            auto res = fpt_check_detail(store, g, f, paranoid, seed);
            std::cout << "value " << (res.value ? "true" : "false") << "\n";
            std::cout << "realised-outer " << res.realised_outer << "\n";
            if (paranoid)
                std::cout << "paranoid " << (res.paranoid_agreed ? "agreed" : "DISAGREED") << "\n";
            if (timing) {
                std::cout << "phase contexts ms " << res.context_ms << "\n";
                std::cout << "phase mc ms " << res.mc_ms << "\n";
            }
            if (paranoid && !res.paranoid_agreed) return 4;
            return res.value ? 0 : 1;
        }
        if (*c_gen) {
            ColouredGraph g;
            if (*g_cycle) g = corpus::gen_cycle(n);
            else if (*g_path) g = corpus::gen_path(n);
            else if (*g_bool) g = corpus::gen_boolean_algebra(set_size);
            else {
                std::vector<std::string> colours;
                std::istringstream in(colours_csv);
                std::string tok;
                while (std::getline(in, tok, ','))
                    if (!tok.empty()) colours.push_back(tok);
                g = corpus::gen_random_bounded_degree(n, dmax, colours, seed);
            }
            std::cout << save_graph(g);
            return 0;
        }
        if (*c_formulas) {
            FormulaPtr f;
            if (which == "phi1") f = corpus::phi1();
            else if (which == "phi2") f = corpus::phi2();
            else if (which == "gurevich") f = corpus::gurevich_phi();
            else throw CLI::ValidationError("unknown formula name: " + which);
            std::cout << print_formula(f) << "\n";
            return 0;
        }
        if (*c_pipe) return run_pipeline(graph_a, graph_b, depth, corpus_n, seed, relax, sample);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error " << e.what() << "\n";
        return 4;
    }
    return 2;
}
