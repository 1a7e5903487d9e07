#ifndef CFO_GAME_HPP
#define CFO_GAME_HPP

#include "cfo/context.hpp"
#include "cfo/evaluator.hpp"
#include "cfo/formula.hpp"
#include "cfo/graph.hpp"
#include "cfo/order.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfo {

struct game_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Side { A, B };

struct Move {
    enum class Kind { root_intro, child_intro, continuation } kind;
    Side side = Side::A;
    std::string word;               // cluster being extended / opened
    int index = 0;                  // pebble index (0 for intros)
    int guard = -1;                 // continuation guard index
    int vertex = 0;
    std::string str() const;
};

// Pebbled game state. Valuations are kept as sorted (variable, vertex) maps;
// the words list records cluster introduction order for canonicalisation.
struct GameConfiguration {
    IndexSet index_set;
    Valuation val_a, val_b;
    int rounds_left = 0;
    std::vector<Move> history;
};

std::vector<Move> legal_moves(const OrderedGraph& oa, const OrderedGraph& ob,
                              const GameConfiguration& c, Side side);

// all vertices the mirror side may answer with (continuations restricted to
// the mirrored guard's neighbours; empty means Duplicator loses immediately)
std::vector<int> duplicator_answers(const OrderedGraph& oa, const OrderedGraph& ob,
                                    const GameConfiguration& c, const Move& spoiler);

// Winning condition: per cluster, the pebble correspondence is a partial
// isomorphism over edges, colours, equality and the within-cluster order;
// additionally, for every child cluster, the map on (cluster w) + (child
// root) preserves the order relation.
bool is_winning_config(const OrderedGraph& oa, const OrderedGraph& ob,
                       const GameConfiguration& c);

enum class Winner { duplicator, spoiler };

struct SolveResult {
    Winner winner = Winner::duplicator;
    std::vector<std::string> trace; // one principal line of play
    long long configurations = 0;
};

// Exact memoised minimax over canonicalised configurations. Child-intro
// letters collapse to the least unused letter.
SolveResult solve_game(const OrderedGraph& oa, const OrderedGraph& ob, int rounds,
                       const GameConfiguration* initial = nullptr,
                       long long node_budget = 50'000'000);

struct StrategyFailure {
    std::string trace;
    std::string invariant; // S_r | C_r | I_r | winning | answer
};

struct StrategyReport {
    long long plays_checked = 0;
    std::vector<StrategyFailure> failures;
    bool verified() const { return failures.empty(); }
};

// Walks every Spoiler play to depth `rounds`, computing Duplicator's reply by
// the explicit (k,F)-order strategy (border bijection in the safety parts,
// interval/ball mirroring inside the cluster root's locality, universal
// segments otherwise) and asserting the S_r, C_r, I_r invariants after every
// round and the winning condition at the end. `sample_per_node`, when
// positive, bounds the Spoiler branching per node (seeded), for informational
// runs at scale.
StrategyReport verify_duplicator_strategy(ContextStore& store, const ColouredGraph& ga,
                                          const KfOrder& oa, const ColouredGraph& gb,
                                          const KfOrder& ob, const BorderBijection& phi,
                                          int rounds, int sample_per_node = 0,
                                          uint64_t sample_seed = 0);

} // namespace cfo

#endif
