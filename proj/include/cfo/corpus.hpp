#ifndef CFO_CORPUS_HPP
#define CFO_CORPUS_HPP

#include "cfo/fo.hpp"
#include "cfo/formula.hpp"
#include "cfo/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfo::corpus {

ColouredGraph gen_cycle(int n);
ColouredGraph gen_path(int n);

// Vertices are the subsets of an s-element set; u,v are adjacent iff one is a
// proper subset of the other (strict comparability). Guarded to s <= 4.
ColouredGraph gen_boolean_algebra(int set_size, bool force = false);

// Seeded random graph with a hard degree cap; each vertex gets one uniformly
// chosen colour from the palette (no colour when the palette is empty).
ColouredGraph gen_random_bounded_degree(int n, int d, const std::vector<std::string>& colours,
                                        uint64_t seed);

// The paper-derived fixtures: a triangle inside cluster `a`, the
// interval-triangle formula (free root variable), and the order-invariant
// even-boolean-algebra sentence.
FormulaPtr phi1();
FormulaPtr phi2();
FormulaPtr gurevich_phi();

struct SentenceGenOptions {
    bool allow_order_atoms = true;
    // emit only tautological order patterns (x<y | x=y | y<x); keeps the
    // sentence order-invariant while still exercising order machinery
    bool order_tautologies_only = false;
    int max_nodes = 60;
};

// Deterministic well-formed sentences of rank <= k over the colour schema.
// The phi1/phi2 closures are appended as fixed anchors whenever their rank
// fits. Every output validates by construction.
std::vector<FormulaPtr> gen_cfo_sentences(int k, const std::vector<std::string>& schema,
                                          int count, uint64_t seed,
                                          const SentenceGenOptions& opts = {});

// Random plain-FO sentences over {E, colours, =} of rank <= k (no order).
std::vector<fo::FoPtr> gen_fo_sentences(int k, const std::vector<std::string>& schema,
                                        int count, uint64_t seed);

// Targeted mutation operators that each break exactly one syntax rule family.
enum class Mutation {
    break_guard,
    break_namespace,
    cross_cluster_edge,
    cross_cluster_equality,
    skip_continuation_index,
    root_intro_nonempty,
};

constexpr int mutation_count = 6;

// Applies the operator somewhere in the sentence; nullopt when no applicable
// site exists.
std::optional<FormulaPtr> mutate_sentence(const FormulaPtr& sentence, Mutation op);

} // namespace cfo::corpus

#endif
