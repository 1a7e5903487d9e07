#ifndef CFO_TESTS_ORACLES_HPP
#define CFO_TESTS_ORACLES_HPP

// Test-side oracles, kept independent of the library code paths they check:
// brute-force pointed-ball isomorphism and small graph builders.

#include "cfo/graph.hpp"

#include <algorithm>
#include <vector>

namespace oracles {

inline cfo::ColouredGraph cycle(int n) {
    cfo::ColouredGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    if (n > 2) g.add_edge(n - 1, 0);
    return g;
}

inline cfo::ColouredGraph path(int n) {
    cfo::ColouredGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

// Exhaustive pointed isomorphism between the r-balls of (g1,v1) and (g2,v2):
// tries every bijection that fixes the centres and preserves colours/edges.
inline bool pointed_balls_isomorphic(const cfo::ColouredGraph& g1, int v1,
                                     const cfo::ColouredGraph& g2, int v2, int r) {
    auto b1 = cfo::ball(g1, v1, r);
    auto b2 = cfo::ball(g2, v2, r);
    if (b1.size() != b2.size()) return false;
    // centre first, rest permuted
    std::vector<int> rest1, rest2;
    for (int v : b1)
        if (v != v1) rest1.push_back(v);
    for (int v : b2)
        if (v != v2) rest2.push_back(v);
    std::sort(rest2.begin(), rest2.end());
    auto consistent = [&](const std::vector<int>& map1, const std::vector<int>& map2) {
        for (size_t i = 0; i < map1.size(); ++i) {
            if (g1.colour_mask(map1[i]) != g2.colour_mask(map2[i])) return false;
            for (size_t j = 0; j < map1.size(); ++j)
                if (g1.adjacent(map1[i], map1[j]) != g2.adjacent(map2[i], map2[j])) return false;
        }
        return true;
    };
    do {
        std::vector<int> map1{v1}, map2{v2};
        map1.insert(map1.end(), rest1.begin(), rest1.end());
        map2.insert(map2.end(), rest2.begin(), rest2.end());
        if (consistent(map1, map2)) return true;
    } while (std::next_permutation(rest2.begin(), rest2.end()));
    return false;
}

} // namespace oracles

#endif
