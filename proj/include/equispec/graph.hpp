#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "equispec/block_structure.hpp"

namespace equispec {

using Edge = std::pair<int, int>;

/// A sampled member of an equitable ensemble. Immutable after construction:
/// edges are stored normalized (i < j), sorted lexicographically, without
/// duplicates or self-loops.
struct EquitableGraph {
    BlockStructure structure;
    std::vector<int> block_of;
    std::vector<Edge> edges;

    int num_vertices() const { return static_cast<int>(block_of.size()); }
};

/// Number of edges with one endpoint in block a and the other in block b
/// (a == b counts within-block edges once).
inline std::int64_t count_block_edges(const EquitableGraph& g, int a, int b) {
    std::int64_t count = 0;
    for (const auto& [i, j] : g.edges) {
        const int bi = g.block_of[i];
        const int bj = g.block_of[j];
        if ((bi == a && bj == b) || (bi == b && bj == a)) ++count;
    }
    return count;
}

/// Exact regularity check: every vertex of block a must have exactly c_ab
/// neighbors in block b, for all pairs (a, b). Also rejects malformed edge
/// lists (self-loops, unnormalized or duplicate pairs, indices out of range).
inline bool verify_regularity(const EquitableGraph& g) {
    const int n = g.num_vertices();
    const int m = g.structure.num_blocks();
    if (g.structure.total_vertices() != n) return false;

    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& [i, j] = g.edges[e];
        if (i < 0 || j < 0 || i >= n || j >= n || i >= j) return false;
        if (e > 0 && g.edges[e] <= g.edges[e - 1]) return false;
    }

    // counts[i*m + b] = neighbors of vertex i in block b
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n) * m, 0);
    for (const auto& [i, j] : g.edges) {
        ++counts[static_cast<std::size_t>(i) * m + g.block_of[j]];
        ++counts[static_cast<std::size_t>(j) * m + g.block_of[i]];
    }
    for (int i = 0; i < n; ++i) {
        const int a = g.block_of[i];
        if (a < 0 || a >= m) return false;
        for (int b = 0; b < m; ++b) {
            if (counts[static_cast<std::size_t>(i) * m + b] !=
                g.structure.connectivity[a][b]) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace equispec
