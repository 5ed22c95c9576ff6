#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "equispec/block_structure.hpp"
#include "equispec/detail/random.hpp"
#include "equispec/errors.hpp"
#include "equispec/graph.hpp"

namespace equispec {

struct SamplingOptions {
    /// Whole-matching restarts allowed per sub-graph before failing loudly.
    int max_restarts = 1000;
};

namespace detail {

inline std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

inline std::vector<int> distinct_sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Can any legal pair still be formed from the leftover stubs? Stuck
/// configurations (only collisions remain) force a restart of the attempt.
inline bool pairable_regular(const std::vector<int>& stubs,
                             const std::unordered_set<std::uint64_t>& edges) {
    const auto verts = distinct_sorted(stubs);
    for (std::size_t i = 0; i < verts.size(); ++i) {
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            if (!edges.contains(edge_key(verts[i], verts[j]))) return true;
        }
    }
    return false;
}

inline bool pairable_bipartite(const std::vector<int>& left_stubs,
                               const std::vector<int>& right_stubs,
                               const std::unordered_set<std::uint64_t>& edges) {
    const auto left = distinct_sorted(left_stubs);
    const auto right = distinct_sorted(right_stubs);
    for (int u : left) {
        for (int v : right) {
            if (!edges.contains(edge_key(u, v))) return true;
        }
    }
    return false;
}

/// One pairing attempt for a k-regular graph: shuffle the stub list, pair
/// consecutive stubs, recycle colliding pairs into the next round. Returns
/// nothing when the leftover stubs admit no legal pair.
inline std::optional<std::vector<Edge>> try_pair_regular(
    int k, std::span<const int> vertices, std::mt19937_64& rng) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(k) * vertices.size());
    for (int v : vertices) {
        stubs.insert(stubs.end(), static_cast<std::size_t>(k), v);
    }

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(stubs.size());
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);

    // Round cap: a legal completion normally takes a handful of rounds;
    // a long unlucky streak is cheaper to restart than to ride out.
    const std::size_t max_rounds = 64 + 4 * stubs.size();
    for (std::size_t round = 0; !stubs.empty(); ++round) {
        if (round >= max_rounds) return std::nullopt;
        shuffle(stubs, rng);
        std::vector<int> retry;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            const int u = std::min(stubs[i], stubs[i + 1]);
            const int v = std::max(stubs[i], stubs[i + 1]);
            if (u == v || !seen.insert(edge_key(u, v)).second) {
                retry.push_back(u);
                retry.push_back(v);
            } else {
                edges.emplace_back(u, v);
            }
        }
        if (!retry.empty() && !pairable_regular(retry, seen)) {
            return std::nullopt;
        }
        stubs = std::move(retry);
    }
    return edges;
}

inline std::optional<std::vector<Edge>> try_pair_bipartite(
    std::span<const int> left, int left_degree, std::span<const int> right,
    int right_degree, std::mt19937_64& rng) {
    std::vector<int> left_stubs;
    left_stubs.reserve(left.size() * static_cast<std::size_t>(left_degree));
    for (int v : left) {
        left_stubs.insert(left_stubs.end(),
                          static_cast<std::size_t>(left_degree), v);
    }
    std::vector<int> right_stubs;
    right_stubs.reserve(right.size() * static_cast<std::size_t>(right_degree));
    for (int v : right) {
        right_stubs.insert(right_stubs.end(),
                           static_cast<std::size_t>(right_degree), v);
    }

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(left_stubs.size());
    std::vector<Edge> edges;
    edges.reserve(left_stubs.size());

    const std::size_t max_rounds = 64 + 4 * left_stubs.size();
    for (std::size_t round = 0; !left_stubs.empty(); ++round) {
        if (round >= max_rounds) return std::nullopt;
        shuffle(left_stubs, rng);
        shuffle(right_stubs, rng);
        std::vector<int> retry_left;
        std::vector<int> retry_right;
        for (std::size_t i = 0; i < left_stubs.size(); ++i) {
            const int u = left_stubs[i];
            const int v = right_stubs[i];
            if (!seen.insert(edge_key(u, v)).second) {
                retry_left.push_back(u);
                retry_right.push_back(v);
            } else {
                edges.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
        if (!retry_left.empty() &&
            !pairable_bipartite(retry_left, retry_right, seen)) {
            return std::nullopt;
        }
        left_stubs = std::move(retry_left);
        right_stubs = std::move(retry_right);
    }
    return edges;
}

}  // namespace detail

/// Samples a simple k-regular graph on the given vertices by stub pairing:
/// colliding pairs (self-loops, repeats) are re-drawn, and the whole matching
/// restarts when the leftovers cannot be paired legally.
inline std::vector<Edge> generate_regular(int k, std::span<const int> vertices,
                                          std::mt19937_64& rng,
                                          const SamplingOptions& options = {}) {
    const auto n = static_cast<std::int64_t>(vertices.size());
    if (k < 0 || k > n - 1) {
        throw InfeasibleError("regular degree k=" + std::to_string(k) +
                              " not in [0, n-1] for n=" + std::to_string(n));
    }
    if (k * n % 2 != 0) {
        throw InfeasibleError("k*n must be even to pair stubs (k=" +
                              std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
    if (k == 0) return {};

    for (int attempt = 1; attempt <= options.max_restarts; ++attempt) {
        if (auto edges = detail::try_pair_regular(k, vertices, rng)) {
            std::sort(edges->begin(), edges->end());
            return std::move(*edges);
        }
    }
    throw SamplingError("regular pairing failed after " +
                            std::to_string(options.max_restarts) + " restarts",
                        options.max_restarts);
}

/// Samples a simple bipartite graph where every left vertex has degree k and
/// every right vertex has degree k*|left|/|right| (which must be an integer,
/// the equitability condition restricted to one block pair).
inline std::vector<Edge> generate_biregular(int k, std::span<const int> left,
                                            std::span<const int> right,
                                            std::mt19937_64& rng,
                                            const SamplingOptions& options = {}) {
    const auto nl = static_cast<std::int64_t>(left.size());
    const auto nr = static_cast<std::int64_t>(right.size());
    if (nl == 0 || nr == 0) {
        throw InfeasibleError("biregular generation needs non-empty sides");
    }
    if (k < 0 || k > nr) {
        throw InfeasibleError("biregular degree k=" + std::to_string(k) +
                              " not in [0, |right|]");
    }
    if (k == 0) return {};
    if (k * nl % nr != 0) {
        throw InfeasibleError("right degree k*|left|/|right| = " +
                              std::to_string(k) + "*" + std::to_string(nl) + "/" +
                              std::to_string(nr) + " is not an integer");
    }
    const auto right_degree = static_cast<int>(k * nl / nr);
    if (right_degree > nl) {
        throw InfeasibleError("right degree " + std::to_string(right_degree) +
                              " exceeds |left|=" + std::to_string(nl));
    }

    for (int attempt = 1; attempt <= options.max_restarts; ++attempt) {
        if (auto edges =
                detail::try_pair_bipartite(left, k, right, right_degree, rng)) {
            std::sort(edges->begin(), edges->end());
            return std::move(*edges);
        }
    }
    throw SamplingError("biregular pairing failed after " +
                            std::to_string(options.max_restarts) + " restarts",
                        options.max_restarts);
}

/// Samples an equitable graph by assembling a c_aa-regular graph inside each
/// block and a c_ab-biregular graph between each block pair, drawn in fixed
/// (a, b) lexicographic order from a single generator.
inline EquitableGraph generate_equitable(const BlockStructure& s,
                                         std::mt19937_64& rng,
                                         const SamplingOptions& options = {}) {
    const auto report = validate_structure(s);
    if (!report.ok()) {
        throw InfeasibleError("Equitability condition does not apply: " +
                              report.to_string());
    }

    const int m = s.num_blocks();
    std::vector<std::vector<int>> block_vertices(m);
    for (int a = 0; a < m; ++a) {
        block_vertices[a].resize(static_cast<std::size_t>(s.sizes[a]));
        std::iota(block_vertices[a].begin(), block_vertices[a].end(),
                  s.block_offset(a));
    }

    EquitableGraph g;
    g.structure = s;
    g.block_of = s.block_assignment();
    for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
            std::vector<Edge> part;
            if (a == b) {
                part = generate_regular(s.connectivity[a][a], block_vertices[a],
                                        rng, options);
            } else if (s.connectivity[a][b] > 0) {
                part = generate_biregular(s.connectivity[a][b], block_vertices[a],
                                          block_vertices[b], rng, options);
            }
            g.edges.insert(g.edges.end(), part.begin(), part.end());
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

inline EquitableGraph generate_equitable(const BlockStructure& s,
                                         std::uint64_t seed,
                                         const SamplingOptions& options = {}) {
    std::mt19937_64 rng(seed);
    return generate_equitable(s, rng, options);
}

}  // namespace equispec
