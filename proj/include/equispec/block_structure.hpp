#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace equispec {

/// Parameters of an equitable (block-regular) graph ensemble: m block sizes
/// N_a and an m x m matrix of non-negative integer block degrees c_ab. Every
/// vertex in block a has exactly c_ab neighbors in block b.
///
/// Vertices are globally indexed 0..N-1 and blocks occupy contiguous index
/// ranges in declaration order.
struct BlockStructure {
    std::vector<int> sizes;
    std::vector<std::vector<int>> connectivity;

    int num_blocks() const { return static_cast<int>(sizes.size()); }

    std::int64_t total_vertices() const {
        return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
    }

    /// First global vertex index of block a.
    int block_offset(int a) const {
        return static_cast<int>(
            std::accumulate(sizes.begin(), sizes.begin() + a, std::int64_t{0}));
    }

    /// Vertex -> block lookup table for the contiguous layout.
    std::vector<int> block_assignment() const {
        std::vector<int> blocks;
        blocks.reserve(static_cast<std::size_t>(total_vertices()));
        for (int a = 0; a < num_blocks(); ++a) {
            blocks.insert(blocks.end(), static_cast<std::size_t>(sizes[a]), a);
        }
        return blocks;
    }
};

/// Compact one-line description, used for curve provenance tags.
inline std::string describe(const BlockStructure& s) {
    std::ostringstream out;
    out << "m=" << s.num_blocks() << " sizes=";
    for (std::size_t a = 0; a < s.sizes.size(); ++a) {
        out << (a ? "," : "") << s.sizes[a];
    }
    out << " c=[";
    for (std::size_t a = 0; a < s.connectivity.size(); ++a) {
        out << (a ? ",[" : "[");
        for (std::size_t b = 0; b < s.connectivity[a].size(); ++b) {
            out << (b ? "," : "") << s.connectivity[a][b];
        }
        out << "]";
    }
    out << "]";
    return out.str();
}

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }

    std::string to_string() const {
        std::string joined;
        for (const auto& v : violations) {
            if (!joined.empty()) joined += "; ";
            joined += v;
        }
        return joined;
    }
};

/// Checks every ensemble invariant and reports all violations:
///   - shape: at least one block, m x m connectivity, positive sizes,
///     non-negative degrees;
///   - equitability: N_a c_ab == N_b c_ba for every block pair;
///   - simple-graph feasibility: c_aa <= N_a - 1, c_ab <= N_b for a != b,
///     and N_a c_aa even (stub parity of the within-block regular graph).
inline ValidationReport validate_structure(const BlockStructure& s) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    const int m = s.num_blocks();
    if (m < 1) {
        fail("structure must have at least one block");
        return report;
    }
    if (static_cast<int>(s.connectivity.size()) != m) {
        fail("connectivity must be an m x m matrix");
        return report;
    }
    for (int a = 0; a < m; ++a) {
        if (static_cast<int>(s.connectivity[a].size()) != m) {
            fail("connectivity must be an m x m matrix");
            return report;
        }
    }

    bool shape_ok = true;
    for (int a = 0; a < m; ++a) {
        if (s.sizes[a] < 1) {
            fail("block " + std::to_string(a) + " must have positive size");
            shape_ok = false;
        }
        for (int b = 0; b < m; ++b) {
            if (s.connectivity[a][b] < 0) {
                fail("c[" + std::to_string(a) + "][" + std::to_string(b) +
                     "] must be non-negative");
                shape_ok = false;
            }
        }
    }
    if (!shape_ok) return report;

    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const std::int64_t lhs =
                std::int64_t{s.sizes[a]} * s.connectivity[a][b];
            const std::int64_t rhs =
                std::int64_t{s.sizes[b]} * s.connectivity[b][a];
            if (lhs != rhs) {
                fail("equitability violated for blocks (" + std::to_string(a) +
                     "," + std::to_string(b) + "): " + std::to_string(s.sizes[a]) +
                     "*" + std::to_string(s.connectivity[a][b]) +
                     " != " + std::to_string(s.sizes[b]) + "*" +
                     std::to_string(s.connectivity[b][a]));
            }
        }
    }

    for (int a = 0; a < m; ++a) {
        if (s.connectivity[a][a] > s.sizes[a] - 1) {
            fail("c[" + std::to_string(a) + "][" + std::to_string(a) +
                 "] exceeds N_a - 1, no simple regular graph exists");
        }
        if (std::int64_t{s.sizes[a]} * s.connectivity[a][a] % 2 != 0) {
            fail("N_a * c_aa is odd for block " + std::to_string(a) +
                 ", regular graph infeasible");
        }
        for (int b = 0; b < m; ++b) {
            if (b != a && s.connectivity[a][b] > s.sizes[b]) {
                fail("c[" + std::to_string(a) + "][" + std::to_string(b) +
                     "] exceeds size of block " + std::to_string(b));
            }
        }
    }
    return report;
}

}  // namespace equispec
