#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "equispec/cavity.hpp"
#include "equispec/comparison.hpp"
#include "equispec/core_periphery.hpp"
#include "equispec/graph.hpp"
#include "equispec/spectrum.hpp"

namespace equispec {

using json = nlohmann::json;

/// Shortest round-trip decimal form, locale-independent. Keeps outputs
/// byte-identical for identical runs.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

// ---------------------------------------------------------------------------
// Edge-list and block-assignment files
// ---------------------------------------------------------------------------

/// Header line `# equitable m=<m> sizes=<N_1,...> seed=<s>`, then one
/// `i j` pair per line with i < j, ascending.
inline void write_edge_list(std::ostream& out, const EquitableGraph& g,
                            std::uint64_t seed) {
    out << "# equitable m=" << g.structure.num_blocks() << " sizes=";
    for (std::size_t a = 0; a < g.structure.sizes.size(); ++a) {
        out << (a ? "," : "") << g.structure.sizes[a];
    }
    out << " seed=" << seed << "\n";
    for (const auto& [i, j] : g.edges) {
        out << i << " " << j << "\n";
    }
}

/// One `vertex block` pair per line.
inline void write_block_assignment(std::ostream& out, const EquitableGraph& g) {
    for (int v = 0; v < g.num_vertices(); ++v) {
        out << v << " " << g.block_of[v] << "\n";
    }
}

struct EdgeListData {
    int m = 0;
    std::vector<int> sizes;
    std::uint64_t seed = 0;
    std::vector<Edge> edges;
};

inline EdgeListData read_edge_list(std::istream& in) {
    EdgeListData data;
    std::string header;
    if (!std::getline(in, header) || header.rfind("# equitable ", 0) != 0) {
        throw std::runtime_error("missing '# equitable' edge-list header");
    }
    std::istringstream fields(header.substr(std::string("# equitable ").size()));
    std::string field;
    while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "m") {
            data.m = std::stoi(value);
        } else if (key == "seed") {
            data.seed = std::stoull(value);
        } else if (key == "sizes") {
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ',')) {
                data.sizes.push_back(std::stoi(item));
            }
        }
    }
    if (data.m <= 0 || static_cast<int>(data.sizes.size()) != data.m) {
        throw std::runtime_error("malformed edge-list header: " + header);
    }
    int i = 0;
    int j = 0;
    while (in >> i >> j) {
        data.edges.emplace_back(i, j);
    }
    return data;
}

inline std::vector<int> read_block_assignment(std::istream& in) {
    std::vector<int> block_of;
    int vertex = 0;
    int block = 0;
    while (in >> vertex >> block) {
        if (vertex != static_cast<int>(block_of.size())) {
            throw std::runtime_error("block assignment must list vertices 0..N-1 in order");
        }
        block_of.push_back(block);
    }
    return block_of;
}

/// Rebuilds a graph from the two files; the connectivity matrix is inferred
/// from the neighbor counts of the first vertex of each block (regularity of
/// the whole graph can then be checked with verify_regularity).
inline EquitableGraph graph_from_files(const EdgeListData& data,
                                       const std::vector<int>& block_of) {
    EquitableGraph g;
    g.structure.sizes = data.sizes;
    g.block_of = block_of;
    g.edges = data.edges;

    const int n = static_cast<int>(block_of.size());
    for (const auto& [i, j] : g.edges) {
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw std::runtime_error("edge endpoint out of range: " +
                                     std::to_string(i) + " " + std::to_string(j));
        }
    }
    for (int b : block_of) {
        if (b < 0 || b >= data.m) {
            throw std::runtime_error("block index out of range: " +
                                     std::to_string(b));
        }
    }

    const int m = data.m;
    std::vector<int> first_vertex(static_cast<std::size_t>(m), -1);
    for (int v = 0; v < static_cast<int>(block_of.size()); ++v) {
        const int a = block_of[v];
        if (a >= 0 && a < m && first_vertex[static_cast<std::size_t>(a)] < 0) {
            first_vertex[static_cast<std::size_t>(a)] = v;
        }
    }
    g.structure.connectivity.assign(static_cast<std::size_t>(m),
                                    std::vector<int>(static_cast<std::size_t>(m), 0));
    for (const auto& [i, j] : g.edges) {
        for (int a = 0; a < m; ++a) {
            if (i == first_vertex[static_cast<std::size_t>(a)]) {
                ++g.structure.connectivity[static_cast<std::size_t>(a)]
                                          [static_cast<std::size_t>(block_of[j])];
            }
            if (j == first_vertex[static_cast<std::size_t>(a)]) {
                ++g.structure.connectivity[static_cast<std::size_t>(a)]
                                          [static_cast<std::size_t>(block_of[i])];
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

inline void write_density_csv(std::ostream& out, const DensityCurve& curve) {
    out << "lambda,rho\n";
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        out << format_double(curve.lambdas[i]) << ","
            << format_double(curve.rho[i]) << "\n";
    }
}

inline DensityCurve read_density_csv(std::istream& in) {
    DensityCurve curve;
    std::string line;
    if (!std::getline(in, line) || line != "lambda,rho") {
        throw std::runtime_error("missing 'lambda,rho' CSV header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("malformed CSV row: " + line);
        }
        curve.lambdas.push_back(std::stod(line.substr(0, comma)));
        curve.rho.push_back(std::stod(line.substr(comma + 1)));
    }
    return curve;
}

/// `sample,eigenvalue,tag` rows in pooled (ascending eigenvalue) order.
inline void write_spectrum_csv(std::ostream& out,
                               const EmpiricalSpectrum& spectrum) {
    out << "sample,eigenvalue,tag\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
        out << spectrum.sample_of[i] << ","
            << format_double(spectrum.eigenvalues[i]) << ","
            << to_string(spectrum.tags[i]) << "\n";
    }
}

inline void write_histogram_csv(std::ostream& out,
                                const HistogramComparison& comparison) {
    out << "bin_lo,bin_hi,empirical,analytic\n";
    for (std::size_t b = 0; b + 1 < comparison.bin_edges.size(); ++b) {
        out << format_double(comparison.bin_edges[b]) << ","
            << format_double(comparison.bin_edges[b + 1]) << ","
            << format_double(comparison.empirical_density[b]) << ","
            << format_double(comparison.analytic_density[b]) << "\n";
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json to_json(const BlockStructure& s) {
    return json{{"sizes", s.sizes}, {"connectivity", s.connectivity}};
}

inline BlockStructure structure_from_json(const json& j) {
    BlockStructure s;
    s.sizes = j.at("sizes").get<std::vector<int>>();
    s.connectivity = j.at("connectivity").get<std::vector<std::vector<int>>>();
    return s;
}

inline json to_json(const SpectralSummary& summary) {
    json support = json::array();
    for (const auto& band : summary.support) {
        support.push_back(json::array({band.lo, band.hi}));
    }
    return json{{"k", summary.k},
                {"kp", summary.kp},
                {"n_core", summary.n_core},
                {"support", support},
                {"lambda_minus", summary.lambda_minus},
                {"lambda_plus", summary.lambda_plus},
                {"zero_multiplicity", summary.zero_multiplicity},
                {"continuous_fraction", summary.continuous_fraction}};
}

inline json curve_sidecar_json(const DensityCurve& curve,
                               const BlockStructure& structure,
                               const CavityOptions& options) {
    json failures = json::array();
    for (const auto& failure : curve.failures) {
        failures.push_back(
            json{{"lambda", failure.lambda}, {"reason", failure.reason}});
    }
    return json{{"epsilon", curve.epsilon},
                {"tol", options.tol},
                {"damping", options.damping},
                {"structure", to_json(structure)},
                {"failures", failures}};
}

inline json comparison_json(const HistogramComparison& comparison,
                            const EmpiricalSpectrum& spectrum) {
    return json{{"l1", comparison.l1_distance},
                {"sup_cdf", comparison.sup_cdf_distance},
                {"n_bins", comparison.bin_edges.size() - 1},
                {"zero_count", spectrum.count(EigTag::Zero)},
                {"isolated_found", spectrum.count(EigTag::Isolated)}};
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

template <typename Writer>
void write_with(const std::string& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    writer(out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace equispec
