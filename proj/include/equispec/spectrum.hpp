#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "equispec/block_structure.hpp"
#include "equispec/core_periphery.hpp"
#include "equispec/errors.hpp"
#include "equispec/generate.hpp"
#include "equispec/graph.hpp"

namespace equispec {

enum class EigTag : std::uint8_t { Zero, Isolated, Continuous };

inline const char* to_string(EigTag tag) {
    switch (tag) {
        case EigTag::Zero: return "zero";
        case EigTag::Isolated: return "isolated";
        default: return "continuous";
    }
}

/// All N eigenvalues of the 0/1 adjacency matrix, ascending, by dense
/// symmetric eigendecomposition. Guarded by a size cap; the trace identities
/// sum(lambda) = 0 and sum(lambda^2) = 2|E| are checked internally.
inline std::vector<double> exact_eigenvalues(const EquitableGraph& g,
                                             int size_cap = 5000) {
    const int n = g.num_vertices();
    if (n > size_cap) {
        throw std::domain_error("graph size " + std::to_string(n) +
                                " exceeds the dense eigensolver cap " +
                                std::to_string(size_cap));
    }
    Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : g.edges) {
        adjacency(i, j) = 1.0;
        adjacency(j, i) = 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        adjacency, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("dense symmetric eigensolver did not converge");
    }
    std::vector<double> eigenvalues(solver.eigenvalues().data(),
                                    solver.eigenvalues().data() + n);

    const double trace = std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
    double square_sum = 0.0;
    for (double x : eigenvalues) square_sum += x * x;
    const double two_edges = 2.0 * static_cast<double>(g.edges.size());
    if (std::abs(trace) > 1e-6 * std::max(1.0, two_edges) ||
        std::abs(square_sum - two_edges) > 1e-6 * std::max(1.0, two_edges)) {
        throw NumericalError("eigenvalue trace identities violated");
    }
    return eigenvalues;
}

/// Splits one sample's sorted eigenvalues into the structural zeros
/// (|lambda| <= zero_tol), the isolated block-symmetric pair (nearest
/// eigenvalue within isolated_tol of lambda_-, lambda_+; at most one each)
/// and the continuous rest.
inline std::vector<EigTag> classify(const std::vector<double>& eigenvalues,
                                    const SpectralSummary& summary,
                                    double zero_tol = 1e-8,
                                    double isolated_tol = 1e-6) {
    std::vector<EigTag> tags(eigenvalues.size(), EigTag::Continuous);
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (std::abs(eigenvalues[i]) <= zero_tol) tags[i] = EigTag::Zero;
    }
    for (double target : {summary.lambda_minus, summary.lambda_plus}) {
        std::size_t best = eigenvalues.size();
        double best_dist = isolated_tol;
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
            if (tags[i] != EigTag::Continuous) continue;
            const double dist = std::abs(eigenvalues[i] - target);
            if (dist <= best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        if (best < eigenvalues.size()) tags[best] = EigTag::Isolated;
    }
    return tags;
}

/// Pooled exact spectra of an ensemble of independently seeded samples.
struct EmpiricalSpectrum {
    std::vector<double> eigenvalues;  // ascending over the whole pool
    std::vector<EigTag> tags;         // aligned with eigenvalues
    std::vector<int> sample_of;       // aligned with eigenvalues
    int n_samples = 0;
    int n_per_graph = 0;
    BlockStructure structure;
    std::uint64_t base_seed = 0;

    std::int64_t count(EigTag tag) const {
        return std::count(tags.begin(), tags.end(), tag);
    }

    std::vector<double> continuous_values() const {
        std::vector<double> values;
        values.reserve(eigenvalues.size());
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
            if (tags[i] == EigTag::Continuous) values.push_back(eigenvalues[i]);
        }
        return values;
    }
};

struct EnsembleOptions {
    double zero_tol = 1e-8;
    double isolated_tol = 1e-6;
    int size_cap = 5000;
    int threads = 1;
    SamplingOptions sampling;
    /// Classification reference. When absent it is derived from the structure
    /// if that matches the core-periphery class; otherwise only the zero tag
    /// is applied.
    std::optional<SpectralSummary> summary;
};

/// Samples n_samples graphs (per-sample generators drawn from seed and the
/// sample index), diagonalizes each, classifies per sample, and pools the
/// results sorted by eigenvalue. Samples run in parallel across threads;
/// the result does not depend on the thread count.
inline EmpiricalSpectrum ensemble_spectrum(const BlockStructure& s,
                                           int n_samples, std::uint64_t seed,
                                           const EnsembleOptions& options = {}) {
    if (n_samples < 1) {
        throw std::invalid_argument("ensemble needs n_samples >= 1");
    }
    {
        const auto report = validate_structure(s);
        if (!report.ok()) {
            throw InfeasibleError("Equitability condition does not apply: " +
                                  report.to_string());
        }
    }

    std::optional<SpectralSummary> summary = options.summary;
    if (!summary) {
        if (const auto params = as_core_periphery(s); params && params->kp >= 1) {
            summary = spectral_summary(params->k, params->kp, params->n_core);
        }
    }

    const int n = static_cast<int>(s.total_vertices());
    std::vector<std::vector<double>> per_sample_eigs(
        static_cast<std::size_t>(n_samples));
    std::vector<std::vector<EigTag>> per_sample_tags(
        static_cast<std::size_t>(n_samples));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_samples));

    auto run_sample = [&](int index) {
        try {
            auto rng = detail::stream_rng(seed, static_cast<std::uint64_t>(index));
            const auto graph = generate_equitable(s, rng, options.sampling);
            auto eigs = exact_eigenvalues(graph, options.size_cap);
            auto tags = summary ? classify(eigs, *summary, options.zero_tol,
                                           options.isolated_tol)
                                : std::vector<EigTag>(eigs.size(),
                                                      EigTag::Continuous);
            if (!summary) {
                for (std::size_t i = 0; i < eigs.size(); ++i) {
                    if (std::abs(eigs[i]) <= options.zero_tol) {
                        tags[i] = EigTag::Zero;
                    }
                }
            }
            per_sample_eigs[static_cast<std::size_t>(index)] = std::move(eigs);
            per_sample_tags[static_cast<std::size_t>(index)] = std::move(tags);
        } catch (...) {
            errors[static_cast<std::size_t>(index)] = std::current_exception();
        }
    };

    const int threads = std::max(1, std::min(options.threads, n_samples));
    if (threads == 1) {
        for (int i = 0; i < n_samples; ++i) run_sample(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            workers.emplace_back([&, t]() {
                for (int i = t; i < n_samples; i += threads) run_sample(i);
            });
        }
        for (auto& w : workers) w.join();
    }
    for (int i = 0; i < n_samples; ++i) {
        if (!errors[static_cast<std::size_t>(i)]) continue;
        const std::string prefix = "sample " + std::to_string(i) + ": ";
        try {
            std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
        } catch (const SamplingError& e) {
            throw SamplingError(prefix + e.what(), e.attempts());
        } catch (const InfeasibleError& e) {
            throw InfeasibleError(prefix + e.what());
        } catch (const std::exception& e) {
            throw NumericalError(prefix + e.what());
        }
    }

    EmpiricalSpectrum spectrum;
    spectrum.n_samples = n_samples;
    spectrum.n_per_graph = n;
    spectrum.structure = s;
    spectrum.base_seed = seed;
    const std::size_t total = static_cast<std::size_t>(n_samples) * n;
    spectrum.eigenvalues.reserve(total);
    spectrum.tags.reserve(total);
    spectrum.sample_of.reserve(total);

    std::vector<std::size_t> order(total);
    std::vector<double> pooled(total);
    std::vector<EigTag> pooled_tags(total);
    std::vector<int> pooled_sample(total);
    std::size_t cursor = 0;
    for (int i = 0; i < n_samples; ++i) {
        const auto& eigs = per_sample_eigs[static_cast<std::size_t>(i)];
        const auto& tags = per_sample_tags[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < eigs.size(); ++j, ++cursor) {
            pooled[cursor] = eigs[j];
            pooled_tags[cursor] = tags[j];
            pooled_sample[cursor] = i;
        }
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pooled[a] != pooled[b]) return pooled[a] < pooled[b];
        return pooled_sample[a] < pooled_sample[b];
    });
    for (std::size_t idx : order) {
        spectrum.eigenvalues.push_back(pooled[idx]);
        spectrum.tags.push_back(pooled_tags[idx]);
        spectrum.sample_of.push_back(pooled_sample[idx]);
    }
    return spectrum;
}

}  // namespace equispec
