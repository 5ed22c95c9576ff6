#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "equispec/block_structure.hpp"
#include "equispec/errors.hpp"

namespace equispec {

struct CavityOptions {
    double tol = 1e-10;    // convergence threshold on the max entry change
    int max_iter = 100000;
    double damping = 0.3;  // new = (1-d)*candidate + d*old
};

/// Fixed point of the reduced block cavity system at one complex point
/// z = lambda - i*eps. cavity(a, b) holds the variance of a block-a vertex
/// with one block-b neighbor removed; block(a) the full per-block variance.
struct CavitySolution {
    std::complex<double> z;
    Eigen::MatrixXcd cavity;
    Eigen::VectorXcd block;
    int iterations = 0;
    double residual = 0.0;  // max |F(cavity) - cavity| at return
};

namespace detail {

/// One synchronous sweep of the block cavity map,
///   F(D)(a,b) = 1 / (z - sum_c max(c_ac - [c==b], 0) * D(c,a)).
/// The clamp covers rows with c_ac = 0 where the cavity index is adjacent
/// in name only.
inline void cavity_sweep(const BlockStructure& s, std::complex<double> z,
                         const Eigen::MatrixXcd& current,
                         Eigen::MatrixXcd& next) {
    const int m = s.num_blocks();
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            std::complex<double> acc{0.0, 0.0};
            for (int c = 0; c < m; ++c) {
                const int weight = s.connectivity[a][c] - (c == b ? 1 : 0);
                if (weight > 0) {
                    acc += static_cast<double>(weight) * current(c, a);
                }
            }
            const std::complex<double> denom = z - acc;
            if (std::abs(denom) < 1e-300) {
                throw NumericalError(
                    "cavity update denominator underflowed at z = (" +
                    std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                    ")");
            }
            next(a, b) = 1.0 / denom;
        }
    }
}

}  // namespace detail

/// Solves the m^2-entry cavity fixed point by damped synchronous sweeps from
/// the 1/z initial condition (exact for degree-zero rows, stable off
/// support; iterating from there with Im[z] < 0 stays on the physical branch
/// Im >= 0). The returned matrix is certified: one more undamped sweep moves
/// no entry by more than tol.
inline CavitySolution solve_cavity(const BlockStructure& s,
                                   std::complex<double> z,
                                   const CavityOptions& options = {},
                                   const Eigen::MatrixXcd* warm_start = nullptr) {
    const auto report = validate_structure(s);
    if (!report.ok()) {
        throw InfeasibleError("invalid structure: " + report.to_string());
    }
    if (!(z.imag() < 0.0)) {
        throw std::domain_error(
            "spectral parameter must lie below the real axis (z = lambda - "
            "i*eps with eps > 0)");
    }
    if (!(options.tol > 0.0) || options.max_iter < 1 ||
        !(options.damping >= 0.0 && options.damping < 1.0)) {
        throw std::invalid_argument("tol > 0, max_iter >= 1, damping in [0,1)");
    }

    const int m = s.num_blocks();
    CavitySolution solution;
    solution.z = z;
    solution.cavity = warm_start && warm_start->rows() == m &&
                              warm_start->cols() == m
                          ? *warm_start
                          : Eigen::MatrixXcd::Constant(m, m, 1.0 / z);

    Eigen::MatrixXcd candidate(m, m);
    double residual = 0.0;
    bool converged = false;
    for (int iter = 0; iter <= options.max_iter; ++iter) {
        detail::cavity_sweep(s, z, solution.cavity, candidate);
        residual = (candidate - solution.cavity).cwiseAbs().maxCoeff();
        if (residual <= options.tol) {
            solution.iterations = iter;
            solution.residual = residual;
            converged = true;
            break;
        }
        if (iter == options.max_iter) break;
        solution.cavity = (1.0 - options.damping) * candidate +
                          options.damping * solution.cavity;
    }
    if (!converged) {
        throw ConvergenceError("cavity iteration did not converge (residual " +
                                   std::to_string(residual) + " after " +
                                   std::to_string(options.max_iter) +
                                   " sweeps)",
                               residual, options.max_iter);
    }

    solution.block.resize(m);
    for (int a = 0; a < m; ++a) {
        std::complex<double> acc{0.0, 0.0};
        for (int c = 0; c < m; ++c) {
            if (s.connectivity[a][c] > 0) {
                acc += static_cast<double>(s.connectivity[a][c]) *
                       solution.cavity(c, a);
            }
        }
        const std::complex<double> denom = z - acc;
        if (std::abs(denom) < 1e-300) {
            throw NumericalError("block variance denominator underflowed");
        }
        solution.block(a) = 1.0 / denom;
    }
    return solution;
}

/// Spectral density at one point, rho = sum_a N_a Im[block_a] / (pi N),
/// clamped at zero against negative round-off.
inline double density_at(const BlockStructure& s, double lambda, double epsilon,
                         const CavityOptions& options = {}) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("regularizer epsilon must be positive");
    }
    const auto solution =
        solve_cavity(s, std::complex<double>(lambda, -epsilon), options);
    double weighted = 0.0;
    for (int a = 0; a < s.num_blocks(); ++a) {
        weighted += s.sizes[a] * solution.block(a).imag();
    }
    const double rho =
        weighted / (std::numbers::pi * static_cast<double>(s.total_vertices()));
    return rho < 0.0 ? 0.0 : rho;
}

/// Density samples over a grid, with per-point provenance for failures.
struct DensityCurve {
    std::vector<double> lambdas;  // strictly ascending, converged points only
    std::vector<double> rho;
    double epsilon = 0.0;
    std::string provenance;

    struct Failure {
        double lambda = 0.0;
        std::string reason;
    };
    std::vector<Failure> failures;
};

/// Sweeps the density over a uniform grid. Within a chunk each point
/// warm-starts from its predecessor; chunks run in parallel (one per thread)
/// and are merged in grid order. A point that fails from the warm start is
/// retried cold before being recorded and skipped.
inline DensityCurve density_grid(const BlockStructure& s, double lambda_min,
                                 double lambda_max, int n_points,
                                 double epsilon,
                                 const CavityOptions& options = {},
                                 int threads = 1) {
    if (n_points < 2) {
        throw std::invalid_argument("density grid needs n_points >= 2");
    }
    if (!(lambda_min < lambda_max)) {
        throw std::invalid_argument("density grid needs lambda_min < lambda_max");
    }
    if (!(epsilon > 0.0)) {
        throw std::domain_error("regularizer epsilon must be positive");
    }
    {
        const auto report = validate_structure(s);
        if (!report.ok()) {
            throw InfeasibleError("invalid structure: " + report.to_string());
        }
    }

    const double n_total = static_cast<double>(s.total_vertices());
    const double step = (lambda_max - lambda_min) / (n_points - 1);
    std::vector<double> values(static_cast<std::size_t>(n_points), 0.0);
    std::vector<char> failed(static_cast<std::size_t>(n_points), 0);
    std::vector<std::string> reasons(static_cast<std::size_t>(n_points));

    auto run_chunk = [&](int begin, int end) {
        Eigen::MatrixXcd warm;
        bool have_warm = false;
        for (int i = begin; i < end; ++i) {
            const double lambda = lambda_min + i * step;
            const std::complex<double> z(lambda, -epsilon);
            try {
                CavitySolution solution;
                try {
                    solution = solve_cavity(s, z, options,
                                            have_warm ? &warm : nullptr);
                } catch (const ConvergenceError&) {
                    if (!have_warm) throw;
                    solution = solve_cavity(s, z, options, nullptr);
                }
                double weighted = 0.0;
                for (int a = 0; a < s.num_blocks(); ++a) {
                    weighted += s.sizes[a] * solution.block(a).imag();
                }
                const double rho = weighted / (std::numbers::pi * n_total);
                values[static_cast<std::size_t>(i)] = rho < 0.0 ? 0.0 : rho;
                warm = solution.cavity;
                have_warm = true;
            } catch (const std::exception& e) {
                failed[static_cast<std::size_t>(i)] = 1;
                reasons[static_cast<std::size_t>(i)] = e.what();
                have_warm = false;
            }
        }
    };

    const int n_chunks = std::max(1, std::min(threads, n_points));
    if (n_chunks == 1) {
        run_chunk(0, n_points);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(n_chunks));
        for (int c = 0; c < n_chunks; ++c) {
            const int begin = static_cast<int>(
                static_cast<std::int64_t>(n_points) * c / n_chunks);
            const int end = static_cast<int>(
                static_cast<std::int64_t>(n_points) * (c + 1) / n_chunks);
            workers.emplace_back(run_chunk, begin, end);
        }
        for (auto& w : workers) w.join();
    }

    DensityCurve curve;
    curve.epsilon = epsilon;
    curve.provenance = describe(s);
    curve.lambdas.reserve(static_cast<std::size_t>(n_points));
    curve.rho.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double lambda = lambda_min + i * step;
        if (failed[static_cast<std::size_t>(i)]) {
            curve.failures.push_back({lambda, reasons[static_cast<std::size_t>(i)]});
        } else {
            curve.lambdas.push_back(lambda);
            curve.rho.push_back(values[static_cast<std::size_t>(i)]);
        }
    }
    return curve;
}

}  // namespace equispec
