#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equispec/block_structure.hpp"
#include "equispec/errors.hpp"

namespace equispec {

/// The core-periphery class with connectivity [[k, k'], [1, 0]]: a k-regular
/// core of N_c vertices, each core vertex attached to k' periphery vertices,
/// each periphery vertex attached to exactly one core vertex. Equitability
/// fixes N_p = k' * N_c.
struct CorePeripheryParams {
    int k = 0;       // core-core degree
    int kp = 0;      // core-periphery degree k'
    int n_core = 0;  // N_c

    std::int64_t n_periphery() const { return std::int64_t{kp} * n_core; }
    std::int64_t total_vertices() const { return n_core + n_periphery(); }

    /// The two-block structure of this class (one block when k' = 0, where
    /// the ensemble degenerates to plain k-regular graphs).
    BlockStructure structure() const {
        if (kp == 0) {
            return BlockStructure{{n_core}, {{k}}};
        }
        return BlockStructure{{n_core, static_cast<int>(n_periphery())},
                              {{k, kp}, {1, 0}}};
    }
};

/// Throws unless the parameters lie in the class this module covers:
/// k >= 2 (nonzero band width needs k - 1 > 0), k' >= 0, and a core degree
/// strictly above the periphery degree (k + k' > 1, automatic here).
inline void check_core_periphery(const CorePeripheryParams& p) {
    if (p.k < 2) {
        throw std::domain_error(
            "core degree k must be >= 2, the band degenerates at k=" +
            std::to_string(p.k));
    }
    if (p.kp < 0) {
        throw std::domain_error("core-periphery degree k' must be >= 0");
    }
    if (p.n_core < 1) {
        throw std::domain_error("core size must be positive");
    }
    if (p.k + p.kp <= 1) {
        throw std::domain_error("core degree must exceed periphery degree");
    }
}

/// The reduced spectral variable, mu = lambda - k'/lambda. The map sends each
/// of the two support bands monotonically onto the k-regular band in mu.
inline double mu(double lambda, double kp) {
    if (lambda == 0.0) {
        throw std::domain_error(
            "mu is undefined at lambda = 0 (in the support gap; the point "
            "mass there is reported separately)");
    }
    return lambda - kp / lambda;
}

struct AlphaBeta {
    double alpha = 0.0;  // Re of the core cavity variance
    double beta = 0.0;   // Im of the core cavity variance
};

/// Closed-form core cavity variance at z = lambda - i0+. Inside the band
/// (|mu| < 2 sqrt(k-1)) the defining quadratic (k-1) D^2 - mu D + 1 = 0 has a
/// complex root with beta > 0; outside, the real root continuous with 1/mu as
/// |mu| -> inf (the variance must vanish as |z| grows).
inline AlphaBeta cavity_alpha_beta(double lambda, int k, int kp) {
    if (k < 2) {
        throw std::domain_error("cavity closed form requires k >= 2");
    }
    const double m = mu(lambda, kp);
    const double band_edge = 2.0 * std::sqrt(static_cast<double>(k - 1));
    AlphaBeta result;
    if (std::abs(m) < band_edge) {
        result.alpha = m / (2.0 * (k - 1));
        result.beta = std::sqrt(4.0 * (k - 1) - m * m) / (2.0 * (k - 1));
    } else {
        const double disc = std::sqrt(m * m - 4.0 * (k - 1));
        result.alpha = (m - std::copysign(disc, m)) / (2.0 * (k - 1));
        result.beta = 0.0;
    }
    return result;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    double length() const { return hi - lo; }
};

/// Support of the continuous spectrum, from |lambda - k'/lambda| = 2 sqrt(k-1):
/// with g = sqrt(k-1) and r = sqrt(k-1+k'), the two bands
/// [-g-r, -(r-g)] and [r-g, g+r], separated by a gap of half-width r-g
/// around zero. For k' = 0 the gap closes and a single band remains.
inline std::vector<Interval> support_intervals(int k, int kp) {
    if (k < 2) {
        throw std::domain_error("support closed form requires k >= 2");
    }
    if (kp < 0) {
        throw std::domain_error("k' must be >= 0");
    }
    const double g = std::sqrt(static_cast<double>(k - 1));
    if (kp == 0) {
        return {{-2.0 * g, 2.0 * g}};
    }
    const double r = std::sqrt(static_cast<double>(k - 1 + kp));
    return {{-g - r, -(r - g)}, {r - g, g + r}};
}

/// Kesten-McKay density of the k-regular ensemble, the k' = 0 limit law.
inline double kesten_mckay_density(double lambda, int k) {
    if (k < 2) {
        throw std::domain_error("Kesten-McKay density requires k >= 2");
    }
    const double band = 4.0 * (k - 1) - lambda * lambda;
    if (band <= 0.0) return 0.0;
    return k * std::sqrt(band) /
           (2.0 * std::numbers::pi * (k * k - lambda * lambda));
}

/// Closed-form spectral density of the continuous part,
///
///   rho(lambda) = (k / 2 pi) sqrt((k-1) - mu^2/4) / (k^2 - mu^2)
///                 * (1 + k'/lambda^2),   |mu| < 2 sqrt(k-1),
///
/// and 0 outside (also at lambda = 0, where the kernel point mass is
/// reported separately, never mixed into the curve). Unit mass when
/// restricted to the non-zero eigenvalues. For k' = 0 the two bands merge,
/// each carrying half of the Kesten-McKay measure, so the full single-band
/// Kesten-McKay density is returned instead.
inline double analytic_density(double lambda, int k, int kp) {
    if (k < 2) {
        throw std::domain_error("density closed form requires k >= 2");
    }
    if (kp == 0) {
        return kesten_mckay_density(lambda, k);
    }
    if (lambda == 0.0) return 0.0;
    const double m = mu(lambda, kp);
    const double band = (k - 1) - 0.25 * m * m;
    if (band <= 0.0) return 0.0;
    return k / (2.0 * std::numbers::pi) * std::sqrt(band) / (k * k - m * m) *
           (1.0 + kp / (lambda * lambda));
}

/// Same density through the intermediate cavity route,
/// rho = k beta / (2 pi delta) * (1 + k'/lambda^2) with
/// delta = (mu - k alpha)^2 + (k beta)^2. Kept as an independent algebraic
/// path; it must agree with analytic_density pointwise.
inline double analytic_density_from_cavity(double lambda, int k, int kp) {
    if (k < 2) {
        throw std::domain_error("density closed form requires k >= 2");
    }
    if (lambda == 0.0) return 0.0;
    const auto [alpha, beta] = cavity_alpha_beta(lambda, k, kp);
    if (beta == 0.0) return 0.0;
    const double m = mu(lambda, kp);
    const double delta =
        (m - k * alpha) * (m - k * alpha) + (k * beta) * (k * beta);
    double rho = k * beta / (2.0 * std::numbers::pi * delta) *
                 (1.0 + kp / (lambda * lambda));
    // k' = 0: the merged band carries the weight of both bands.
    if (kp == 0) rho *= 2.0;
    return rho;
}

struct IsolatedPair {
    double minus = 0.0;  // lambda_-
    double plus = 0.0;   // lambda_+
};

/// The two block-symmetric eigenvalues lambda_+- = k/2 +- sqrt((k/2)^2 + k'),
/// i.e. the roots of lambda^2 - k lambda - k' = 0. Exact eigenvalues of every
/// graph in the class, lying outside the continuous bands.
inline IsolatedPair isolated_eigenvalues(double k, double kp) {
    if (k < 0.0 || kp < 0.0) {
        throw std::domain_error("isolated eigenvalues need k >= 0 and k' >= 0");
    }
    const double half = 0.5 * k;
    const double root = std::sqrt(half * half + kp);
    return {half - root, half + root};
}

/// Lower bound on the kernel dimension of any adjacency matrix in the class:
/// the empty periphery block forces at least N_p - N_c zero eigenvalues.
inline std::int64_t zero_eigenvalue_count(std::int64_t n_core,
                                          std::int64_t n_periphery) {
    if (n_core < 0 || n_periphery < n_core) {
        throw std::domain_error(
            "zero-eigenvalue count needs N_p >= N_c >= 0 (the class has "
            "k' >= 1, hence N_p >= N_c)");
    }
    return n_periphery - n_core;
}

/// Eigenvalues of the m x m quotient matrix Q_ab = c_ab, ascending. Every
/// equitable graph of the ensemble carries them exactly, via block-symmetric
/// eigenvectors. Equitability makes Q similar to the symmetric matrix
/// S_ab = sqrt(c_ab c_ba) (conjugation by diag(sqrt(N_a))), so the spectrum
/// is real and can be computed with a self-adjoint solver.
inline std::vector<double> quotient_eigenvalues(const BlockStructure& s) {
    const auto report = validate_structure(s);
    if (!report.ok()) {
        throw InfeasibleError("invalid structure: " + report.to_string());
    }
    const int m = s.num_blocks();
    Eigen::MatrixXd sym(m, m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            sym(a, b) = std::sqrt(static_cast<double>(s.connectivity[a][b]) *
                                  static_cast<double>(s.connectivity[b][a]));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("quotient eigendecomposition failed");
    }
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + m};
}

/// Decomposition of the spectrum of the core-periphery class: continuous
/// support bands, the two isolated eigenvalues, the zero point mass and the
/// fraction (2 N_c - 2)/N of eigenvalues in the continuous part.
struct SpectralSummary {
    int k = 0;
    int kp = 0;
    int n_core = 0;
    std::vector<Interval> support;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    std::int64_t zero_multiplicity = 0;
    double continuous_fraction = 0.0;
};

inline SpectralSummary spectral_summary(int k, int kp, int n_core) {
    const CorePeripheryParams p{k, kp, n_core};
    check_core_periphery(p);
    if (kp < 1) {
        throw std::domain_error(
            "spectral summary covers the two-block class only (k' >= 1)");
    }
    SpectralSummary summary;
    summary.k = k;
    summary.kp = kp;
    summary.n_core = n_core;
    summary.support = support_intervals(k, kp);
    const auto isolated = isolated_eigenvalues(k, kp);
    summary.lambda_minus = isolated.minus;
    summary.lambda_plus = isolated.plus;
    summary.zero_multiplicity = zero_eigenvalue_count(n_core, p.n_periphery());
    summary.continuous_fraction =
        (2.0 * n_core - 2.0) / static_cast<double>(p.total_vertices());
    return summary;
}

/// Recognizes structures of the form [[k, k'], [1, 0]] (or [[k]]) so callers
/// can route them through the closed forms.
inline std::optional<CorePeripheryParams> as_core_periphery(
    const BlockStructure& s) {
    if (s.num_blocks() == 1 && s.connectivity[0][0] >= 2) {
        return CorePeripheryParams{s.connectivity[0][0], 0, s.sizes[0]};
    }
    if (s.num_blocks() == 2 && s.connectivity[0][0] >= 2 &&
        s.connectivity[0][1] >= 1 && s.connectivity[1][0] == 1 &&
        s.connectivity[1][1] == 0 &&
        std::int64_t{s.sizes[1]} ==
            std::int64_t{s.connectivity[0][1]} * s.sizes[0]) {
        return CorePeripheryParams{s.connectivity[0][0], s.connectivity[0][1],
                                   s.sizes[0]};
    }
    return std::nullopt;
}

}  // namespace equispec
