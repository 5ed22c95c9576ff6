#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "equispec/cavity.hpp"
#include "equispec/core_periphery.hpp"
#include "equispec/detail/quadrature.hpp"
#include "equispec/spectrum.hpp"

namespace equispec {

/// Histogram of the continuous-tagged eigenvalues (unit mass) against an
/// analytic density (unit mass over its support), with two distances: a
/// bin-wise L1 and the sup distance between CDFs.
struct HistogramComparison {
    std::vector<double> bin_edges;          // n_bins + 1, uniform
    std::vector<double> empirical_density;  // per bin
    std::vector<double> analytic_density;   // at bin midpoints
    double l1_distance = 0.0;
    double sup_cdf_distance = 0.0;
    std::int64_t n_continuous = 0;
};

namespace detail {

/// Type-7 (linear interpolation) quantile of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

/// Freedman-Diaconis bin count with a square-root fallback for degenerate
/// interquartile ranges.
inline int freedman_diaconis_bins(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    const double range = sorted.back() - sorted.front();
    if (range <= 0.0) return 1;
    const double iqr =
        quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    if (width <= 0.0) {
        width = range / std::ceil(std::sqrt(static_cast<double>(n)));
    }
    const double bins = std::ceil(range / width);
    return static_cast<int>(std::clamp(bins, 1.0, 100000.0));
}

/// Overlap pieces of [lo, hi] with the support intervals, in order.
inline std::vector<Interval> clip_to_support(
    double lo, double hi, const std::vector<Interval>& support) {
    std::vector<Interval> pieces;
    for (const auto& band : support) {
        const double a = std::max(lo, band.lo);
        const double b = std::min(hi, band.hi);
        if (b > a) pieces.push_back({a, b});
    }
    return pieces;
}

}  // namespace detail

/// Compares the continuous part of a pooled spectrum against a density
/// callable with known support. Bin count 0 selects the Freedman-Diaconis
/// default. The L1 distance sums |empirical mass - analytic mass| over the
/// bins clipped to the support; empirical mass outside the support and
/// analytic mass not covered by any bin are charged in full.
inline HistogramComparison compare(const EmpiricalSpectrum& spectrum,
                                   const std::function<double(double)>& density,
                                   const std::vector<Interval>& support,
                                   int n_bins = 0) {
    const std::vector<double> values = spectrum.continuous_values();
    if (values.empty()) {
        throw std::domain_error("no continuous-tagged eigenvalues to compare");
    }

    HistogramComparison result;
    result.n_continuous = static_cast<std::int64_t>(values.size());

    const double lo = values.front();
    const double hi = values.back();
    int bins = n_bins > 0 ? n_bins : detail::freedman_diaconis_bins(values);
    if (!(hi > lo)) bins = 1;
    const double width = (hi > lo ? hi - lo : 1.0) / bins;

    result.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) {
        result.bin_edges[static_cast<std::size_t>(b)] = lo + b * width;
    }
    result.bin_edges.back() = std::max(result.bin_edges.back(), hi);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    for (double x : values) {
        auto idx = static_cast<std::int64_t>((x - lo) / width);
        idx = std::clamp<std::int64_t>(idx, 0, bins - 1);
        ++counts[static_cast<std::size_t>(idx)];
    }

    const auto total = static_cast<double>(values.size());
    result.empirical_density.resize(static_cast<std::size_t>(bins));
    result.analytic_density.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        result.empirical_density[static_cast<std::size_t>(b)] =
            static_cast<double>(counts[static_cast<std::size_t>(b)]) /
            (total * width);
        result.analytic_density[static_cast<std::size_t>(b)] =
            density(lo + (b + 0.5) * width);
    }

    // Bin-wise L1 between histogram mass and analytic mass. Bins are
    // clipped to the support: each bin-and-support piece compares the
    // recounted empirical mass inside the piece against rho at the piece
    // midpoint, so a bin straddling a band edge is not smeared across it.
    // Empirical mass outside the support is charged in full, as is any
    // analytic support mass the bins do not cover.
    auto mass_between = [&values, total](double a, double c) {
        const auto from = std::lower_bound(values.begin(), values.end(), a);
        const auto to = std::upper_bound(values.begin(), values.end(), c);
        return static_cast<double>(to - from) / total;
    };
    double l1 = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = result.bin_edges[static_cast<std::size_t>(b)];
        const double c = result.bin_edges[static_cast<std::size_t>(b) + 1];
        double covered_mass = 0.0;
        for (const auto& piece : detail::clip_to_support(a, c, support)) {
            const double emp = mass_between(piece.lo, piece.hi);
            const double ana =
                density(0.5 * (piece.lo + piece.hi)) * piece.length();
            l1 += std::abs(emp - ana);
            covered_mass += emp;
        }
        const double bin_mass =
            static_cast<double>(counts[static_cast<std::size_t>(b)]) / total;
        if (bin_mass > covered_mass) l1 += bin_mass - covered_mass;
    }
    // Analytic mass in support regions no bin covers.
    for (const auto& band : support) {
        for (const auto& piece :
             {Interval{band.lo, std::min(band.hi, result.bin_edges.front())},
              Interval{std::max(band.lo, result.bin_edges.back()), band.hi}}) {
            if (piece.length() > 0.0) {
                l1 += detail::integrate(density, piece.lo, piece.hi);
            }
        }
    }
    result.l1_distance = l1;

    // Sup distance between the empirical staircase CDF and the analytic CDF,
    // accumulated along the sorted sample.
    double sup = 0.0;
    double cdf = 0.0;
    double previous = values.front();
    {
        const auto head = detail::clip_to_support(
            -std::numeric_limits<double>::infinity(), previous, support);
        for (const auto& piece : head) {
            cdf += detail::integrate(density, piece.lo, piece.hi);
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (const auto& piece :
             detail::clip_to_support(previous, values[i], support)) {
            cdf += detail::integrate(density, piece.lo, piece.hi);
        }
        previous = values[i];
        const double below = static_cast<double>(i) / total;
        const double at = static_cast<double>(i + 1) / total;
        sup = std::max({sup, std::abs(below - cdf), std::abs(at - cdf)});
    }
    result.sup_cdf_distance = sup;
    return result;
}

/// Convenience overload against a sampled curve: the curve is interpolated
/// linearly and renormalized to unit mass; its support is taken to be the
/// runs of grid points with positive density, widened by the neighboring
/// zero point on each side (one grid cell of slack at every band edge).
inline HistogramComparison compare(const EmpiricalSpectrum& spectrum,
                                   const DensityCurve& curve, int n_bins = 0) {
    if (curve.lambdas.size() < 2) {
        throw std::invalid_argument("curve needs at least two points");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < curve.lambdas.size(); ++i) {
        mass += 0.5 * (curve.rho[i] + curve.rho[i + 1]) *
                (curve.lambdas[i + 1] - curve.lambdas[i]);
    }
    if (!(mass > 0.0)) {
        throw std::invalid_argument("curve carries no mass");
    }
    auto interpolate = [&curve, mass](double x) {
        const auto& xs = curve.lambdas;
        if (x <= xs.front() || x >= xs.back()) return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return (curve.rho[j - 1] * (1.0 - t) + curve.rho[j] * t) / mass;
    };

    std::vector<Interval> support;
    const std::size_t n = curve.lambdas.size();
    std::size_t i = 0;
    while (i < n) {
        if (curve.rho[i] > 0.0) {
            const std::size_t first = i;
            while (i + 1 < n && curve.rho[i + 1] > 0.0) ++i;
            support.push_back({curve.lambdas[first > 0 ? first - 1 : first],
                               curve.lambdas[i + 1 < n ? i + 1 : i]});
        }
        ++i;
    }
    if (support.empty()) {
        throw std::invalid_argument("curve carries no mass");
    }
    return compare(spectrum, interpolate, support, n_bins);
}

}  // namespace equispec
