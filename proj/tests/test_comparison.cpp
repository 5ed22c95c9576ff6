#include <cmath>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "equispec/comparison.hpp"
#include "equispec/detail/quadrature.hpp"

using namespace equispec;
using Catch::Matchers::WithinAbs;

namespace {

// Stratified draw from the analytic law by inverse-transform on a fine grid:
// emits one value per quantile (i + 1/2)/n. Independent of the histogram
// machinery under test.
std::vector<double> quantile_sample(int k, int kp, int n) {
    const auto support = support_intervals(k, kp);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    double mass = 0.0;
    int emitted = 0;
    for (const auto& band : support) {
        const int cells = 200000;
        const double step = band.length() / cells;
        for (int c = 0; c < cells && emitted < n; ++c) {
            const double x = band.lo + (c + 0.5) * step;
            mass += analytic_density(x, k, kp) * step;
            while (emitted < n &&
                   mass > (emitted + 0.5) / static_cast<double>(n)) {
                values.push_back(x);
                ++emitted;
            }
        }
    }
    while (emitted < n) {
        values.push_back(support.back().hi);
        ++emitted;
    }
    return values;
}

EmpiricalSpectrum synthetic_spectrum(std::vector<double> values) {
    EmpiricalSpectrum spectrum;
    spectrum.n_samples = 1;
    spectrum.n_per_graph = static_cast<int>(values.size());
    spectrum.eigenvalues = std::move(values);
    spectrum.tags.assign(spectrum.eigenvalues.size(), EigTag::Continuous);
    spectrum.sample_of.assign(spectrum.eigenvalues.size(), 0);
    return spectrum;
}

}  // namespace

TEST_CASE("analytic law compared against its own quantiles is near zero") {
    const int k = 10;
    const int kp = 4;
    const auto spectrum = synthetic_spectrum(quantile_sample(k, kp, 50000));
    const auto support = support_intervals(k, kp);
    const auto coarse = compare(
        spectrum, [&](double x) { return analytic_density(x, k, kp); },
        support);
    CHECK(coarse.l1_distance < 0.02);
    CHECK(coarse.sup_cdf_distance < 1e-3);

    // Refining the bins shrinks the midpoint-rule remainder further.
    const auto fine = compare(
        spectrum, [&](double x) { return analytic_density(x, k, kp); },
        support, 300);
    CHECK(fine.l1_distance < 0.005);
}

TEST_CASE("histogram mass is one by construction") {
    const auto spectrum = synthetic_spectrum(quantile_sample(5, 2, 2000));
    const auto support = support_intervals(5, 2);
    for (int bins : {0, 7, 64}) {
        const auto result = compare(
            spectrum, [&](double x) { return analytic_density(x, 5, 2); },
            support, bins);
        double mass = 0.0;
        for (std::size_t b = 0; b + 1 < result.bin_edges.size(); ++b) {
            mass += result.empirical_density[b] *
                    (result.bin_edges[b + 1] - result.bin_edges[b]);
        }
        CAPTURE(bins);
        CHECK_THAT(mass, WithinAbs(1.0, 1e-12));
        CHECK(result.l1_distance >= 0.0);
        CHECK(result.sup_cdf_distance >= 0.0);
        if (bins > 0) {
            CHECK(result.bin_edges.size() == static_cast<std::size_t>(bins) + 1);
        }
    }
}

TEST_CASE("single small sample has finite distances within the trivial bound") {
    const BlockStructure s{{25, 100}, {{10, 4}, {1, 0}}};
    const auto spectrum = ensemble_spectrum(s, 1, 17);
    const auto support = support_intervals(10, 4);
    const auto result = compare(
        spectrum, [](double x) { return analytic_density(x, 10, 4); },
        support);
    CHECK(result.l1_distance > 0.0);
    CHECK(result.l1_distance <= 2.0);
    CHECK(result.sup_cdf_distance <= 1.0);
    CHECK(result.n_continuous == 2 * 25 - 2);
}

TEST_CASE("mass outside the analytic support is charged in full") {
    // Empirical values sitting entirely in the spectral gap: the density is
    // zero there, so the L1 distance is the empirical mass (1) plus the
    // uncovered analytic mass (1).
    const auto spectrum = synthetic_spectrum({-0.2, -0.1, 0.1, 0.2});
    const auto support = support_intervals(10, 4);
    const auto result = compare(
        spectrum, [](double x) { return analytic_density(x, 10, 4); },
        support, 4);
    CHECK_THAT(result.l1_distance, WithinAbs(2.0, 1e-6));
}

TEST_CASE("comparison refuses an empty continuous class") {
    auto spectrum = synthetic_spectrum({0.0, 0.0});
    spectrum.tags.assign(2, EigTag::Zero);
    const auto support = support_intervals(10, 4);
    CHECK_THROWS_AS(compare(spectrum,
                            [](double x) { return analytic_density(x, 10, 4); },
                            support),
                    std::domain_error);
}

TEST_CASE("curve overload interpolates and renormalizes") {
    const int k = 10;
    const int kp = 4;
    DensityCurve curve;
    curve.epsilon = 0.0;
    const int points = 4001;
    for (int i = 0; i < points; ++i) {
        const double x = -7.0 + 14.0 * i / (points - 1);
        curve.lambdas.push_back(x);
        curve.rho.push_back(analytic_density(x, k, kp));
    }
    const auto spectrum = synthetic_spectrum(quantile_sample(k, kp, 20000));
    const auto result = compare(spectrum, curve);
    CHECK(result.l1_distance < 0.02);

    DensityCurve empty;
    empty.lambdas = {0.0};
    empty.rho = {0.0};
    CHECK_THROWS_AS(compare(spectrum, empty), std::invalid_argument);
}
