#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "equispec/spectrum.hpp"

using namespace equispec;
using Catch::Matchers::WithinAbs;

namespace {

bool contains_close(const std::vector<double>& sorted, double target,
                    double tol) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), target - tol);
    return it != sorted.end() && *it <= target + tol;
}

}  // namespace

TEST_CASE("triangle spectrum is (-1, -1, 2)") {
    EquitableGraph g;
    g.structure = BlockStructure{{3}, {{2}}};
    g.block_of = {0, 0, 0};
    g.edges = {{0, 1}, {0, 2}, {1, 2}};
    const auto eigs = exact_eigenvalues(g);
    REQUIRE(eigs.size() == 3);
    CHECK_THAT(eigs[0], WithinAbs(-1.0, 1e-12));
    CHECK_THAT(eigs[1], WithinAbs(-1.0, 1e-12));
    CHECK_THAT(eigs[2], WithinAbs(2.0, 1e-12));
}

TEST_CASE("perfect matching spectrum is n copies of +-1") {
    const BlockStructure s{{6, 6}, {{0, 1}, {1, 0}}};
    const auto g = generate_equitable(s, std::uint64_t{4});
    const auto eigs = exact_eigenvalues(g);
    REQUIRE(eigs.size() == 12);
    for (int i = 0; i < 6; ++i) {
        CHECK_THAT(eigs[static_cast<std::size_t>(i)], WithinAbs(-1.0, 1e-12));
        CHECK_THAT(eigs[static_cast<std::size_t>(i) + 6], WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("reduced-scale core-periphery spectrum shows the class structure") {
    const BlockStructure s{{25, 100}, {{10, 4}, {1, 0}}};
    const auto g = generate_equitable(s, std::uint64_t{99});
    REQUIRE(verify_regularity(g));
    const auto eigs = exact_eigenvalues(g);
    REQUIRE(eigs.size() == 125);

    const auto [minus, plus] = isolated_eigenvalues(10, 4);
    CHECK(contains_close(eigs, minus, 1e-8));
    CHECK(contains_close(eigs, plus, 1e-8));

    const auto zeros = std::count_if(eigs.begin(), eigs.end(), [](double x) {
        return std::abs(x) <= 1e-8;
    });
    CHECK(zeros >= 75);
}

TEST_CASE("quotient eigenvalues appear exactly in sampled spectra") {
    const BlockStructure s{{10, 5, 5}, {{2, 1, 1}, {2, 0, 3}, {2, 3, 0}}};
    const auto quotient = quotient_eigenvalues(s);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto g = generate_equitable(s, seed);
        const auto eigs = exact_eigenvalues(g);
        for (double q : quotient) {
            CAPTURE(seed, q);
            CHECK(contains_close(eigs, q, 1e-8));
        }
    }
}

TEST_CASE("trace identities hold per sample") {
    const BlockStructure s{{20, 40}, {{4, 2}, {1, 1}}};
    const auto g = generate_equitable(s, std::uint64_t{21});
    const auto eigs = exact_eigenvalues(g);
    const double trace = std::accumulate(eigs.begin(), eigs.end(), 0.0);
    double square_sum = 0.0;
    for (double x : eigs) square_sum += x * x;
    CHECK_THAT(trace, WithinAbs(0.0, 1e-8));
    CHECK_THAT(square_sum, WithinAbs(2.0 * static_cast<double>(g.edges.size()),
                                     2e-8 * static_cast<double>(g.edges.size())));
}

TEST_CASE("size cap guards the dense solve") {
    const BlockStructure s{{40}, {{3}}};
    const auto g = generate_equitable(s, std::uint64_t{3});
    CHECK_THROWS_AS(exact_eigenvalues(g, 30), std::domain_error);
}

TEST_CASE("classification splits zeros, isolated pair, and the band") {
    const auto summary = spectral_summary(10, 4, 25);
    const auto [minus, plus] = isolated_eigenvalues(10, 4);
    const std::vector<double> eigs = {-3.0, minus - 1e-10, -1e-12, 0.0,
                                      5e-9,  2.0,          plus + 1e-9};
    const auto tags = classify(eigs, summary);
    REQUIRE(tags.size() == eigs.size());
    CHECK(tags[0] == EigTag::Continuous);
    CHECK(tags[1] == EigTag::Isolated);
    CHECK(tags[2] == EigTag::Zero);
    CHECK(tags[3] == EigTag::Zero);
    CHECK(tags[4] == EigTag::Zero);
    CHECK(tags[5] == EigTag::Continuous);
    CHECK(tags[6] == EigTag::Isolated);
}

TEST_CASE("at most one eigenvalue per isolated target") {
    const auto summary = spectral_summary(10, 4, 25);
    const auto [minus, plus] = isolated_eigenvalues(10, 4);
    const std::vector<double> eigs = {plus - 1e-9, plus + 2e-9};
    const auto tags = classify(eigs, summary);
    CHECK(std::count(tags.begin(), tags.end(), EigTag::Isolated) == 1);
    // The nearer one wins.
    CHECK(tags[0] == EigTag::Isolated);
}

TEST_CASE("ensemble pools sorted classified eigenvalues") {
    const BlockStructure s{{25, 100}, {{10, 4}, {1, 0}}};
    const auto spectrum = ensemble_spectrum(s, 4, 7);
    CHECK(spectrum.n_samples == 4);
    CHECK(spectrum.n_per_graph == 125);
    REQUIRE(spectrum.eigenvalues.size() == 500);
    CHECK(std::is_sorted(spectrum.eigenvalues.begin(),
                         spectrum.eigenvalues.end()));
    CHECK(spectrum.tags.size() == 500);
    CHECK(spectrum.sample_of.size() == 500);

    // Per sample: >= 75 zeros and exactly two isolated eigenvalues.
    for (int sample = 0; sample < 4; ++sample) {
        std::int64_t zeros = 0;
        std::int64_t isolated = 0;
        for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
            if (spectrum.sample_of[i] != sample) continue;
            if (spectrum.tags[i] == EigTag::Zero) ++zeros;
            if (spectrum.tags[i] == EigTag::Isolated) ++isolated;
        }
        CAPTURE(sample);
        CHECK(zeros >= 75);
        CHECK(isolated == 2);
    }

    const auto counted = spectrum.count(EigTag::Zero) +
                         spectrum.count(EigTag::Isolated) +
                         spectrum.count(EigTag::Continuous);
    CHECK(counted == 500);
}

TEST_CASE("ensemble determinism and thread independence") {
    const BlockStructure s{{10, 20}, {{4, 2}, {1, 0}}};
    EnsembleOptions threaded;
    threaded.threads = 3;
    const auto a = ensemble_spectrum(s, 5, 123);
    const auto b = ensemble_spectrum(s, 5, 123, threaded);
    const auto c = ensemble_spectrum(s, 5, 124);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.sample_of == b.sample_of);
    CHECK(a.eigenvalues != c.eigenvalues);
}

TEST_CASE("continuous eigenvalues stay near the analytic support") {
    const BlockStructure s{{125, 500}, {{10, 4}, {1, 0}}};
    const auto spectrum = ensemble_spectrum(s, 2, 31);
    const auto support = support_intervals(10, 4);
    std::int64_t outside = 0;
    std::int64_t continuous = 0;
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
        if (spectrum.tags[i] != EigTag::Continuous) continue;
        ++continuous;
        const double x = spectrum.eigenvalues[i];
        bool near = false;
        for (const auto& band : support) {
            if (x >= band.lo - 0.1 && x <= band.hi + 0.1) near = true;
        }
        if (!near) ++outside;
    }
    REQUIRE(continuous > 0);
    CHECK(static_cast<double>(outside) <= 0.01 * static_cast<double>(continuous));
}

TEST_CASE("ensemble rejects empty sample counts and bad structures") {
    const BlockStructure s{{10, 20}, {{4, 2}, {1, 0}}};
    CHECK_THROWS_AS(ensemble_spectrum(s, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ensemble_spectrum(BlockStructure{{5}, {{3}}}, 1, 1),
                    InfeasibleError);
}

TEST_CASE("sample errors carry the sample index") {
    const BlockStructure s{{40}, {{3}}};
    EnsembleOptions options;
    options.size_cap = 30;
    CHECK_THROWS_WITH(ensemble_spectrum(s, 2, 5, options),
                      Catch::Matchers::ContainsSubstring("sample 0"));
}
