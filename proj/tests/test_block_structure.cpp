#include <catch2/catch_amalgamated.hpp>

#include "equispec/block_structure.hpp"

using namespace equispec;

TEST_CASE("structure with consistent block edge counts validates") {
    const BlockStructure s{{500, 2000}, {{10, 4}, {1, 0}}};
    const auto report = validate_structure(s);
    CHECK(report.ok());
    CHECK(report.violations.empty());
}

TEST_CASE("equitability is checked per block pair") {
    // 500*4 = 2000 but 2000*2 = 4000: the pair (0,1) is inconsistent even
    // though both products look plausible in isolation.
    const BlockStructure s{{500, 2000}, {{10, 4}, {2, 0}}};
    const auto report = validate_structure(s);
    REQUIRE_FALSE(report.ok());
    CHECK_THAT(report.to_string(),
               Catch::Matchers::ContainsSubstring("equitability"));
}

TEST_CASE("odd stub parity is infeasible") {
    const BlockStructure s{{5}, {{3}}};
    const auto report = validate_structure(s);
    REQUIRE_FALSE(report.ok());
    CHECK_THAT(report.to_string(), Catch::Matchers::ContainsSubstring("odd"));
}

TEST_CASE("degree caps for simple graphs") {
    SECTION("within-block degree above N_a - 1") {
        const BlockStructure s{{4}, {{4}}};
        CHECK_FALSE(validate_structure(s).ok());
    }
    SECTION("cross-block degree above N_b") {
        const BlockStructure s{{6, 3}, {{0, 4}, {8, 0}}};
        CHECK_FALSE(validate_structure(s).ok());
    }
    SECTION("cross-block degree equal to N_b is allowed") {
        const BlockStructure s{{3, 3}, {{0, 3}, {3, 0}}};
        CHECK(validate_structure(s).ok());
    }
}

TEST_CASE("malformed shapes are reported") {
    CHECK_FALSE(validate_structure(BlockStructure{{}, {}}).ok());
    CHECK_FALSE(validate_structure(BlockStructure{{3, 3}, {{1, 1}}}).ok());
    CHECK_FALSE(validate_structure(BlockStructure{{3}, {{-1}}}).ok());
    CHECK_FALSE(validate_structure(BlockStructure{{0}, {{0}}}).ok());
}

TEST_CASE("all violations are collected, not just the first") {
    const BlockStructure s{{5, 7}, {{3, 2}, {1, 8}}};
    const auto report = validate_structure(s);
    REQUIRE_FALSE(report.ok());
    // odd parity in block 0, equitability breach, and c[1][1] > N_1 - 1
    CHECK(report.violations.size() >= 3);
}

TEST_CASE("block offsets are contiguous in declaration order") {
    const BlockStructure s{{3, 2, 4}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    CHECK(s.block_offset(0) == 0);
    CHECK(s.block_offset(1) == 3);
    CHECK(s.block_offset(2) == 5);
    CHECK(s.total_vertices() == 9);
    const auto blocks = s.block_assignment();
    REQUIRE(blocks.size() == 9);
    CHECK(blocks[0] == 0);
    CHECK(blocks[3] == 1);
    CHECK(blocks[4] == 1);
    CHECK(blocks[5] == 2);
    CHECK(blocks[8] == 2);
}

TEST_CASE("describe gives a compact provenance tag") {
    const BlockStructure s{{500, 2000}, {{10, 4}, {1, 0}}};
    CHECK(describe(s) == "m=2 sizes=500,2000 c=[[10,4],[1,0]]");
}
