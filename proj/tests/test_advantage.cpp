#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qsense/advantage.hpp"
#include "testutil.hpp"

using namespace qsense;
using test::close;
using test::vec;

TEST_SUITE("advantage") {

TEST_CASE("the alternating scenario lays out signal and pair noise rows") {
    const AlternatingScenario scenario = build_alternating(4);
    REQUIRE(scenario.coefficients.function_count() == 4);
    REQUIRE(scenario.coefficients.site_count() == 4);
    CHECK((scenario.coefficients.row(0) - vec({-1, 1, -1, 1})).cwiseAbs().maxCoeff() == 0.0);
    CHECK((scenario.coefficients.row(1) - vec({1, 1, 0, 0})).cwiseAbs().maxCoeff() == 0.0);
    CHECK((scenario.coefficients.row(2) - vec({0, 1, 1, 0})).cwiseAbs().maxCoeff() == 0.0);
    CHECK((scenario.coefficients.row(3) - vec({0, 0, 1, 1})).cwiseAbs().maxCoeff() == 0.0);
    CHECK(scenario.signal_index == 0);
    CHECK(scenario.noise_indices == std::vector<int>{1, 2, 3});
    CHECK(scenario.array.positions()[0][0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(scenario.array.positions()[3][0] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(build_alternating(5), OddSiteCount);
    CHECK_THROWS_AS(build_alternating(0), Error);
}

TEST_CASE("the optimal probe is the alternating pattern with QFI (2J)^2") {
    for (int sites : {2, 4, 6}) {
        const AlternatingScenario scenario = build_alternating(sites);
        const ProbePair pair = optimal_probe_integer(scenario.problem());
        CHECK(close(pair.qfi, 4.0 * sites * sites, 1e-12));
        // The returned vertex is the alternating pattern up to global sign.
        Vector pattern(sites);
        for (int j = 0; j < sites; ++j) {
            pattern[j] = (j % 2 == 0) ? -1.0 : 1.0;
        }
        const double align = std::abs(pattern.dot(pair.s)) / sites;
        CHECK(align == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("block census isolates the alternating pair") {
    const BlockCensus census = enumerate_blocks(build_alternating(4));
    CHECK(census.total_states() == 16);
    REQUIRE(census.dimension_counts.count(2) == 1);
    CHECK(census.dimension_counts.at(2) == 1);
    CHECK(census.dimension_counts.at(1) == 14);
    REQUIRE(census.nontrivial_blocks.size() == 1);
    const auto& pair_block = census.nontrivial_blocks[0];
    REQUIRE(pair_block.size() == 2);
    CHECK((pair_block[0] + pair_block[1]).cwiseAbs().maxCoeff() == 0.0);
    const Vector member = pair_block[0].cwiseAbs();
    CHECK((member - Vector::Ones(4)).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(enumerate_blocks(build_alternating(20)), TooLarge);
}

TEST_CASE("product candidates score through the branch pipeline") {
    const AlternatingScenario scenario = build_alternating(4);
    const double quarter = std::numbers::pi / 4.0;

    // Uniform amplitudes: the closed form 16 J^2 p1 p2 / (p1 + p2) with
    // p1 = p2 = 2^-J gives (2J)^2 * 2^(1-J).
    const double uniform = product_candidate_qfi(scenario, {quarter, quarter, quarter, quarter});
    CHECK(close(uniform, 64.0 * 0.125, 1e-12));

    // A single-branch product state carries no coherence at all.
    CHECK(product_candidate_qfi(scenario, {0.0, 0.0, 0.0, 0.0}) == 0.0);

    // Biasing one site shrinks the surviving pair block.
    const double tilted = product_candidate_qfi(scenario, {0.3, quarter, quarter, quarter});
    CHECK(tilted < uniform);
    const double p1 = std::pow(std::cos(0.3), 2) * 0.125;
    const double p2 = std::pow(std::sin(0.3), 2) * 0.125;
    CHECK(close(tilted, 16.0 * 16.0 * p1 * p2 / (p1 + p2), 1e-12));

    CHECK_THROWS_AS(product_candidate_qfi(scenario, {0.1}), DimensionMismatch);
}

TEST_CASE("the sweep pins the product ceiling at 2^(1-J) of the optimum") {
    double previous_ratio = 1.0;
    for (int sites : {2, 4, 6}) {
        const AdvantageResult result =
            product_advantage_sweep(build_alternating(sites), 512);
        const double bound = std::ldexp(1.0, 1 - sites);
        CHECK(close(result.optimal_qfi, 4.0 * sites * sites, 1e-12));
        CHECK(result.ratio <= bound + 1e-9);
        CHECK(close(result.max_product_qfi, bound * result.optimal_qfi, 1e-6));
        CHECK(result.ratio < previous_ratio);
        previous_ratio = result.ratio;
    }
    CHECK_THROWS_AS(product_advantage_sweep(build_alternating(14), 16), TooLarge);
}

}  // TEST_SUITE
