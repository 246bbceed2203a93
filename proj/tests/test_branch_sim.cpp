#include <cmath>
#include <complex>

#include "doctest.h"
#include "qsense/branch_sim.hpp"
#include "testutil.hpp"

using namespace qsense;
using test::close;
using test::vec;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

BranchState two_branch(const Vector& a, const Vector& b) {
    return BranchState::from_branches({{kInvSqrt2, a}, {kInvSqrt2, b}});
}

CoefficientMatrix rows(std::initializer_list<std::initializer_list<double>> data) {
    Matrix m(static_cast<Eigen::Index>(data.size()),
             static_cast<Eigen::Index>(data.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : data) {
        Eigen::Index c = 0;
        for (double x : row) {
            m(r, c++) = x;
        }
        ++r;
    }
    return CoefficientMatrix{m};
}

}  // namespace

TEST_SUITE("branch_sim") {

TEST_CASE("construction merges duplicates, drops cancellations, and sorts") {
    std::vector<Branch> list = {{0.3, vec({1, -1})},
                                {std::sqrt(0.51), vec({-1, 1})},
                                {0.4, vec({1, -1})},
                                {0.5, vec({2, 2})},
                                {-0.5, vec({2, 2})}};
    const BranchState state = BranchState::from_branches(list);
    REQUIRE(state.branch_count() == 2);
    // Sorted lexicographically: (-1,1) before (1,-1); the (2,2) pair cancelled.
    CHECK((state.branches()[0].eigenvalues - vec({-1, 1})).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(state.branches()[1].amplitude - Complex(0.7, 0.0)) < 1e-15);
    CHECK(std::abs(state.norm_squared() - 1.0) < 1e-12);

    CHECK_THROWS_AS(BranchState::from_branches({{0.5, vec({1})}, {0.5, vec({-1})}}),
                    NotNormalized);
    CHECK_THROWS_AS(BranchState::from_branches({}), NotNormalized);
    CHECK_THROWS_AS(BranchState::from_branches({{1.0, vec({1})}, {0.0, vec({1, 2})}}),
                    DimensionMismatch);
}

TEST_CASE("probe states superpose the pair or collapse to one branch") {
    const BranchState probe = probe_state({vec({1, -1}), vec({-1, 1}), 16.0});
    REQUIRE(probe.branch_count() == 2);
    CHECK(std::abs(probe.branches()[0].amplitude - Complex(kInvSqrt2, 0)) < 1e-15);

    const BranchState collapsed = probe_state({vec({1, 1}), vec({1, 1}), 0.0});
    CHECK(collapsed.branch_count() == 1);
    CHECK(std::abs(collapsed.branches()[0].amplitude - Complex(1, 0)) < 1e-15);
}

TEST_CASE("product states expand into the full branch tensor") {
    const Complex a1(0.6, 0.0), b1(0.0, 0.8);
    const Complex a2(kInvSqrt2, 0.0), b2(-kInvSqrt2, 0.0);
    const BranchState state = product_state({{a1, b1, 1.0, -1.0}, {a2, b2, 3.0, 1.0}});
    REQUIRE(state.branch_count() == 4);
    CHECK(std::abs(state.norm_squared() - 1.0) < 1e-12);

    // Branch (-1, 3) carries amplitude b1 * a2.
    bool found = false;
    for (const Branch& b : state.branches()) {
        if ((b.eigenvalues - vec({-1, 3})).cwiseAbs().maxCoeff() == 0.0) {
            CHECK(std::abs(b.amplitude - b1 * a2) < 1e-15);
            found = true;
        }
    }
    CHECK(found);

    CHECK_THROWS_AS(product_state({}), Error);
    CHECK_THROWS_AS(product_state({{1.0, 0.0, 1.0, 1.0}}), Error);
    CHECK_THROWS_AS(product_state({{0.8, 0.8, 1.0, -1.0}}), NotNormalized);
    CHECK_THROWS_AS(product_state(std::vector<SiteAmplitude>(
                        21, {kInvSqrt2, kInvSqrt2, 1.0, -1.0})),
                    TooLarge);
}

TEST_CASE("evolution applies the diagonal phases branch by branch") {
    const BranchState state = two_branch(vec({1, 1}), vec({-1, -1}));
    const CoefficientMatrix coeffs = rows({{1, 1}, {1, -1}});
    const BranchState evolved = evolve(state, EvolutionParams{vec({0.3, 10.0})}, coeffs);

    // Row 1 sees eigenvalue 0 on both branches; row 0 sees -2 and +2 (the
    // branches stay sorted, so (-1,-1) comes first).
    const Complex expect_minus = kInvSqrt2 * std::exp(Complex(0, -0.6));
    const Complex expect_plus = kInvSqrt2 * std::exp(Complex(0, 0.6));
    CHECK(std::abs(evolved.branches()[0].amplitude - expect_minus) < 1e-14);
    CHECK(std::abs(evolved.branches()[1].amplitude - expect_plus) < 1e-14);
    CHECK(std::abs(evolved.norm_squared() - 1.0) < 1e-12);

    CHECK_THROWS_AS(evolve(state, EvolutionParams{vec({0.3})}, coeffs), DimensionMismatch);
}

TEST_CASE("twirling groups branches by their noise eigenvalue tuples") {
    // Noise row (1, 0): eigenvalues 1, 1, -1 over the three branches.
    const BranchState state = BranchState::from_branches({{0.6, vec({1, 2})},
                                                          {0.48, vec({1, -2})},
                                                          {0.64, vec({-1, 0})}});
    const CoefficientMatrix coeffs = rows({{0, 1}, {1, 0}});
    const BlockDecomposition blocks = twirl(state, coeffs, {1});

    REQUIRE(blocks.blocks.size() == 2);
    CHECK(blocks.blocks[0].noise_eigenvalues[0] == -1.0);
    CHECK(close(blocks.blocks[0].weight, 0.64 * 0.64, 1e-15));
    CHECK(close(blocks.blocks[1].weight, 0.6 * 0.6 + 0.48 * 0.48, 1e-15));
    CHECK(blocks.blocks[0].state.branch_count() == 1);
    CHECK(blocks.blocks[1].state.branch_count() == 2);
    CHECK(std::abs(blocks.total_weight() - 1.0) < 1e-12);
    // Renormalized block states are unit vectors again.
    for (const Block& b : blocks.blocks) {
        CHECK(std::abs(b.state.norm_squared() - 1.0) < 1e-12);
    }
    const double w0 = 0.64 * 0.64;
    CHECK(close(blocks.purity(), w0 * w0 + (1 - w0) * (1 - w0), 1e-12));

    // Reassembling and twirling again reproduces the decomposition.
    const BlockDecomposition again = twirl(reassemble(blocks), coeffs, {1});
    REQUIRE(again.blocks.size() == 2);
    CHECK(close(again.blocks[0].weight, blocks.blocks[0].weight, 1e-15));
    CHECK(close(again.blocks[1].weight, blocks.blocks[1].weight, 1e-15));
}

TEST_CASE("twirl grouping tolerance chains from the block representative") {
    const double tol = 1e-6;
    const BranchState state = BranchState::from_branches(
        {{0.5, vec({0.0})}, {0.5, vec({0.9 * tol})}, {kInvSqrt2, vec({1.8 * tol})}});
    const CoefficientMatrix coeffs = rows({{1}});
    const BlockDecomposition blocks = twirl(state, coeffs, {0}, tol);
    // 0 and 0.9 tol join the first representative; 1.8 tol does not.
    REQUIRE(blocks.blocks.size() == 2);
    CHECK(blocks.blocks[0].state.branch_count() == 2);
    CHECK(blocks.blocks[1].state.branch_count() == 1);
}

TEST_CASE("pure QFI is four times the generator variance") {
    const BranchState ghz = two_branch(vec({1, 1, 1}), vec({-1, -1, -1}));
    CHECK(close(qfi_pure(ghz, vec({1, 1, 1})), 36.0, 1e-12));

    // Unequal weights: QFI = 4 p q (g1 - g2)^2.
    const double theta = 0.3;
    const BranchState tilted = BranchState::from_branches(
        {{std::cos(theta), vec({2})}, {std::sin(theta), vec({-1})}});
    const double p = std::cos(theta) * std::cos(theta);
    const double expected = 4.0 * p * (1 - p) * 9.0;
    CHECK(close(qfi_pure(tilted, vec({1})), expected, 1e-12));

    // Phases do not change the variance.
    const CoefficientMatrix coeffs = rows({{1, 1, 1}});
    const BranchState rotated = evolve(ghz, EvolutionParams{vec({0.7})}, coeffs);
    CHECK(close(qfi_pure(rotated, vec({1, 1, 1})), 36.0, 1e-12));
}

TEST_CASE("mixed QFI is the weighted sum over pure blocks") {
    const BranchState state = BranchState::from_branches({{0.6, vec({1, 1})},
                                                          {0.48, vec({-1, -1})},
                                                          {0.64, vec({1, -1})}});
    const CoefficientMatrix coeffs = rows({{1, 1}, {1, -1}});
    const BlockDecomposition blocks = twirl(state, coeffs, {1});
    // Block at noise eigenvalue 0 holds the first two branches; within it the
    // renormalized probabilities are 0.6^2/w and 0.48^2/w.
    const double w = 0.36 + 0.2304;
    const double p = 0.36 / w;
    const double block_qfi = 4.0 * p * (1 - p) * 16.0;
    CHECK(close(qfi_mixed(blocks, vec({1, 1})), w * block_qfi, 1e-12));

    // Twirling a state whose branches all separate kills the QFI entirely.
    const BranchState fragile = two_branch(vec({1, 0}), vec({-1, 0}));
    const BlockDecomposition split = twirl(fragile, coeffs, {0, 1});
    CHECK(qfi_mixed(split, vec({1, 0})) == 0.0);
    CHECK(close(qfi_pure(fragile, vec({1, 0})), 4.0, 1e-12));
}

TEST_CASE("parity readout saturates the pair QFI at any phase") {
    const ProbePair pair{vec({1, -1, 1}), vec({-1, 1, -1}), 0.0};
    const CoefficientMatrix coeffs = rows({{1, 2, 3}});
    const double gap = 2.0 * (1.0 - 2.0 + 3.0);
    for (double phase : {0.0, 0.21, 1.57, 3.14}) {
        CHECK(close(parity_fisher(pair, coeffs, 0, phase), gap * gap, 1e-12));
    }
    const ProbePair degenerate{vec({1, 1, 1}), vec({1, 1, 1}), 0.0};
    CHECK_THROWS_AS(parity_fisher(degenerate, coeffs, 0, 0.1), NotTwoBranch);
}

}  // TEST_SUITE
