#include "doctest.h"
#include "qsense/errors.hpp"
#include "qsense/linprog.hpp"
#include "testutil.hpp"

using namespace qsense;
using test::vec;

TEST_SUITE("linprog") {

TEST_CASE("unconstrained box maximum saturates every coordinate") {
    const auto result = maximize_over_box(vec({1, -2, 0.5}), Matrix(0, 3), Vector(0),
                                          vec({1, 2, 3}));
    CHECK(result.objective == doctest::Approx(6.5).epsilon(1e-12));
    CHECK((result.solution - vec({1, -2, 3})).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("equality constraint moves the optimum onto a polytope vertex") {
    Matrix eq(1, 2);
    eq << 1, 1;
    const auto result = maximize_over_box(vec({1, -1}), eq, vec({0}), vec({2, 3}));
    CHECK(result.objective == doctest::Approx(4.0).epsilon(1e-12));
    CHECK((result.solution - vec({2, -2})).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("nonzero right hand side shifts the feasible slice") {
    Matrix eq(1, 3);
    eq << 1, 1, 1;
    const auto result = maximize_over_box(vec({1, 1, 0}), eq, vec({1}), vec({1, 1, 1}));
    // x0 = x1 = 1 forces x2 = -1.
    CHECK(result.objective == doctest::Approx(2.0).epsilon(1e-12));
    CHECK((result.solution - vec({1, 1, -1})).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("an optimal face resolves to its lexicographically smallest vertex") {
    SUBCASE("free coordinate") {
        const auto result =
            maximize_over_box(vec({1, 0}), Matrix(0, 2), Vector(0), vec({1, 1}));
        CHECK(result.objective == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((result.solution - vec({1, -1})).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("zero objective with a coupling row") {
        Matrix eq(1, 2);
        eq << 1, 1;
        const auto result = maximize_over_box(vec({0, 0}), eq, vec({0}), vec({2, 3}));
        CHECK(result.objective == doctest::Approx(0.0).epsilon(1e-12));
        CHECK((result.solution - vec({-2, 2})).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("zero bounds pin coordinates") {
    Matrix eq(1, 3);
    eq << 1, -1, 1;
    const auto result = maximize_over_box(vec({0, 1, 1}), eq, vec({0}), vec({2, 0, 1}));
    // x1 is pinned at 0, so x0 = -x2 and the objective reduces to x2.
    CHECK(result.objective == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((result.solution - vec({-1, 0, 1})).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("infeasible equalities are reported") {
    Matrix eq(1, 2);
    eq << 0, 0;
    CHECK_THROWS_AS(maximize_over_box(vec({1, 1}), eq, vec({1}), vec({1, 1})), Infeasible);

    Matrix far(1, 2);
    far << 1, 1;
    CHECK_THROWS_AS(maximize_over_box(vec({1, 1}), far, vec({10}), vec({1, 1})), Infeasible);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(maximize_over_box(Vector(0), Matrix(0, 0), Vector(0), Vector(0)), Error);
    CHECK_THROWS_AS(maximize_over_box(vec({1}), Matrix::Ones(1, 2), vec({0}), vec({1})),
                    DimensionMismatch);
    CHECK_THROWS_AS(maximize_over_box(vec({1, 1}), Matrix::Ones(1, 2), vec({0, 0}),
                                      vec({1, 1})),
                    DimensionMismatch);
    CHECK_THROWS_AS(maximize_over_box(vec({1, 1}), Matrix(0, 2), Vector(0), vec({1, -1})),
                    Error);
}

TEST_CASE("simplex value matches vertex enumeration on random instances") {
    test::Rng rng(0x7c31'05e9'aa84'd216ULL);
    int nontrivial = 0;
    for (int i = 0; i < 120; ++i) {
        const int n = rng.integer(2, 6);
        const int m = rng.integer(0, n - 1);
        const Matrix eq = test::random_matrix(rng, m, n, 1.5);
        const Vector c = test::random_vector(rng, n, 2.0);
        Vector bounds(n);
        for (int j = 0; j < n; ++j) {
            bounds[j] = 0.25 + 2.0 * rng.unit();
        }
        const auto result = maximize_over_box(c, eq, Vector::Zero(m), bounds);
        const double oracle = test::brute_force_box_lp(c, eq, bounds);
        CHECK(test::close(result.objective, oracle, 1e-7));
        // The returned point must itself be feasible and attain the value.
        if (m > 0) {
            CHECK((eq * result.solution).cwiseAbs().maxCoeff() < 1e-7);
        }
        CHECK(((result.solution.cwiseAbs() - bounds).array() <= 1e-9).all());
        CHECK(test::close(c.dot(result.solution), result.objective, 1e-9));
        if (result.objective > 1e-6) {
            ++nontrivial;
        }
    }
    CHECK(nontrivial > 60);  // the comparison is not vacuous
}

}  // TEST_SUITE
