#ifndef QSENSE_LINPROG_HPP
#define QSENSE_LINPROG_HPP

#include <Eigen/Dense>

namespace qsense {

/// Result of a box-constrained linear program.
struct LinProgResult {
    Eigen::VectorXd solution;
    double objective = 0.0;
};

/// Maximize objective.dot(x) subject to equalities * x = rhs and
/// -bounds[i] <= x[i] <= bounds[i] (bounds >= 0; a zero bound pins the
/// coordinate).
///
/// Dense two-phase simplex with Bland's rule, so pivoting is deterministic
/// and cannot cycle. `equalities` may be empty (zero rows). Throws Infeasible
/// when no point of the box satisfies the equalities; with rhs = 0 the origin
/// is always feasible and the box rules out unboundedness.
///
/// When the optimal face is not a single vertex, the returned vertex is the
/// lexicographically smallest optimal one, found by minimizing each
/// coordinate in turn on the optimal face.
LinProgResult maximize_over_box(const Eigen::VectorXd& objective,
                                const Eigen::MatrixXd& equalities,
                                const Eigen::VectorXd& rhs,
                                const Eigen::VectorXd& bounds);

}  // namespace qsense

#endif
