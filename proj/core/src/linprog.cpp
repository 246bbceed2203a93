#include "qsense/linprog.hpp"

#include <cmath>
#include <vector>

#include "qsense/errors.hpp"

namespace qsense {

namespace {

constexpr double kTol = 1e-9;
constexpr double kFeasTol = 1e-7;

/// Dense tableau simplex in minimization form with Bland's rule for both the
/// entering and the leaving choice, which rules out cycling on degenerate
/// vertices. Columns: J shifted originals, J box slacks, one artificial per
/// equality row.
class Simplex {
public:
    Simplex(const Eigen::MatrixXd& equalities, const Eigen::VectorXd& rhs,
            const Eigen::VectorXd& upper)
        : num_vars_(static_cast<int>(upper.size())),
          num_eq_(static_cast<int>(equalities.rows())),
          rows_(num_eq_ + num_vars_),
          cols_(2 * num_vars_ + num_eq_) {
        tab_ = Eigen::MatrixXd::Zero(rows_, cols_ + 1);
        basis_.resize(static_cast<std::size_t>(rows_));
        banned_.assign(static_cast<std::size_t>(cols_), false);

        for (int i = 0; i < num_eq_; ++i) {
            const double sign = rhs[i] < 0.0 ? -1.0 : 1.0;
            tab_.block(i, 0, 1, num_vars_) = sign * equalities.row(i);
            tab_(i, 2 * num_vars_ + i) = 1.0;
            tab_(i, cols_) = sign * rhs[i];
            basis_[static_cast<std::size_t>(i)] = 2 * num_vars_ + i;
        }
        for (int j = 0; j < num_vars_; ++j) {
            const int i = num_eq_ + j;
            tab_(i, j) = 1.0;
            tab_(i, num_vars_ + j) = 1.0;
            tab_(i, cols_) = upper[j];
            basis_[static_cast<std::size_t>(i)] = num_vars_ + j;
        }
    }

    /// Runs phase 1 and phase 2. phase2_cost is the minimization cost over
    /// the shifted variables only.
    Eigen::VectorXd solve(const Eigen::VectorXd& phase2_cost) {
        Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(cols_);
        for (int i = 0; i < num_eq_; ++i) {
            cost1[2 * num_vars_ + i] = 1.0;
        }
        run_phase(cost1);
        if (objective_value(cost1) > kFeasTol) {
            throw Infeasible("equality constraints cannot be met inside the box");
        }
        remove_artificials();

        Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(cols_);
        cost2.head(num_vars_) = phase2_cost;
        run_phase(cost2);

        Eigen::VectorXd x = Eigen::VectorXd::Zero(num_vars_);
        for (int i = 0; i < rows_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < num_vars_) {
                x[basis_[static_cast<std::size_t>(i)]] = tab_(i, cols_);
            }
        }
        return x;
    }

private:
    double objective_value(const Eigen::VectorXd& cost) const {
        double value = 0.0;
        for (int i = 0; i < rows_; ++i) {
            value += cost[basis_[static_cast<std::size_t>(i)]] * tab_(i, cols_);
        }
        return value;
    }

    void run_phase(const Eigen::VectorXd& cost) {
        Eigen::VectorXd reduced = cost;
        for (int i = 0; i < rows_; ++i) {
            const double cb = cost[basis_[static_cast<std::size_t>(i)]];
            if (cb != 0.0) {
                reduced -= cb * tab_.row(i).head(cols_);
            }
        }
        for (;;) {
            int entering = -1;
            for (int j = 0; j < cols_; ++j) {
                if (banned_[static_cast<std::size_t>(j)]) {
                    continue;
                }
                if (reduced[j] < -kTol) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) {
                return;
            }
            const int leaving = ratio_test(entering);
            if (leaving < 0) {
                throw Error("linear program is unbounded");
            }
            pivot(leaving, entering);
            reduced -= reduced[entering] * tab_.row(leaving).head(cols_);
        }
    }

    int ratio_test(int entering) const {
        int leaving = -1;
        double best = 0.0;
        for (int i = 0; i < rows_; ++i) {
            const double a = tab_(i, entering);
            if (a <= kTol) {
                continue;
            }
            const double ratio = tab_(i, cols_) / a;
            if (leaving < 0 || ratio < best - kTol ||
                (ratio < best + kTol &&
                 basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)])) {
                leaving = i;
                best = ratio;
            }
        }
        return leaving;
    }

    void pivot(int row, int col) {
        tab_.row(row) /= tab_(row, col);
        for (int i = 0; i < rows_; ++i) {
            if (i == row) {
                continue;
            }
            const double factor = tab_(i, col);
            if (factor != 0.0) {
                tab_.row(i) -= factor * tab_.row(row);
            }
        }
        basis_[static_cast<std::size_t>(row)] = col;
    }

    /// Pivots basic artificials out on any real column, drops rows that are
    /// numerically redundant, and bans artificial columns from re-entering.
    void remove_artificials() {
        std::vector<int> keep;
        for (int i = 0; i < rows_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < 2 * num_vars_) {
                keep.push_back(i);
                continue;
            }
            int col = -1;
            for (int j = 0; j < 2 * num_vars_; ++j) {
                if (std::abs(tab_(i, j)) > kTol) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) {
                pivot(i, col);
                keep.push_back(i);
            }
        }
        if (static_cast<int>(keep.size()) < rows_) {
            Eigen::MatrixXd compact(static_cast<int>(keep.size()), cols_ + 1);
            std::vector<int> new_basis;
            for (std::size_t i = 0; i < keep.size(); ++i) {
                compact.row(static_cast<int>(i)) = tab_.row(keep[i]);
                new_basis.push_back(basis_[static_cast<std::size_t>(keep[i])]);
            }
            tab_ = std::move(compact);
            basis_ = std::move(new_basis);
            rows_ = static_cast<int>(keep.size());
        }
        for (int i = 0; i < num_eq_; ++i) {
            banned_[static_cast<std::size_t>(2 * num_vars_ + i)] = true;
        }
    }

    int num_vars_;
    int num_eq_;
    int rows_;
    int cols_;
    Eigen::MatrixXd tab_;
    std::vector<int> basis_;
    std::vector<bool> banned_;
};

/// One plain maximization over the shifted box, no tie breaking.
Eigen::VectorXd solve_once(const Eigen::VectorXd& objective, const Eigen::MatrixXd& equalities,
                           const Eigen::VectorXd& rhs, const Eigen::VectorXd& bounds) {
    // Shift to x = s + bounds, so the feasible box becomes [0, 2 bounds].
    const Eigen::VectorXd shifted_rhs = rhs + equalities * bounds;
    Simplex simplex(equalities, shifted_rhs, 2.0 * bounds);
    const Eigen::VectorXd x = simplex.solve(-objective);
    return x - bounds;
}

}  // namespace

LinProgResult maximize_over_box(const Eigen::VectorXd& objective,
                                const Eigen::MatrixXd& equalities, const Eigen::VectorXd& rhs,
                                const Eigen::VectorXd& bounds) {
    const int n = static_cast<int>(objective.size());
    if (n < 1) {
        throw Error("objective must have at least one entry");
    }
    if (equalities.cols() != n && equalities.rows() != 0) {
        throw DimensionMismatch("equality matrix width does not match the objective");
    }
    if (rhs.size() != equalities.rows()) {
        throw DimensionMismatch("equality right hand side does not match the row count");
    }
    if (bounds.size() != n) {
        throw DimensionMismatch("bounds length does not match the objective");
    }
    for (int j = 0; j < n; ++j) {
        if (!(bounds[j] >= 0.0)) {
            throw Error("box bounds must be nonnegative");
        }
    }
    if (!objective.allFinite() || !equalities.allFinite() || !rhs.allFinite() ||
        !bounds.allFinite()) {
        throw Error("linear program data must be finite");
    }

    const Eigen::MatrixXd eq = equalities.rows() == 0 ? Eigen::MatrixXd::Zero(0, n) : equalities;
    const Eigen::VectorXd first = solve_once(objective, eq, rhs, bounds);
    const double value = objective.dot(first);

    // Tie breaking: sequentially minimize each coordinate over the optimal
    // face. The result is the lexicographically smallest optimal vertex and
    // does not depend on which optimum the plain solve happened to return.
    Eigen::MatrixXd aug(eq.rows() + 1 + n, n);
    Eigen::VectorXd aug_rhs(eq.rows() + 1 + n);
    aug.topRows(eq.rows()) = eq;
    aug_rhs.head(eq.rows()) = rhs;
    aug.row(eq.rows()) = objective.transpose();
    aug_rhs[eq.rows()] = value;

    Eigen::VectorXd solution(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd direction = Eigen::VectorXd::Zero(n);
        direction[i] = -1.0;
        const int active = static_cast<int>(eq.rows()) + 1 + i;
        const Eigen::VectorXd s =
            solve_once(direction, aug.topRows(active), aug_rhs.head(active), bounds);
        solution[i] = s[i];
        aug.row(active) = Eigen::VectorXd::Unit(n, i).transpose();
        aug_rhs[active] = solution[i];
    }

    return LinProgResult{solution, objective.dot(solution)};
}

}  // namespace qsense
