#include "qsense/probe_designer.hpp"

#include <algorithm>
#include <cmath>

#include "qsense/linprog.hpp"

namespace qsense {

namespace {

constexpr double kIndependenceTol = 1e-9;

/// Rows this far below the largest row are numerically zero: sampling a
/// function that vanishes at every sensor leaves pure round-off, which must
/// not be mistaken for a constraint direction.
double zero_row_floor(const Matrix& rows) {
    double largest = 0.0;
    for (int i = 0; i < rows.rows(); ++i) {
        largest = std::max(largest, rows.row(i).norm());
    }
    return kIndependenceTol * largest;
}

/// Orthonormal basis of the row span, modified Gram-Schmidt with one
/// reorthogonalization pass. Rows that are dependent on earlier rows at
/// relative tolerance kIndependenceTol, or numerically zero, are skipped.
std::vector<Vector> orthonormal_row_basis(const Matrix& rows) {
    const double floor = zero_row_floor(rows);
    std::vector<Vector> basis;
    for (int i = 0; i < rows.rows(); ++i) {
        const Vector row = rows.row(i).transpose();
        const double row_norm = row.norm();
        if (row_norm <= floor) {
            continue;
        }
        Vector residual = row;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : basis) {
                residual -= q.dot(residual) * q;
            }
        }
        if (residual.norm() >= kIndependenceTol * row_norm) {
            basis.push_back(residual / residual.norm());
        }
    }
    return basis;
}

Vector project_out(const Vector& v, const std::vector<Vector>& basis) {
    Vector residual = v;
    for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& q : basis) {
            residual -= q.dot(residual) * q;
        }
    }
    return residual;
}

ProbePair make_pair(const Vector& s, const Vector& signal) {
    ProbePair pair;
    pair.s = s;
    pair.r = -s;
    const double gap = signal.dot(pair.s - pair.r);
    pair.qfi = gap * gap;
    return pair;
}

}  // namespace

DesignProblem::DesignProblem(CoefficientMatrix coefficients, int signal_index,
                             std::vector<int> noise_indices, Vector box, bool integer_mode)
    : coefficients_(std::move(coefficients)),
      signal_index_(signal_index),
      noise_indices_(std::move(noise_indices)),
      box_(std::move(box)),
      integer_mode_(integer_mode) {
    if (coefficients_.function_count() < 1 || coefficients_.site_count() < 1) {
        throw Error("coefficient matrix must be nonempty");
    }
    if (!coefficients_.values.allFinite()) {
        throw Error("coefficient matrix must be finite");
    }
    if (signal_index_ < 0 || signal_index_ >= coefficients_.function_count()) {
        throw Error("signal index out of range");
    }
    std::sort(noise_indices_.begin(), noise_indices_.end());
    for (std::size_t i = 0; i < noise_indices_.size(); ++i) {
        const int k = noise_indices_[i];
        if (k < 0 || k >= coefficients_.function_count()) {
            throw Error("noise index out of range");
        }
        if (k == signal_index_) {
            throw Error("signal index cannot also be a noise index");
        }
        if (i > 0 && noise_indices_[i - 1] == k) {
            throw Error("duplicate noise index");
        }
    }
    if (box_.size() != coefficients_.site_count()) {
        throw DimensionMismatch("box length does not match the site count");
    }
    for (int j = 0; j < box_.size(); ++j) {
        if (!std::isfinite(box_[j]) || box_[j] < 0.0) {
            throw Error("box bounds must be finite and nonnegative");
        }
    }
}

Matrix DesignProblem::noise_rows() const {
    Matrix rows(static_cast<int>(noise_indices_.size()), site_count());
    for (std::size_t i = 0; i < noise_indices_.size(); ++i) {
        rows.row(static_cast<int>(i)) = coefficients_.values.row(noise_indices_[i]);
    }
    return rows;
}

PerpDecomposition perp_decompose(const DesignProblem& problem) {
    const Vector signal = problem.signal_row();
    const std::vector<Vector> noise_basis = orthonormal_row_basis(problem.noise_rows());

    PerpDecomposition out;
    out.perp = project_out(signal, noise_basis);
    out.parallel = signal - out.perp;
    if (out.perp.norm() < 1e-9 * signal.norm()) {
        throw SignalIndistinguishable(
            "signal row lies in the span of the noise rows; no probe can separate them");
    }

    // The decoherence-free subspace is the orthogonal complement of the
    // noise span. Complete the noise basis with projected standard basis
    // vectors, keeping the standard order.
    const int dimension = problem.site_count();
    const int dfs_dimension = dimension - static_cast<int>(noise_basis.size());
    std::vector<Vector> accepted = noise_basis;
    for (int j = 0; j < dimension && static_cast<int>(out.dfs_basis.size()) < dfs_dimension;
         ++j) {
        Vector candidate = project_out(Vector::Unit(dimension, j), accepted);
        if (candidate.norm() >= kIndependenceTol) {
            candidate /= candidate.norm();
            accepted.push_back(candidate);
            out.dfs_basis.push_back(std::move(candidate));
        }
    }
    return out;
}

ProbePair noiseless_optimum(const DesignProblem& problem) {
    const Vector signal = problem.signal_row();
    Vector s(problem.site_count());
    for (int j = 0; j < problem.site_count(); ++j) {
        const double f = signal[j];
        s[j] = f > 0.0 ? problem.box()[j] : (f < 0.0 ? -problem.box()[j] : 0.0);
    }
    return make_pair(s, signal);
}

ProbePair optimal_probe(const DesignProblem& problem) {
    if (problem.integer_mode()) {
        throw Error("problem requests integer eigenvalues; use optimal_probe_integer");
    }
    perp_decompose(problem);

    const Vector signal = problem.signal_row();
    const double signal_norm = signal.norm();
    if (signal_norm == 0.0) {
        throw DegenerateOptimum("signal row is zero");
    }
    const double box_scale = problem.box().maxCoeff();
    if (box_scale == 0.0) {
        throw DegenerateOptimum("every site budget is zero");
    }

    // Solve in scaled units: unit objective, unit box, orthonormal noise
    // constraints. Uniform scaling preserves the lexicographic order of
    // vertices, so the tie-break is unaffected.
    const std::vector<Vector> noise_basis = orthonormal_row_basis(problem.noise_rows());
    Matrix equalities(static_cast<int>(noise_basis.size()), problem.site_count());
    for (std::size_t i = 0; i < noise_basis.size(); ++i) {
        equalities.row(static_cast<int>(i)) = noise_basis[i].transpose();
    }
    const LinProgResult lp =
        maximize_over_box(signal / signal_norm, equalities,
                          Vector::Zero(equalities.rows()), problem.box() / box_scale);
    if (lp.objective * box_scale * signal_norm <= 1e-9) {
        throw DegenerateOptimum("the noise constraints admit no probe with positive signal");
    }
    return make_pair(box_scale * lp.solution, signal);
}

ProbePair optimal_probe_integer(const DesignProblem& problem) {
    if (!problem.integer_mode()) {
        throw Error("problem requests continuous eigenvalues; use optimal_probe");
    }
    perp_decompose(problem);

    const int dimension = problem.site_count();
    double lattice_size = 1.0;
    for (int j = 0; j < dimension; ++j) {
        lattice_size *= 2.0 * std::floor(problem.box()[j]) + 1.0;
    }
    if (lattice_size > 1e7) {
        throw TooLarge("integer search space exceeds 10^7 lattice points");
    }

    const Vector signal = problem.signal_row();
    const std::vector<Vector> noise_basis = orthonormal_row_basis(problem.noise_rows());

    Vector s = (-problem.box().array().floor()).matrix();
    const Vector lower = s;
    bool found_nonzero = false;
    bool have_best = false;
    double best_value = 0.0;
    Vector best_s;
    for (;;) {
        bool feasible = true;
        const double s_norm = s.norm();
        for (const Vector& q : noise_basis) {
            if (std::abs(q.dot(s)) > 1e-9 * s_norm) {
                feasible = false;
                break;
            }
        }
        if (feasible && s_norm > 0.0) {
            found_nonzero = true;
            const double value = signal.dot(s);
            // Ascending lexicographic enumeration, so on ties the earlier
            // (smaller) vector wins by keeping the strict comparison.
            if (!have_best || value > best_value + 1e-9 * (1.0 + std::abs(best_value))) {
                have_best = true;
                best_value = value;
                best_s = s;
            }
        }
        int j = dimension - 1;
        for (; j >= 0; --j) {
            if (s[j] + 1.0 <= -lower[j]) {
                s[j] += 1.0;
                break;
            }
            s[j] = lower[j];
        }
        if (j < 0) {
            break;
        }
    }
    if (!found_nonzero) {
        throw Infeasible("no nonzero integer eigenvalue vector satisfies the noise constraints");
    }
    if (!have_best || best_value <= 0.0) {
        throw DegenerateOptimum("every feasible integer probe has zero signal projection");
    }
    return make_pair(best_s, signal);
}

double max_insensitivity_residual(const DesignProblem& problem, const ProbePair& pair) {
    const Vector gap = pair.s - pair.r;
    const double gap_norm = gap.norm();
    if (gap_norm == 0.0) {
        return 0.0;
    }
    // Numerically zero rows constrain nothing (the designer drops them), so
    // their round-off content is excluded from the metric as well.
    const double floor = zero_row_floor(problem.noise_rows());
    double worst = 0.0;
    for (int k : problem.noise_indices()) {
        const Vector row = problem.coefficients().row(k);
        const double row_norm = row.norm();
        if (row_norm <= floor) {
            continue;
        }
        worst = std::max(worst, std::abs(row.dot(gap)) / (row_norm * gap_norm));
    }
    return worst;
}

}  // namespace qsense
