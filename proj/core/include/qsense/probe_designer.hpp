#ifndef QSENSE_PROBE_DESIGNER_HPP
#define QSENSE_PROBE_DESIGNER_HPP

#include <vector>

#include "qsense/field_model.hpp"

namespace qsense {

/// One design task: which row of the coefficient matrix is the signal, which
/// rows are noise, and the per-site eigenvalue bounds.
class DesignProblem {
  public:
    DesignProblem(CoefficientMatrix coefficients, int signal_index,
                  std::vector<int> noise_indices, Vector box,
                  bool integer_mode = false);

    const CoefficientMatrix& coefficients() const { return coefficients_; }
    int signal_index() const { return signal_index_; }
    /// Sorted, duplicate-free, never contains the signal index.
    const std::vector<int>& noise_indices() const { return noise_indices_; }
    const Vector& box() const { return box_; }
    bool integer_mode() const { return integer_mode_; }

    Vector signal_row() const { return coefficients_.row(signal_index_); }
    int site_count() const { return coefficients_.site_count(); }

    /// Noise rows stacked into a matrix (possibly zero rows).
    Matrix noise_rows() const;

  private:
    CoefficientMatrix coefficients_;
    int signal_index_;
    std::vector<int> noise_indices_;
    Vector box_;
    bool integer_mode_;
};

/// The two effective eigenvalue vectors of the probe superposition and the
/// resulting quantum Fisher information (squared eigenvalue gap along the
/// signal row).
struct ProbePair {
    Vector s;
    Vector r;
    double qfi = 0.0;
};

/// Split of the signal row into a component orthogonal to every noise row
/// and a component inside their span, plus an orthonormal basis of the
/// decoherence-free subspace (the common nullspace of the noise rows).
struct PerpDecomposition {
    Vector perp;
    Vector parallel;
    std::vector<Vector> dfs_basis;
};

/// Gram-Schmidt decomposition of the signal row against the noise rows.
/// Redundant (linearly dependent) noise rows are allowed and ignored.
/// Throws SignalIndistinguishable when the orthogonal component is
/// negligible relative to the signal row.
PerpDecomposition perp_decompose(const DesignProblem& problem);

/// Optimal probe when nothing is treated as noise: saturate every site at
/// its bound with the sign of the signal row (zero where the row vanishes).
ProbePair noiseless_optimum(const DesignProblem& problem);

/// Optimal noise-insensitive probe over the continuous eigenvalue box:
/// maximize the signal projection subject to zero projection on every noise
/// row. Returns (s*, -s*). Requires integer_mode off.
ProbePair optimal_probe(const DesignProblem& problem);

/// Same optimization restricted to integer eigenvalues, by exhaustive
/// enumeration of the lattice points of the box. The number of lattice
/// points must not exceed 10^7. Throws Infeasible when only the origin
/// satisfies the noise constraints.
ProbePair optimal_probe_integer(const DesignProblem& problem);

/// Largest relative violation |f_k.(s-r)| / (|f_k||s-r|) over the noise
/// rows; zero when there are no noise rows or s = r.
double max_insensitivity_residual(const DesignProblem& problem, const ProbePair& pair);

}  // namespace qsense

#endif
