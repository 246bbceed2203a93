#ifndef QSENSE_FIELD_MODEL_HPP
#define QSENSE_FIELD_MODEL_HPP

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qsense/errors.hpp"

namespace qsense {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Polynomial basis f_k(r) = (r/r0)^k for k = 0..count-1, one spatial
/// dimension.
struct TaylorSeries {
    int count = 0;
    double length_scale = 1.0;
};

/// Standing-wave basis f_k(r) = sin(k*pi*r/r0) for k = 1..count, one spatial
/// dimension. The field vanishes at r = 0 and r = r0.
struct FourierSineSeries {
    int count = 0;
    double length_scale = 1.0;
};

/// One inverse-power emitter: f(r) = strength * |r - position|^(-exponent).
struct PointSource {
    Vector position;
    double strength = 1.0;
};

/// A family of point emitters sharing one distance exponent. Function k is
/// the field of source k. Source positions must be pairwise distinct.
struct PointSourceSet {
    std::vector<PointSource> sources;
    double exponent = 2.0;
};

/// Explicit per-site samples; sampling returns the stored values verbatim.
struct TabulatedValues {
    Matrix values;  // functions x sites
};

/// The spatial functions whose expansion coefficients the network senses.
/// Immutable after construction; all factory functions validate their inputs.
class GeneratingFunctionSet {
  public:
    using Kind = std::variant<TaylorSeries, FourierSineSeries, PointSourceSet, TabulatedValues>;

    static GeneratingFunctionSet taylor(int count, double length_scale);
    static GeneratingFunctionSet fourier_sine(int count, double length_scale);
    static GeneratingFunctionSet point_sources(std::vector<PointSource> sources, double exponent);
    static GeneratingFunctionSet tabulated(Matrix values);

    /// Number of functions (rows of the sampled coefficient matrix).
    int function_count() const;

    /// Spatial dimension positions must have; 1 for the series bases.
    int spatial_dimension() const;

    /// Evaluate function `k` (0-based row index) at one position.
    double evaluate(int k, const Vector& position) const;

    const Kind& kind() const { return kind_; }

  private:
    explicit GeneratingFunctionSet(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

/// Sensor sites: positions (pairwise distinct, shared dimension) and the
/// qubit budget per site. Site j admits effective eigenvalues in
/// [-qubit_counts[j], qubit_counts[j]].
class SensorArray {
  public:
    SensorArray(std::vector<Vector> positions, std::vector<int> qubit_counts);

    int site_count() const { return static_cast<int>(positions_.size()); }
    int total_qubits() const;
    int spatial_dimension() const { return static_cast<int>(positions_.front().size()); }

    const std::vector<Vector>& positions() const { return positions_; }
    const std::vector<int>& qubit_counts() const { return qubit_counts_; }

    /// Per-coordinate bounds of the eigenvalue box, as doubles.
    Vector box_bounds() const;

  private:
    std::vector<Vector> positions_;
    std::vector<int> qubit_counts_;
};

/// K x J samples f_kj = f_k(r_j). Row k collects the per-site weights of one
/// collective generator (the weighted sum of site Z operators).
struct CoefficientMatrix {
    Matrix values;

    int function_count() const { return static_cast<int>(values.rows()); }
    int site_count() const { return static_cast<int>(values.cols()); }
    Vector row(int k) const { return values.row(k).transpose(); }
};

struct RankReport {
    int rank = 0;
    /// Rows that add nothing to the span of the rows before them.
    std::vector<int> dependent_rows;
};

/// Evaluate every generating function at every sensor position.
CoefficientMatrix sample_coefficients(const GeneratingFunctionSet& functions,
                                      const SensorArray& array);

/// Positions of the |f| = 1 extrema of sin(k_star*pi*r/r0) on (0, r0):
/// r_j = r0*(j - 1/2)/k_star for j = 1..k_star. Field signs alternate
/// starting with +1.
std::vector<double> fourier_extremal_positions(int k_star, double r0);

/// Numerical rank (column-pivoted QR) plus the rows flagged as dependent on
/// the rows preceding them, at relative tolerance `tol`.
RankReport rank_report(const CoefficientMatrix& matrix, double tol = 1e-9);

/// Overlap of function row k with the alternating extremal pattern of row
/// k0, sampled at fourier_extremal_positions(k0, r0) and normalized by k0.
/// Vanishes unless k = k0*(1+2m), where it equals (-1)^m.
double fourier_alternating_overlap(int k, int k0, double r0 = 1.0);

}  // namespace qsense

#endif
