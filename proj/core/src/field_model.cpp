#include "qsense/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsense {

namespace {

void require_length_scale(double r0) {
    if (!(r0 > 0.0)) {
        throw Error("length scale must be positive");
    }
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

}  // namespace

GeneratingFunctionSet GeneratingFunctionSet::taylor(int count, double length_scale) {
    if (count < 1) {
        throw Error("taylor series needs at least one function");
    }
    require_length_scale(length_scale);
    return GeneratingFunctionSet(TaylorSeries{count, length_scale});
}

GeneratingFunctionSet GeneratingFunctionSet::fourier_sine(int count, double length_scale) {
    if (count < 1) {
        throw Error("fourier sine series needs at least one function");
    }
    require_length_scale(length_scale);
    return GeneratingFunctionSet(FourierSineSeries{count, length_scale});
}

GeneratingFunctionSet GeneratingFunctionSet::point_sources(std::vector<PointSource> sources,
                                                           double exponent) {
    if (sources.empty()) {
        throw Error("point source set needs at least one source");
    }
    if (!(exponent >= 1.0)) {
        throw Error("point source exponent must be >= 1");
    }
    const auto dim = sources.front().position.size();
    if (dim < 1 || dim > 3) {
        throw DimensionMismatch("point source positions must have 1 to 3 coordinates");
    }
    for (const auto& source : sources) {
        if (source.position.size() != dim) {
            throw DimensionMismatch("point source positions must share one dimension");
        }
        if (!source.position.allFinite() || !std::isfinite(source.strength)) {
            throw Error("point source parameters must be finite");
        }
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            if ((sources[i].position - sources[j].position).squaredNorm() == 0.0) {
                throw Error("point source positions must be pairwise distinct");
            }
        }
    }
    return GeneratingFunctionSet(PointSourceSet{std::move(sources), exponent});
}

GeneratingFunctionSet GeneratingFunctionSet::tabulated(Matrix values) {
    if (values.rows() < 1 || values.cols() < 1) {
        throw Error("tabulated values must be a nonempty matrix");
    }
    if (!all_finite(values)) {
        throw Error("tabulated values must be finite");
    }
    return GeneratingFunctionSet(TabulatedValues{std::move(values)});
}

int GeneratingFunctionSet::function_count() const {
    return std::visit(
        [](const auto& spec) -> int {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, TaylorSeries> || std::is_same_v<T, FourierSineSeries>) {
                return spec.count;
            } else if constexpr (std::is_same_v<T, PointSourceSet>) {
                return static_cast<int>(spec.sources.size());
            } else {
                return static_cast<int>(spec.values.rows());
            }
        },
        kind_);
}

int GeneratingFunctionSet::spatial_dimension() const {
    if (const auto* ps = std::get_if<PointSourceSet>(&kind_)) {
        return static_cast<int>(ps->sources.front().position.size());
    }
    return 1;
}

double GeneratingFunctionSet::evaluate(int k, const Vector& position) const {
    if (k < 0 || k >= function_count()) {
        throw Error("function index out of range");
    }
    return std::visit(
        [&](const auto& spec) -> double {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, TaylorSeries>) {
                if (position.size() != 1) {
                    throw DimensionMismatch("taylor series expects scalar positions");
                }
                return std::pow(position[0] / spec.length_scale, k);
            } else if constexpr (std::is_same_v<T, FourierSineSeries>) {
                if (position.size() != 1) {
                    throw DimensionMismatch("fourier sine series expects scalar positions");
                }
                // rows are k = 1..count
                return std::sin((k + 1) * std::numbers::pi * position[0] / spec.length_scale);
            } else if constexpr (std::is_same_v<T, PointSourceSet>) {
                const auto& source = spec.sources[static_cast<std::size_t>(k)];
                if (position.size() != source.position.size()) {
                    throw DimensionMismatch("position dimension does not match the sources");
                }
                const double dist = (position - source.position).norm();
                if (dist == 0.0) {
                    throw PositionOnSource("sensor coincides with a point source");
                }
                return source.strength * std::pow(dist, -spec.exponent);
            } else {
                throw Error("tabulated sets have no positional evaluation");
            }
        },
        kind_);
}

SensorArray::SensorArray(std::vector<Vector> positions, std::vector<int> qubit_counts)
    : positions_(std::move(positions)), qubit_counts_(std::move(qubit_counts)) {
    if (positions_.empty()) {
        throw Error("sensor array needs at least one site");
    }
    if (positions_.size() != qubit_counts_.size()) {
        throw DimensionMismatch("positions and qubit counts must have equal length");
    }
    const auto dim = positions_.front().size();
    if (dim < 1 || dim > 3) {
        throw DimensionMismatch("sensor positions must have 1 to 3 coordinates");
    }
    long long total = 0;
    for (std::size_t j = 0; j < positions_.size(); ++j) {
        if (positions_[j].size() != dim) {
            throw DimensionMismatch("sensor positions must share one dimension");
        }
        if (!positions_[j].allFinite()) {
            throw Error("sensor positions must be finite");
        }
        if (qubit_counts_[j] < 0) {
            throw Error("qubit counts must be nonnegative");
        }
        total += qubit_counts_[j];
    }
    if (total < 1) {
        throw Error("sensor array needs at least one qubit in total");
    }
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        for (std::size_t j = i + 1; j < positions_.size(); ++j) {
            if ((positions_[i] - positions_[j]).squaredNorm() == 0.0) {
                throw Error("sensor positions must be pairwise distinct");
            }
        }
    }
}

int SensorArray::total_qubits() const {
    int total = 0;
    for (int n : qubit_counts_) {
        total += n;
    }
    return total;
}

Vector SensorArray::box_bounds() const {
    Vector bounds(site_count());
    for (int j = 0; j < site_count(); ++j) {
        bounds[j] = static_cast<double>(qubit_counts_[static_cast<std::size_t>(j)]);
    }
    return bounds;
}

CoefficientMatrix sample_coefficients(const GeneratingFunctionSet& functions,
                                      const SensorArray& array) {
    if (const auto* tab = std::get_if<TabulatedValues>(&functions.kind())) {
        if (tab->values.cols() != array.site_count()) {
            throw DimensionMismatch("tabulated values do not match the sensor count");
        }
        return CoefficientMatrix{tab->values};
    }
    const int rows = functions.function_count();
    const int cols = array.site_count();
    Matrix values(rows, cols);
    for (int j = 0; j < cols; ++j) {
        const Vector& position = array.positions()[static_cast<std::size_t>(j)];
        for (int k = 0; k < rows; ++k) {
            values(k, j) = functions.evaluate(k, position);
        }
    }
    return CoefficientMatrix{std::move(values)};
}

std::vector<double> fourier_extremal_positions(int k_star, double r0) {
    if (k_star < 1) {
        throw Error("mode index must be >= 1");
    }
    require_length_scale(r0);
    std::vector<double> positions(static_cast<std::size_t>(k_star));
    for (int j = 1; j <= k_star; ++j) {
        positions[static_cast<std::size_t>(j - 1)] = r0 * (j - 0.5) / k_star;
    }
    return positions;
}

RankReport rank_report(const CoefficientMatrix& matrix, double tol) {
    if (!(tol > 0.0)) {
        throw Error("rank tolerance must be positive");
    }
    RankReport report;

    Eigen::ColPivHouseholderQR<Matrix> qr(matrix.values);
    qr.setThreshold(tol);
    report.rank = static_cast<int>(qr.rank());

    // Greedy pass: a row is dependent when it adds nothing to the span of
    // the rows kept before it.
    std::vector<Vector> basis;
    for (int k = 0; k < matrix.function_count(); ++k) {
        const Vector row = matrix.row(k);
        const double row_norm = row.norm();
        if (row_norm == 0.0) {
            report.dependent_rows.push_back(k);
            continue;
        }
        Vector residual = row;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : basis) {
                residual -= q.dot(residual) * q;
            }
        }
        if (residual.norm() < tol * row_norm) {
            report.dependent_rows.push_back(k);
        } else {
            basis.push_back(residual / residual.norm());
        }
    }
    return report;
}

double fourier_alternating_overlap(int k, int k0, double r0) {
    if (k < 1 || k0 < 1) {
        throw Error("mode indices must be >= 1");
    }
    require_length_scale(r0);
    const auto positions = fourier_extremal_positions(k0, r0);
    double sum = 0.0;
    double sign = 1.0;  // sign of mode k0 at its extremal points: +,-,+,...
    for (double r : positions) {
        sum += sign * std::sin(k * std::numbers::pi * r / r0);
        sign = -sign;
    }
    return sum / k0;
}

}  // namespace qsense
