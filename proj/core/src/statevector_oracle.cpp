#include "qsense/statevector_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace qsense {

namespace {

constexpr double kZeroEigenvalue = 1e-12;

/// Weighted sum of single-qubit Z eigenvalues for the basis state `x`.
double diagonal_eigenvalue(std::size_t x, const std::vector<double>& qubit_weights) {
    double value = 0.0;
    for (std::size_t q = 0; q < qubit_weights.size(); ++q) {
        value += (x >> q & 1U) ? qubit_weights[q] : -qubit_weights[q];
    }
    return value;
}

std::vector<double> qubit_row_weights(const CoefficientMatrix& coefficients, int k,
                                      const std::vector<int>& site_of_qubit) {
    std::vector<double> weights(site_of_qubit.size());
    for (std::size_t q = 0; q < site_of_qubit.size(); ++q) {
        weights[q] = coefficients.values(k, site_of_qubit[q]);
    }
    return weights;
}

}  // namespace

OracleResult statevector_oracle(const BranchState& state, const std::vector<int>& qubit_counts,
                                const CoefficientMatrix& coefficients,
                                const EvolutionParams& params, int signal_index,
                                const std::vector<int>& noise_indices, double group_tol) {
    const int sites = state.site_count();
    if (static_cast<int>(qubit_counts.size()) != sites ||
        coefficients.site_count() != sites) {
        throw DimensionMismatch("qubit counts and coefficients must match the state");
    }
    if (params.phases.size() != coefficients.function_count()) {
        throw DimensionMismatch("one phase per coefficient row is required");
    }
    if (signal_index < 0 || signal_index >= coefficients.function_count()) {
        throw Error("signal index out of range");
    }
    for (int k : noise_indices) {
        if (k < 0 || k >= coefficients.function_count()) {
            throw Error("noise index out of range");
        }
    }
    if (!(group_tol > 0.0)) {
        throw Error("grouping tolerance must be positive");
    }

    int total_qubits = 0;
    std::vector<int> offset(static_cast<std::size_t>(sites));
    std::vector<int> site_of_qubit;
    for (int j = 0; j < sites; ++j) {
        if (qubit_counts[static_cast<std::size_t>(j)] < 0) {
            throw Error("qubit counts must be nonnegative");
        }
        offset[static_cast<std::size_t>(j)] = total_qubits;
        total_qubits += qubit_counts[static_cast<std::size_t>(j)];
        for (int q = 0; q < qubit_counts[static_cast<std::size_t>(j)]; ++q) {
            site_of_qubit.push_back(j);
        }
    }
    if (total_qubits > 12) {
        throw TooLarge("statevector oracle is capped at 12 qubits");
    }
    if (total_qubits < 1) {
        throw Error("statevector oracle needs at least one qubit");
    }

    // Each branch becomes one computational basis state: at site j the first
    // (n_j + s_j)/2 qubits point up, the rest down.
    const std::size_t dim = std::size_t{1} << total_qubits;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (const Branch& branch : state.branches()) {
        std::size_t index = 0;
        for (int j = 0; j < sites; ++j) {
            const double s = branch.eigenvalues[j];
            const double rounded = std::round(s);
            const int n = qubit_counts[static_cast<std::size_t>(j)];
            if (std::abs(s - rounded) > 1e-9 || std::abs(rounded) > n ||
                std::llround(std::abs(rounded - n)) % 2 != 0) {
                throw NonIntegerEigenvalue(
                    "branch eigenvalue is not realizable with this site's qubits");
            }
            const int up = (n + static_cast<int>(rounded)) / 2;
            for (int q = 0; q < up; ++q) {
                index |= std::size_t{1} << (offset[static_cast<std::size_t>(j)] + q);
            }
        }
        psi[static_cast<Eigen::Index>(index)] += branch.amplitude;
    }

    // Diagonal phase evolution accumulated per qubit.
    std::vector<double> phase_weights(site_of_qubit.size(), 0.0);
    for (int k = 0; k < coefficients.function_count(); ++k) {
        const auto row = qubit_row_weights(coefficients, k, site_of_qubit);
        for (std::size_t q = 0; q < row.size(); ++q) {
            phase_weights[q] += params.phases[k] * row[q];
        }
    }
    for (std::size_t x = 0; x < dim; ++x) {
        const double phase = diagonal_eigenvalue(x, phase_weights);
        psi[static_cast<Eigen::Index>(x)] *= Complex(std::cos(phase), std::sin(phase));
    }

    const auto signal_weights = qubit_row_weights(coefficients, signal_index, site_of_qubit);

    OracleResult result;
    {
        double mean = 0.0;
        for (std::size_t x = 0; x < dim; ++x) {
            mean += std::norm(psi[static_cast<Eigen::Index>(x)]) *
                    diagonal_eigenvalue(x, signal_weights);
        }
        double var = 0.0;
        for (std::size_t x = 0; x < dim; ++x) {
            const double centered = diagonal_eigenvalue(x, signal_weights) - mean;
            var += std::norm(psi[static_cast<Eigen::Index>(x)]) * centered * centered;
        }
        result.qfi = 4.0 * var;
    }

    // Support of the evolved state and per-index noise eigenvalue tuples.
    std::vector<std::size_t> support;
    for (std::size_t x = 0; x < dim; ++x) {
        if (std::abs(psi[static_cast<Eigen::Index>(x)]) > 0.0) {
            support.push_back(x);
        }
    }
    const int span = static_cast<int>(support.size());
    std::vector<std::vector<double>> noise_weights;
    noise_weights.reserve(noise_indices.size());
    for (int k : noise_indices) {
        noise_weights.push_back(qubit_row_weights(coefficients, k, site_of_qubit));
    }
    std::vector<int> group_of(support.size(), -1);
    std::vector<std::size_t> group_representative;
    for (std::size_t i = 0; i < support.size(); ++i) {
        for (std::size_t g = 0; g < group_representative.size(); ++g) {
            bool match = true;
            for (const auto& weights : noise_weights) {
                if (std::abs(diagonal_eigenvalue(support[i], weights) -
                             diagonal_eigenvalue(group_representative[g], weights)) > group_tol) {
                    match = false;
                    break;
                }
            }
            if (match) {
                group_of[i] = static_cast<int>(g);
                break;
            }
        }
        if (group_of[i] < 0) {
            group_of[i] = static_cast<int>(group_representative.size());
            group_representative.push_back(support[i]);
        }
    }

    // Twirled density matrix restricted to the support: entries survive only
    // inside a common eigenvalue group. The generator is diagonal, so it
    // preserves the support and the restriction loses nothing.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(span, span);
    for (int i = 0; i < span; ++i) {
        for (int j = 0; j < span; ++j) {
            if (group_of[static_cast<std::size_t>(i)] == group_of[static_cast<std::size_t>(j)]) {
                rho(i, j) = psi[static_cast<Eigen::Index>(support[static_cast<std::size_t>(i)])] *
                            std::conj(psi[static_cast<Eigen::Index>(
                                support[static_cast<std::size_t>(j)])]);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    if (solver.info() != Eigen::Success) {
        throw Error("eigendecomposition of the twirled state failed");
    }

    std::vector<int> positive;
    for (int i = 0; i < span; ++i) {
        if (solver.eigenvalues()[i] > kZeroEigenvalue) {
            positive.push_back(i);
        }
    }
    Eigen::VectorXd diag(span);
    for (int i = 0; i < span; ++i) {
        diag[i] = diagonal_eigenvalue(support[static_cast<std::size_t>(i)], signal_weights);
    }

    // General mixed-state formula: 2 (p_a - p_b)^2 / (p_a + p_b) |<a|G|b>|^2
    // over ordered eigenpairs, with the rank-deficient part folded in through
    // ||G a||^2.
    const int m = static_cast<int>(positive.size());
    Eigen::MatrixXcd overlaps(m, m);
    Eigen::VectorXd g_norms(m);
    for (int a = 0; a < m; ++a) {
        const Eigen::VectorXcd ga =
            (diag.array().cast<Complex>() * solver.eigenvectors().col(positive[a]).array())
                .matrix();
        g_norms[a] = ga.squaredNorm();
        for (int b = 0; b < m; ++b) {
            overlaps(a, b) = solver.eigenvectors().col(positive[b]).dot(ga);
        }
    }
    double twirled = 0.0;
    for (int a = 0; a < m; ++a) {
        const double pa = solver.eigenvalues()[positive[a]];
        double in_span = 0.0;
        for (int b = 0; b < m; ++b) {
            const double pb = solver.eigenvalues()[positive[b]];
            in_span += std::norm(overlaps(a, b));
            if (a != b) {
                twirled += 2.0 * (pa - pb) * (pa - pb) / (pa + pb) * std::norm(overlaps(a, b));
            }
        }
        twirled += 4.0 * pa * std::max(0.0, g_norms[a] - in_span);
    }
    result.twirled_qfi = twirled;
    return result;
}

}  // namespace qsense
