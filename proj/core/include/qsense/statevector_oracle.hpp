#ifndef QSENSE_STATEVECTOR_ORACLE_HPP
#define QSENSE_STATEVECTOR_ORACLE_HPP

#include <vector>

#include "qsense/branch_sim.hpp"

namespace qsense {

struct OracleResult {
    double qfi = 0.0;          // pure-state QFI after the phase evolution
    double twirled_qfi = 0.0;  // QFI of the explicitly twirled density matrix
};

/// Full qubit-level cross-check of the branch simulation.
///
/// Expands every branch into a computational basis state over sum(n_j)
/// qubits (site j contributes n_j qubits; eigenvalue s_j is realized by
/// (n_j+s_j)/2 qubits up), applies the diagonal phase evolution per qubit,
/// projects the density matrix onto the joint eigenspaces of the qubit-level
/// noise generators, and evaluates the quantum Fisher information from the
/// eigendecomposition of the projected density matrix.
///
/// Limits: at most 12 qubits in total (TooLarge); every branch eigenvalue
/// must be an integer of the same parity as the site's qubit count within
/// |s_j| <= n_j (NonIntegerEigenvalue).
OracleResult statevector_oracle(const BranchState& state, const std::vector<int>& qubit_counts,
                                const CoefficientMatrix& coefficients,
                                const EvolutionParams& params, int signal_index,
                                const std::vector<int>& noise_indices, double group_tol = 1e-9);

}  // namespace qsense

#endif
