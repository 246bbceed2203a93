#ifndef QSENSE_BRANCH_SIM_HPP
#define QSENSE_BRANCH_SIM_HPP

#include <complex>
#include <vector>

#include "qsense/field_model.hpp"
#include "qsense/probe_designer.hpp"

namespace qsense {

using Complex = std::complex<double>;

/// One product-eigenstate component of a superposition: its amplitude and
/// the vector of per-site collective eigenvalues.
struct Branch {
    Complex amplitude;
    Vector eigenvalues;
};

/// A superposition of finitely many product eigenstates, each labeled by its
/// per-site eigenvalue vector. Branch vectors are kept pairwise distinct and
/// sorted; amplitudes of coinciding vectors are merged at construction.
class BranchState {
  public:
    BranchState() = default;

    /// Merge duplicate vectors, drop zero amplitudes, sort branches, and
    /// check sum |c|^2 = 1 within `norm_tol` (throws NotNormalized).
    static BranchState from_branches(std::vector<Branch> branches, double norm_tol = 1e-12);

    const std::vector<Branch>& branches() const { return branches_; }
    int branch_count() const { return static_cast<int>(branches_.size()); }
    int site_count() const;
    double norm_squared() const;

  private:
    std::vector<Branch> branches_;
};

/// Accumulated phases per generator row (signal strength times time; the two
/// factors never need to be separated).
struct EvolutionParams {
    Vector phases;
};

/// The mixed state left behind by worst-case dephasing of the noise
/// generators: an orthogonal mixture of pure states, one per distinct tuple
/// of noise eigenvalues.
struct Block {
    Vector noise_eigenvalues;  // one entry per noise row, in index order
    double weight = 0.0;
    BranchState state;  // renormalized restriction to this block
};

struct BlockDecomposition {
    std::vector<Block> blocks;

    double total_weight() const;
    /// Tr rho^2 of the mixture; each block state is pure, so this is the sum
    /// of squared weights.
    double purity() const;
};

/// Equal superposition of the pair's two eigenvalue vectors (a single branch
/// when they coincide).
BranchState probe_state(const ProbePair& pair);

/// Per-site two-level amplitudes: site state a|high> + b|low> where high/low
/// are that site's two effective eigenvalues being superposed.
struct SiteAmplitude {
    Complex a;
    Complex b;
    double high = 0.0;
    double low = 0.0;
};

/// Expand a tensor product of per-site two-level states into branches.
/// Site count is capped at 20; per-site amplitudes must be normalized within
/// 1e-9; high and low must differ at every site.
BranchState product_state(const std::vector<SiteAmplitude>& sites);

/// Unitary phase evolution: each branch picks up exp(i * sum_k phase_k *
/// (row_k . eigenvalues)). Branch vectors are untouched.
BranchState evolve(const BranchState& state, const EvolutionParams& params,
                   const CoefficientMatrix& coefficients);

/// Worst-case dephasing of the listed noise rows: group branches whose noise
/// eigenvalue tuples agree within `tol` (absolute, per component), weight
/// each group by its probability, and renormalize the group states.
BlockDecomposition twirl(const BranchState& state, const CoefficientMatrix& coefficients,
                         const std::vector<int>& noise_indices, double tol = 1e-9);

/// Flatten a decomposition back into one branch state with amplitudes scaled
/// by the square root of the block weights. Twirling the result reproduces
/// the decomposition.
BranchState reassemble(const BlockDecomposition& decomposition);

/// Quantum Fisher information 4*Var(G) of a pure state under the diagonal
/// generator G|s> = (weights . s)|s>.
double qfi_pure(const BranchState& state, const Vector& generator_weights);

/// Mixed-state quantum Fisher information of a block decomposition.
///
/// The general formula sums 2*(p_a - p_b)^2 / (p_a + p_b) * |<a|G|b>|^2 over
/// eigenpairs of the density matrix. Here the state is block-diagonal with
/// pure blocks and G maps each block into itself, so every cross-block
/// matrix element vanishes and each block contributes weight * qfi_pure of
/// its (single) unit eigenvector. That specialization is what this computes.
double qfi_mixed(const BlockDecomposition& decomposition, const Vector& generator_weights);

/// Classical Fisher information of the local-parity interference readout for
/// an equal two-branch probe. The outcome probabilities are
/// (1 +- cos(gap * phase))/2 with gap = signal_row . (s - r); the Fisher
/// information equals gap^2 wherever defined and extends to gap^2 at the
/// fringe extrema by continuity, saturating the probe's QFI.
double parity_fisher(const ProbePair& pair, const CoefficientMatrix& coefficients,
                     int signal_index, double phase);

}  // namespace qsense

#endif
