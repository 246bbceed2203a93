#ifndef QSENSE_ADVANTAGE_HPP
#define QSENSE_ADVANTAGE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "qsense/branch_sim.hpp"
#include "qsense/field_model.hpp"
#include "qsense/probe_designer.hpp"

namespace qsense {

/// The equidistant single-qubit scenario with an alternating signal and
/// nearest-neighbor pair noise: sensors at j/J for j = 1..J (J even), signal
/// row (-1)^j starting at -1, and noise row k supported on sites k and k+1
/// for k = 1..J-1. Row 0 of the matrix is the signal.
struct AlternatingScenario {
    int sites = 0;
    CoefficientMatrix coefficients;
    SensorArray array;
    int signal_index = 0;
    std::vector<int> noise_indices;

    DesignProblem problem(bool integer_mode = true) const;
};

/// Build the scenario for an even number of sites (throws OddSiteCount).
AlternatingScenario build_alternating(int sites);

/// Grouping of all 2^J single-qubit eigenvalue patterns by their noise
/// eigenvalue tuples.
struct BlockCensus {
    /// block dimension -> number of blocks of that dimension
    std::map<int, std::int64_t> dimension_counts;
    /// members of every block with dimension >= 2, as +-1 vectors
    std::vector<std::vector<Vector>> nontrivial_blocks;

    std::int64_t total_states() const;
};

/// Enumerate all 2^J computational patterns (s_j = +-1) and group them by
/// noise eigenvalues. Requires 2^J <= 10^6 (TooLarge otherwise).
BlockCensus enumerate_blocks(const AlternatingScenario& scenario);

struct AdvantageResult {
    double optimal_qfi = 0.0;
    double max_product_qfi = 0.0;
    double ratio = 0.0;
};

/// Compare the optimal entangled probe against states with no entanglement
/// between sites. Product states superpose the two locally admissible
/// eigenvalues per site with nonnegative real amplitudes (cos t, sin t);
/// phases are irrelevant here because the twirl weights depend only on
/// |amplitude|^2 and each surviving block holds at most one relative phase,
/// which cancels in the variance. Candidate states are a 32-point grid per
/// site angle up to 4 sites, and `num_samples` fixed-seed random draws
/// beyond, always including the uniform-amplitude and single-branch states.
/// Every candidate is scored by the QFI of its twirled state.
AdvantageResult product_advantage_sweep(const AlternatingScenario& scenario, int num_samples);

/// Twirled QFI of one product-state candidate via the full branch pipeline
/// (product_state -> twirl -> qfi_mixed). `angles` holds one amplitude angle
/// per site. Used to cross-check the sweep's fast accumulation path.
double product_candidate_qfi(const AlternatingScenario& scenario, const std::vector<double>& angles);

}  // namespace qsense

#endif
