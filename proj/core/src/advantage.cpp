#include "qsense/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qsense {

namespace {

constexpr std::uint64_t kSweepSeed = 0x71b3'52fD'9e02'4c11ULL;

double unit_double(std::mt19937_64& rng) {
    // Top 53 bits give a uniform double in [0, 1); the standard library
    // distributions are not bit-stable across implementations.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// The alternating +-1 pattern starting at -1, the scenario's signal shape.
Vector alternating_pattern(int sites) {
    Vector s(sites);
    for (int j = 0; j < sites; ++j) {
        s[j] = (j % 2 == 0) ? -1.0 : 1.0;
    }
    return s;
}

/// Twirled QFI of the product state with per-site angles, using the closed
/// form for this scenario: every block except {s*, -s*} is one-dimensional
/// and contributes nothing, and that block carries probabilities
/// p1 = prod cos^2, p2 = prod sin^2 with eigenvalue gap 2J, giving
/// 16 J^2 p1 p2 / (p1 + p2). product_candidate_qfi recomputes this through
/// the generic pipeline; the sweep checks the two paths against each other.
double closed_form_qfi(const std::vector<double>& angles) {
    double p1 = 1.0;
    double p2 = 1.0;
    for (double angle : angles) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        p1 *= c * c;
        p2 *= s * s;
    }
    const double total = p1 + p2;
    if (total == 0.0) {
        return 0.0;
    }
    const double sites = static_cast<double>(angles.size());
    return 16.0 * sites * sites * p1 * p2 / total;
}

}  // namespace

DesignProblem AlternatingScenario::problem(bool integer_mode) const {
    return DesignProblem(coefficients, signal_index, noise_indices,
                         Vector::Ones(sites), integer_mode);
}

AlternatingScenario build_alternating(int sites) {
    if (sites < 2) {
        throw Error("the alternating scenario needs at least two sites");
    }
    if (sites % 2 != 0) {
        throw OddSiteCount("the alternating scenario needs an even number of sites");
    }

    Matrix values = Matrix::Zero(sites, sites);
    values.row(0) = alternating_pattern(sites).transpose();
    for (int k = 1; k < sites; ++k) {
        // Noise generator k couples sites k and k+1 (1-indexed).
        values(k, k - 1) = 1.0;
        values(k, k) = 1.0;
    }

    std::vector<Vector> positions;
    positions.reserve(static_cast<std::size_t>(sites));
    for (int j = 1; j <= sites; ++j) {
        Vector r(1);
        r[0] = static_cast<double>(j) / sites;
        positions.push_back(std::move(r));
    }

    std::vector<int> noise_indices;
    for (int k = 1; k < sites; ++k) {
        noise_indices.push_back(k);
    }
    return AlternatingScenario{sites, CoefficientMatrix{std::move(values)},
                               SensorArray(std::move(positions), std::vector<int>(sites, 1)), 0,
                               std::move(noise_indices)};
}

std::int64_t BlockCensus::total_states() const {
    std::int64_t total = 0;
    for (const auto& [dimension, count] : dimension_counts) {
        total += dimension * count;
    }
    return total;
}

BlockCensus enumerate_blocks(const AlternatingScenario& scenario) {
    const int sites = scenario.sites;
    if (sites > 19) {
        throw TooLarge("block enumeration is capped at 10^6 states");
    }
    const std::size_t count = std::size_t{1} << sites;

    // Noise eigenvalues of these patterns are exact small integers, so exact
    // tuple keys group correctly.
    std::map<std::vector<double>, std::vector<Vector>> groups;
    for (std::size_t mask = 0; mask < count; ++mask) {
        Vector s(sites);
        for (int j = 0; j < sites; ++j) {
            s[j] = (mask >> j & 1U) ? 1.0 : -1.0;
        }
        std::vector<double> tuple;
        tuple.reserve(scenario.noise_indices.size());
        for (int k : scenario.noise_indices) {
            tuple.push_back(scenario.coefficients.row(k).dot(s));
        }
        groups[std::move(tuple)].push_back(std::move(s));
    }

    BlockCensus census;
    for (auto& [tuple, members] : groups) {
        const int dimension = static_cast<int>(members.size());
        ++census.dimension_counts[dimension];
        if (dimension >= 2) {
            census.nontrivial_blocks.push_back(std::move(members));
        }
    }
    return census;
}

double product_candidate_qfi(const AlternatingScenario& scenario,
                             const std::vector<double>& angles) {
    if (static_cast<int>(angles.size()) != scenario.sites) {
        throw DimensionMismatch("one amplitude angle per site is required");
    }
    const Vector pattern = alternating_pattern(scenario.sites);
    std::vector<SiteAmplitude> sites;
    sites.reserve(angles.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        SiteAmplitude site;
        site.a = Complex(std::cos(angles[j]), 0.0);
        site.b = Complex(std::sin(angles[j]), 0.0);
        site.high = pattern[static_cast<Eigen::Index>(j)];
        site.low = -site.high;
        sites.push_back(site);
    }
    const BranchState state = product_state(sites);
    const BlockDecomposition blocks =
        twirl(state, scenario.coefficients, scenario.noise_indices);
    return qfi_mixed(blocks, scenario.coefficients.row(scenario.signal_index));
}

AdvantageResult product_advantage_sweep(const AlternatingScenario& scenario, int num_samples) {
    if (scenario.sites > 12) {
        throw TooLarge("the advantage sweep is capped at 12 sites");
    }
    if (num_samples < 0) {
        throw Error("sample count must be nonnegative");
    }

    const std::size_t site_count = static_cast<std::size_t>(scenario.sites);
    double best_value = -1.0;
    std::vector<double> best_angles;
    const auto consider = [&](const std::vector<double>& angles) {
        const double value = closed_form_qfi(angles);
        if (value > best_value ||
            (value == best_value &&
             std::lexicographical_compare(angles.begin(), angles.end(), best_angles.begin(),
                                          best_angles.end()))) {
            best_value = value;
            best_angles = angles;
        }
    };

    // The analytic optimum and the degenerate single-branch state are always
    // in the candidate set.
    consider(std::vector<double>(site_count, std::numbers::pi / 4.0));
    consider(std::vector<double>(site_count, 0.0));

    if (scenario.sites <= 4) {
        constexpr int kGridPoints = 32;
        std::vector<int> index(site_count, 0);
        std::vector<double> angles(site_count);
        for (;;) {
            for (std::size_t j = 0; j < site_count; ++j) {
                angles[j] = (std::numbers::pi / 2.0) * index[j] / (kGridPoints - 1);
            }
            consider(angles);
            std::size_t j = site_count;
            while (j > 0 && ++index[j - 1] == kGridPoints) {
                index[j - 1] = 0;
                --j;
            }
            if (j == 0) {
                break;
            }
        }
    } else {
        std::mt19937_64 rng(kSweepSeed);
        std::vector<double> angles(site_count);
        for (int sample = 0; sample < num_samples; ++sample) {
            for (std::size_t j = 0; j < site_count; ++j) {
                angles[j] = (std::numbers::pi / 2.0) * unit_double(rng);
            }
            consider(angles);
        }
    }

    // The winner goes back through the generic pipeline; a disagreement
    // would mean the closed form above does not match the simulation.
    const double pipeline_value = product_candidate_qfi(scenario, best_angles);
    if (std::abs(pipeline_value - best_value) >
        1e-9 * std::max(1.0, std::abs(best_value))) {
        throw Error("sweep shortcut disagrees with the branch pipeline");
    }

    AdvantageResult result;
    result.optimal_qfi = optimal_probe_integer(scenario.problem(true)).qfi;
    result.max_product_qfi = pipeline_value;
    result.ratio = result.max_product_qfi / result.optimal_qfi;
    return result;
}

}  // namespace qsense
