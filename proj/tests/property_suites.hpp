#ifndef QSENSE_TESTS_PROPERTY_SUITES_HPP
#define QSENSE_TESTS_PROPERTY_SUITES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qsense/branch_sim.hpp"
#include "qsense/probe_designer.hpp"
#include "testutil.hpp"

// Randomized invariant suites shared by the unit tests and the acceptance
// binary. Every suite uses its own fixed seed and reports how many instances
// it exercised plus the first few failures.

namespace qsense::test {

struct SuiteResult {
    std::string name;
    int instances = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }

    void fail(int instance, const std::string& what) {
        if (failures.size() < 5) {
            failures.push_back("instance " + std::to_string(instance) + ": " + what);
        } else if (failures.size() == 5) {
            failures.push_back("...");
        }
    }
};

constexpr int kSuiteInstances = 200;

/// evolve, product_state, twirl, and reassemble all preserve total
/// probability to 1e-12.
inline SuiteResult normalization_suite() {
    SuiteResult result{"normalization preservation", 0, {}};
    Rng rng(0x6e0a'11d4'585b'90c3ULL);
    for (int i = 0; i < kSuiteInstances; ++i) {
        ++result.instances;
        const int sites = rng.integer(2, 5);
        BranchState state;
        if (i % 2 == 0) {
            state = random_branch_state(rng, sites, rng.integer(2, 6));
        } else {
            std::vector<SiteAmplitude> amps;
            for (int j = 0; j < sites; ++j) {
                const double theta = rng.unit() * 3.0;
                const double phi = rng.symmetric(3.0);
                amps.push_back({Complex(std::cos(theta), 0.0),
                                Complex(std::sin(theta) * std::cos(phi),
                                        std::sin(theta) * std::sin(phi)),
                                double(rng.integer(1, 3)), double(-rng.integer(1, 3))});
            }
            state = product_state(amps);
            if (std::abs(state.norm_squared() - 1.0) > 1e-12) {
                result.fail(i, "product state norm drift");
                continue;
            }
        }
        const int functions = rng.integer(1, 4);
        const CoefficientMatrix coeffs{random_matrix(rng, functions, sites, 2.0)};
        const BranchState evolved =
            evolve(state, EvolutionParams{random_vector(rng, functions, 3.0)}, coeffs);
        if (std::abs(evolved.norm_squared() - 1.0) > 1e-12) {
            result.fail(i, "evolve norm drift");
            continue;
        }
        std::vector<int> noise;
        for (int k = 0; k < functions; ++k) {
            if (rng.coin()) {
                noise.push_back(k);
            }
        }
        const BlockDecomposition blocks = twirl(evolved, coeffs, noise);
        if (std::abs(blocks.total_weight() - 1.0) > 1e-12) {
            result.fail(i, "twirl weight drift");
            continue;
        }
        if (std::abs(reassemble(blocks).norm_squared() - 1.0) > 1e-12) {
            result.fail(i, "reassemble norm drift");
        }
    }
    return result;
}

/// Twirling a twirled state changes nothing: same blocks, weights, and QFI.
inline SuiteResult twirl_idempotence_suite() {
    SuiteResult result{"twirl idempotence", 0, {}};
    Rng rng(0x2f8c'7aa1'04d9'e6b5ULL);
    while (result.instances < kSuiteInstances) {
        const int i = result.instances;
        const int sites = rng.integer(2, 5);
        const int functions = rng.integer(1, 4);
        // Half-integer eigenvalue grids make coinciding noise tuples common,
        // so the suite exercises blocks of every dimension.
        std::vector<Branch> raw;
        const int branches = rng.integer(2, 6);
        for (int b = 0; b < branches; ++b) {
            Vector eig(sites);
            for (int j = 0; j < sites; ++j) {
                eig[j] = 0.5 * rng.integer(-2, 2);
            }
            raw.push_back({Complex(rng.symmetric(1.0), rng.symmetric(1.0)), std::move(eig)});
        }
        double norm = 0.0;
        for (const Branch& b : raw) {
            norm += std::norm(b.amplitude);
        }
        if (norm < 1e-12) {
            continue;
        }
        for (Branch& b : raw) {
            b.amplitude /= std::sqrt(norm);
        }
        BranchState state;
        try {
            state = BranchState::from_branches(std::move(raw));
        } catch (const NotNormalized&) {
            continue;  // merged amplitudes cancelled; not a valid instance
        }
        ++result.instances;
        Matrix values(functions, sites);
        for (int k = 0; k < functions; ++k) {
            for (int j = 0; j < sites; ++j) {
                values(k, j) = static_cast<double>(rng.integer(-1, 1));
            }
        }
        const CoefficientMatrix coeffs{values};
        std::vector<int> noise;
        for (int k = 0; k < functions; ++k) {
            if (rng.coin()) {
                noise.push_back(k);
            }
        }
        const BlockDecomposition once = twirl(state, coeffs, noise);
        const BlockDecomposition twice = twirl(reassemble(once), coeffs, noise);
        if (once.blocks.size() != twice.blocks.size()) {
            result.fail(i, "block count changed");
            continue;
        }
        bool ok = true;
        for (std::size_t b = 0; b < once.blocks.size(); ++b) {
            ok = ok && std::abs(once.blocks[b].weight - twice.blocks[b].weight) <= 1e-12;
            // The label tuple is empty when no rows are marked as noise.
            const Vector delta =
                once.blocks[b].noise_eigenvalues - twice.blocks[b].noise_eigenvalues;
            ok = ok && (delta.size() == 0 || delta.cwiseAbs().maxCoeff() <= 1e-12);
        }
        if (!ok) {
            result.fail(i, "weights or labels changed");
            continue;
        }
        const Vector g = coeffs.row(rng.integer(0, functions - 1));
        if (!close(qfi_mixed(once, g), qfi_mixed(twice, g), 1e-12)) {
            result.fail(i, "QFI changed");
        }
    }
    return result;
}

/// Twirling never increases the QFI (data-processing inequality).
inline SuiteResult data_processing_suite() {
    SuiteResult result{"data-processing inequality", 0, {}};
    Rng rng(0x91d5'3b0e'c47f'2a68ULL);
    for (int i = 0; i < kSuiteInstances; ++i) {
        ++result.instances;
        const int sites = rng.integer(2, 5);
        const int functions = rng.integer(2, 4);
        const BranchState state = random_branch_state(rng, sites, rng.integer(2, 6));
        const CoefficientMatrix coeffs{random_matrix(rng, functions, sites, 2.0)};
        const int signal = rng.integer(0, functions - 1);
        std::vector<int> noise;
        for (int k = 0; k < functions; ++k) {
            if (k != signal && rng.coin()) {
                noise.push_back(k);
            }
        }
        const Vector g = coeffs.row(signal);
        const double pure = qfi_pure(state, g);
        const double mixed = qfi_mixed(twirl(state, coeffs, noise), g);
        if (mixed > pure + 1e-9 * std::max(1.0, pure)) {
            result.fail(i, "twirl increased QFI from " + std::to_string(pure) + " to " +
                               std::to_string(mixed));
        }
    }
    return result;
}

struct RandomProblem {
    Matrix rows;
    int signal_index = 0;
    std::vector<int> noise_indices;
    Vector box;
};

inline RandomProblem random_lp_problem(Rng& rng) {
    RandomProblem p;
    const int sites = rng.integer(2, 6);
    const int noise_count = rng.integer(0, std::max(0, sites - 2));
    p.rows = random_matrix(rng, noise_count + 1, sites, 1.5);
    p.signal_index = 0;
    for (int k = 1; k <= noise_count; ++k) {
        p.noise_indices.push_back(k);
    }
    p.box = Vector(sites);
    for (int j = 0; j < sites; ++j) {
        p.box[j] = 0.5 + 2.5 * rng.unit();
    }
    return p;
}

/// Negating the signal row negates the optimal vertex and keeps the QFI.
inline SuiteResult lp_inversion_suite() {
    SuiteResult result{"LP inversion symmetry", 0, {}};
    Rng rng(0x5be2'9c17'd830'46faULL);
    while (result.instances < kSuiteInstances) {
        RandomProblem p = random_lp_problem(rng);
        try {
            const ProbePair plus = optimal_probe(
                tabulated_problem(p.rows, p.signal_index, p.noise_indices, p.box));
            Matrix flipped = p.rows;
            flipped.row(p.signal_index) *= -1.0;
            const ProbePair minus = optimal_probe(
                tabulated_problem(flipped, p.signal_index, p.noise_indices, p.box));
            ++result.instances;
            if (!close(plus.qfi, minus.qfi, 1e-9)) {
                result.fail(result.instances, "QFI not invariant under signal negation");
                continue;
            }
            if ((plus.s + minus.s).cwiseAbs().maxCoeff() >
                1e-6 * std::max(1.0, plus.s.cwiseAbs().maxCoeff())) {
                result.fail(result.instances, "optimal vertex did not negate");
            }
        } catch (const SignalIndistinguishable&) {
        } catch (const DegenerateOptimum&) {
        }
    }
    return result;
}

/// Rescaling noise rows by nonzero factors, or appending a redundant noise
/// row, changes neither the decomposition nor the optimal probe.
inline SuiteResult noise_rescaling_suite() {
    SuiteResult result{"noise-row rescaling invariance", 0, {}};
    Rng rng(0xa4c6'08f3'71bd'5e29ULL);
    while (result.instances < kSuiteInstances) {
        RandomProblem p = random_lp_problem(rng);
        if (p.noise_indices.empty()) {
            continue;
        }
        try {
            const DesignProblem base =
                tabulated_problem(p.rows, p.signal_index, p.noise_indices, p.box);
            const PerpDecomposition base_perp = perp_decompose(base);
            const ProbePair base_pair = optimal_probe(base);

            Matrix modified = p.rows;
            std::vector<int> noise = p.noise_indices;
            if (result.instances % 2 == 0) {
                for (int k : p.noise_indices) {
                    double factor = rng.symmetric(5.0);
                    if (std::abs(factor) < 0.2) {
                        factor = 0.2;
                    }
                    modified.row(k) *= factor;
                }
            } else {
                const int copied = p.noise_indices[static_cast<std::size_t>(
                    rng.integer(0, static_cast<int>(p.noise_indices.size()) - 1))];
                modified.conservativeResize(modified.rows() + 1, Eigen::NoChange);
                modified.row(modified.rows() - 1) = 1.7 * p.rows.row(copied);
                noise.push_back(static_cast<int>(modified.rows()) - 1);
            }
            const DesignProblem alt =
                tabulated_problem(modified, p.signal_index, noise, p.box);
            const PerpDecomposition alt_perp = perp_decompose(alt);
            const ProbePair alt_pair = optimal_probe(alt);
            ++result.instances;
            if ((base_perp.perp - alt_perp.perp).cwiseAbs().maxCoeff() >
                1e-9 * std::max(1.0, base_perp.perp.cwiseAbs().maxCoeff())) {
                result.fail(result.instances, "f_perp changed");
                continue;
            }
            if (!close(base_pair.qfi, alt_pair.qfi, 1e-9)) {
                result.fail(result.instances, "QFI changed");
                continue;
            }
            if ((base_pair.s - alt_pair.s).cwiseAbs().maxCoeff() >
                1e-6 * std::max(1.0, base_pair.s.cwiseAbs().maxCoeff())) {
                result.fail(result.instances, "optimal vertex changed");
            }
        } catch (const SignalIndistinguishable&) {
        } catch (const DegenerateOptimum&) {
        }
    }
    return result;
}

inline std::vector<SuiteResult> run_all_property_suites() {
    return {normalization_suite(), twirl_idempotence_suite(), data_processing_suite(),
            lp_inversion_suite(), noise_rescaling_suite()};
}

}  // namespace qsense::test

#endif
