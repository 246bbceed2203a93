#include "qsense/pipeline.hpp"

#include <cmath>
#include <map>

#include "qsense/statevector_oracle.hpp"

namespace qsense {

namespace {

std::string census_string(const BlockDecomposition& decomposition) {
    std::map<int, long long> counts;
    for (const Block& block : decomposition.blocks) {
        ++counts[block.state.branch_count()];
    }
    std::string out;
    for (const auto& [dimension, count] : counts) {
        if (!out.empty()) {
            out += ';';
        }
        out += std::to_string(dimension) + ':' + std::to_string(count);
    }
    return out;
}

ProbePair design_pair(const Scenario& scenario, const DesignProblem& problem) {
    return scenario.integer_mode ? optimal_probe_integer(problem) : optimal_probe(problem);
}

ReportRow base_row(const Scenario& scenario, const char* command) {
    ReportRow row;
    row.scenario = scenario.name;
    row.command = command;
    row.sites = scenario.sensors.site_count();
    row.qubits = scenario.sensors.total_qubits();
    row.signal_index = scenario.signal_index;
    return row;
}

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

DesignOutput run_design(const Scenario& scenario) {
    const DesignProblem problem = scenario.problem();

    DesignOutput out{perp_decompose(problem), design_pair(scenario, problem),
                     noiseless_optimum(problem), 0.0, base_row(scenario, "design")};
    out.max_residual = max_insensitivity_residual(problem, out.pair);

    const BlockDecomposition blocks =
        twirl(probe_state(out.pair), problem.coefficients(), problem.noise_indices(),
              scenario.tolerances.twirl_grouping);
    out.row.qfi_optimal = out.pair.qfi;
    out.row.qfi_noiseless = out.noiseless.qfi;
    out.row.max_residual = out.max_residual;
    out.row.block_census = census_string(blocks);
    return out;
}

SimulateOutput run_simulate(const Scenario& scenario, const Vector& phases) {
    const DesignProblem problem = scenario.problem();
    const CoefficientMatrix& coefficients = problem.coefficients();

    SimulateOutput out;
    out.pair = design_pair(scenario, problem);
    const BranchState probe = probe_state(out.pair);
    const EvolutionParams params{phases};
    const BranchState evolved = evolve(probe, params, coefficients);

    const Vector signal = problem.signal_row();
    out.qfi_pure = qfi_pure(evolved, signal);
    const BlockDecomposition blocks = twirl(evolved, coefficients, problem.noise_indices(),
                                            scenario.tolerances.twirl_grouping);
    out.qfi_twirled = qfi_mixed(blocks, signal);
    out.purity = blocks.purity();
    out.parity_information =
        parity_fisher(out.pair, coefficients, problem.signal_index(), phases[scenario.signal_index]);

    try {
        const OracleResult oracle =
            statevector_oracle(probe, scenario.sensors.qubit_counts(), coefficients, params,
                               problem.signal_index(), problem.noise_indices());
        const bool pure_ok = close(oracle.qfi, out.qfi_pure, 1e-9);
        const bool twirled_ok = close(oracle.twirled_qfi, out.qfi_twirled, 1e-9);
        if (pure_ok && twirled_ok) {
            out.oracle_status = OracleStatus::Agreed;
            out.oracle_detail = "statevector oracle agrees (pure " +
                                format_double(oracle.qfi) + ", twirled " +
                                format_double(oracle.twirled_qfi) + ")";
        } else {
            out.oracle_status = OracleStatus::Mismatch;
            out.oracle_detail = "statevector oracle disagrees: pure " +
                                format_double(oracle.qfi) + " vs " + format_double(out.qfi_pure) +
                                ", twirled " + format_double(oracle.twirled_qfi) + " vs " +
                                format_double(out.qfi_twirled);
        }
    } catch (const TooLarge& e) {
        out.oracle_status = OracleStatus::Skipped;
        out.oracle_detail = std::string("statevector oracle skipped: ") + e.what();
    } catch (const NonIntegerEigenvalue& e) {
        out.oracle_status = OracleStatus::Skipped;
        out.oracle_detail = std::string("statevector oracle skipped: ") + e.what();
    }

    out.row = base_row(scenario, "simulate");
    out.row.qfi_optimal = out.pair.qfi;
    out.row.qfi_noiseless = noiseless_optimum(problem).qfi;
    out.row.max_residual = max_insensitivity_residual(problem, out.pair);
    out.row.block_census = census_string(blocks);
    return out;
}

AdvantageRow run_advantage(int sites, int num_samples) {
    const AlternatingScenario scenario = build_alternating(sites);
    const AdvantageResult result = product_advantage_sweep(scenario, num_samples);

    AdvantageRow row;
    row.sites = sites;
    row.optimal_qfi = result.optimal_qfi;
    row.max_product_qfi = result.max_product_qfi;
    row.ratio = result.ratio;
    row.bound = std::ldexp(1.0, 1 - sites);
    return row;
}

}  // namespace qsense
