#ifndef QSENSE_PIPELINE_HPP
#define QSENSE_PIPELINE_HPP

#include <optional>
#include <string>

#include "qsense/advantage.hpp"
#include "qsense/branch_sim.hpp"
#include "qsense/report.hpp"
#include "qsense/scenario.hpp"

namespace qsense {

/// Everything the design command reports for one scenario.
struct DesignOutput {
    PerpDecomposition decomposition;
    ProbePair pair;
    ProbePair noiseless;
    double max_residual = 0.0;
    ReportRow row;
};

DesignOutput run_design(const Scenario& scenario);

/// Outcome of the qubit-level cross check inside the simulate command.
enum class OracleStatus { Agreed, Mismatch, Skipped };

struct SimulateOutput {
    ProbePair pair;
    double qfi_pure = 0.0;
    double qfi_twirled = 0.0;
    double purity = 0.0;
    double parity_information = 0.0;
    OracleStatus oracle_status = OracleStatus::Skipped;
    std::string oracle_detail;
    ReportRow row;
};

/// Design the probe, evolve it under the given phases, twirl the noise rows,
/// and cross-check against the statevector oracle when the instance is small
/// enough and every branch eigenvalue is qubit-realizable.
SimulateOutput run_simulate(const Scenario& scenario, const Vector& phases);

/// Census plus product-state sweep for one even site count.
AdvantageRow run_advantage(int sites, int num_samples);

}  // namespace qsense

#endif
