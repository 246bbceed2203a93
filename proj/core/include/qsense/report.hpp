#ifndef QSENSE_REPORT_HPP
#define QSENSE_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

namespace qsense {

/// One machine-readable result row shared by the design and simulate
/// commands. Optional fields stay empty in the CSV when not applicable.
struct ReportRow {
    std::string scenario;
    std::string command;
    int sites = 0;
    int qubits = 0;
    int signal_index = 0;
    double qfi_optimal = 0.0;
    double qfi_noiseless = 0.0;
    double max_residual = 0.0;
    std::string block_census;  // "dim:count" pairs joined by ';'
    std::optional<double> advantage_ratio;
};

/// One row of the advantage command's CSV.
struct AdvantageRow {
    int sites = 0;
    double optimal_qfi = 0.0;
    double max_product_qfi = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
};

/// Fixed column headers, documented in the README.
std::string report_csv_header();
std::string advantage_csv_header();

/// Serialize one row (no trailing newline). Numbers use shortest
/// round-trippable formatting, so output is byte-stable across runs.
std::string to_csv(const ReportRow& row);
std::string to_csv(const AdvantageRow& row);

/// Format a double with enough digits to round-trip.
std::string format_double(double value);

}  // namespace qsense

#endif
