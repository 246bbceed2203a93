#include "qsense/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qsense {

namespace {

/// Quote a field only when it would break the row.
std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        return "0";  // fold -0
    }
    char buffer[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) {
            break;
        }
    }
    return buffer;
}

std::string report_csv_header() {
    return "scenario,command,sites,qubits,signal_index,qfi_optimal,qfi_noiseless,"
           "max_residual,block_census,advantage_ratio";
}

std::string advantage_csv_header() {
    return "sites,optimal_qfi,max_product_qfi,ratio,bound";
}

std::string to_csv(const ReportRow& row) {
    std::string out = csv_field(row.scenario);
    out += ',';
    out += csv_field(row.command);
    out += ',';
    out += std::to_string(row.sites);
    out += ',';
    out += std::to_string(row.qubits);
    out += ',';
    out += std::to_string(row.signal_index);
    out += ',';
    out += format_double(row.qfi_optimal);
    out += ',';
    out += format_double(row.qfi_noiseless);
    out += ',';
    out += format_double(row.max_residual);
    out += ',';
    out += csv_field(row.block_census);
    out += ',';
    if (row.advantage_ratio) {
        out += format_double(*row.advantage_ratio);
    }
    return out;
}

std::string to_csv(const AdvantageRow& row) {
    std::string out = std::to_string(row.sites);
    out += ',';
    out += format_double(row.optimal_qfi);
    out += ',';
    out += format_double(row.max_product_qfi);
    out += ',';
    out += format_double(row.ratio);
    out += ',';
    out += format_double(row.bound);
    return out;
}

}  // namespace qsense
