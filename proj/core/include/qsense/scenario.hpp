#ifndef QSENSE_SCENARIO_HPP
#define QSENSE_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "qsense/field_model.hpp"
#include "qsense/probe_designer.hpp"

namespace qsense {

/// Tolerances a scenario may override. Defaults: 1e-9 constraint residual,
/// 1e-9 twirl grouping, 1e-12 normalization, 1e-9 relative rank threshold.
struct Tolerances {
    double constraint = 1e-9;
    double twirl_grouping = 1e-9;
    double normalization = 1e-12;
    double rank = 1e-9;

    bool operator==(const Tolerances&) const = default;
};

/// A declarative scenario file: function set, sensors, and the signal/noise
/// partition. Parsed from JSON with a strict schema (unknown keys rejected).
struct Scenario {
    static constexpr int kSchemaVersion = 1;

    std::string name;
    GeneratingFunctionSet functions;
    SensorArray sensors;
    int signal_index = 0;
    std::vector<int> noise_indices;
    bool integer_mode = false;
    Tolerances tolerances;

    /// Sample the coefficient matrix and bundle everything into a design
    /// problem (validates the index partition).
    DesignProblem problem() const;
};

/// Parse a scenario from JSON text. Throws ParseError on malformed JSON,
/// schema violations, or unknown keys; domain validation errors propagate
/// as their own types.
Scenario parse_scenario(const std::string& json_text);

/// Serialize a scenario back to JSON (stable key order, round-trips through
/// parse_scenario).
std::string serialize_scenario(const Scenario& scenario);

/// Load/store helpers. load_scenario throws ParseError on I/O failure.
Scenario load_scenario(const std::string& path);
void write_scenario(const Scenario& scenario, const std::string& path);

/// Structural equality, used by round-trip tests.
bool scenarios_equal(const Scenario& a, const Scenario& b);

/// The three bundled example scenarios.
Scenario example_taylor_scenario();
Scenario example_fourier_scenario();
Scenario example_pointsource_scenario();

/// Write taylor.json, fourier.json and pointsource.json into `directory`
/// (created if missing). Returns the written paths.
std::vector<std::string> write_example_scenarios(const std::string& directory);

}  // namespace qsense

#endif
