#include "qsense/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qsense {

namespace {

using Json = nlohmann::ordered_json;

void require_keys(const Json& object, const char* where,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ParseError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

const Json& require(const Json& object, const char* where, const char* key) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw ParseError(std::string("missing key '") + key + "' in " + where);
    }
    return *it;
}

double as_number(const Json& value, const char* what) {
    if (!value.is_number()) {
        throw ParseError(std::string(what) + " must be a number");
    }
    return value.get<double>();
}

int as_integer(const Json& value, const char* what) {
    if (!value.is_number_integer()) {
        throw ParseError(std::string(what) + " must be an integer");
    }
    return value.get<int>();
}

bool as_boolean(const Json& value, const char* what) {
    if (!value.is_boolean()) {
        throw ParseError(std::string(what) + " must be true or false");
    }
    return value.get<bool>();
}

std::string as_string(const Json& value, const char* what) {
    if (!value.is_string()) {
        throw ParseError(std::string(what) + " must be a string");
    }
    return value.get<std::string>();
}

Vector as_vector(const Json& value, const char* what) {
    if (!value.is_array() || value.empty()) {
        throw ParseError(std::string(what) + " must be a nonempty array of numbers");
    }
    Vector out(static_cast<Eigen::Index>(value.size()));
    Eigen::Index i = 0;
    for (const auto& entry : value) {
        out[i++] = as_number(entry, what);
    }
    return out;
}

GeneratingFunctionSet parse_functions(const Json& node) {
    if (!node.is_object()) {
        throw ParseError("'functions' must be an object");
    }
    const std::string kind = as_string(require(node, "functions", "kind"), "functions.kind");
    if (kind == "taylor" || kind == "fourier_sine") {
        require_keys(node, "functions", {"kind", "count", "length_scale"});
        const int count = as_integer(require(node, "functions", "count"), "functions.count");
        const double scale =
            as_number(require(node, "functions", "length_scale"), "functions.length_scale");
        return kind == "taylor" ? GeneratingFunctionSet::taylor(count, scale)
                                : GeneratingFunctionSet::fourier_sine(count, scale);
    }
    if (kind == "point_sources") {
        require_keys(node, "functions", {"kind", "exponent", "sources"});
        const double exponent =
            as_number(require(node, "functions", "exponent"), "functions.exponent");
        const Json& sources = require(node, "functions", "sources");
        if (!sources.is_array()) {
            throw ParseError("functions.sources must be an array");
        }
        std::vector<PointSource> parsed;
        for (const auto& source : sources) {
            if (!source.is_object()) {
                throw ParseError("each source must be an object");
            }
            require_keys(source, "a source", {"position", "strength"});
            PointSource ps;
            ps.position = as_vector(require(source, "a source", "position"), "source.position");
            ps.strength = as_number(require(source, "a source", "strength"), "source.strength");
            parsed.push_back(std::move(ps));
        }
        return GeneratingFunctionSet::point_sources(std::move(parsed), exponent);
    }
    if (kind == "tabulated") {
        require_keys(node, "functions", {"kind", "values"});
        const Json& rows = require(node, "functions", "values");
        if (!rows.is_array() || rows.empty()) {
            throw ParseError("functions.values must be a nonempty array of rows");
        }
        Matrix values;
        Eigen::Index row_index = 0;
        for (const auto& row : rows) {
            const Vector parsed = as_vector(row, "functions.values row");
            if (row_index == 0) {
                values.resize(static_cast<Eigen::Index>(rows.size()), parsed.size());
            } else if (parsed.size() != values.cols()) {
                throw ParseError("functions.values rows must have equal length");
            }
            values.row(row_index++) = parsed.transpose();
        }
        return GeneratingFunctionSet::tabulated(std::move(values));
    }
    throw ParseError("unknown function kind '" + kind + "'");
}

SensorArray parse_sensors(const Json& node) {
    if (!node.is_object()) {
        throw ParseError("'sensors' must be an object");
    }
    require_keys(node, "sensors", {"positions", "qubit_counts"});
    const Json& positions = require(node, "sensors", "positions");
    const Json& counts = require(node, "sensors", "qubit_counts");
    if (!positions.is_array() || !counts.is_array()) {
        throw ParseError("sensors.positions and sensors.qubit_counts must be arrays");
    }
    std::vector<Vector> parsed_positions;
    for (const auto& position : positions) {
        parsed_positions.push_back(as_vector(position, "a sensor position"));
    }
    std::vector<int> parsed_counts;
    for (const auto& count : counts) {
        parsed_counts.push_back(as_integer(count, "a qubit count"));
    }
    return SensorArray(std::move(parsed_positions), std::move(parsed_counts));
}

Tolerances parse_tolerances(const Json& node) {
    if (!node.is_object()) {
        throw ParseError("'tolerances' must be an object");
    }
    require_keys(node, "tolerances", {"constraint", "twirl_grouping", "normalization", "rank"});
    Tolerances tolerances;
    if (node.contains("constraint")) {
        tolerances.constraint = as_number(node["constraint"], "tolerances.constraint");
    }
    if (node.contains("twirl_grouping")) {
        tolerances.twirl_grouping = as_number(node["twirl_grouping"], "tolerances.twirl_grouping");
    }
    if (node.contains("normalization")) {
        tolerances.normalization = as_number(node["normalization"], "tolerances.normalization");
    }
    if (node.contains("rank")) {
        tolerances.rank = as_number(node["rank"], "tolerances.rank");
    }
    return tolerances;
}

Json functions_to_json(const GeneratingFunctionSet& functions) {
    Json node;
    if (const auto* taylor = std::get_if<TaylorSeries>(&functions.kind())) {
        node["kind"] = "taylor";
        node["count"] = taylor->count;
        node["length_scale"] = taylor->length_scale;
    } else if (const auto* fourier = std::get_if<FourierSineSeries>(&functions.kind())) {
        node["kind"] = "fourier_sine";
        node["count"] = fourier->count;
        node["length_scale"] = fourier->length_scale;
    } else if (const auto* points = std::get_if<PointSourceSet>(&functions.kind())) {
        node["kind"] = "point_sources";
        node["exponent"] = points->exponent;
        node["sources"] = Json::array();
        for (const PointSource& source : points->sources) {
            Json entry;
            entry["position"] = std::vector<double>(
                source.position.data(), source.position.data() + source.position.size());
            entry["strength"] = source.strength;
            node["sources"].push_back(std::move(entry));
        }
    } else {
        const auto& values = std::get<TabulatedValues>(functions.kind()).values;
        node["kind"] = "tabulated";
        node["values"] = Json::array();
        for (Eigen::Index k = 0; k < values.rows(); ++k) {
            node["values"].push_back(
                std::vector<double>(values.row(k).begin(), values.row(k).end()));
        }
    }
    return node;
}

}  // namespace

DesignProblem Scenario::problem() const {
    return DesignProblem(sample_coefficients(functions, sensors), signal_index, noise_indices,
                         sensors.box_bounds(), integer_mode);
}

Scenario parse_scenario(const std::string& json_text) {
    Json document;
    try {
        document = Json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    if (!document.is_object()) {
        throw ParseError("a scenario must be a JSON object");
    }
    require_keys(document, "the scenario",
                 {"schema_version", "name", "functions", "sensors", "signal_index",
                  "noise_indices", "integer_mode", "tolerances"});
    const int version =
        as_integer(require(document, "the scenario", "schema_version"), "schema_version");
    if (version != Scenario::kSchemaVersion) {
        throw ParseError("unsupported schema_version " + std::to_string(version));
    }

    Scenario scenario{as_string(require(document, "the scenario", "name"), "name"),
                      parse_functions(require(document, "the scenario", "functions")),
                      parse_sensors(require(document, "the scenario", "sensors")),
                      0,
                      {},
                      false,
                      Tolerances{}};
    scenario.signal_index =
        as_integer(require(document, "the scenario", "signal_index"), "signal_index");
    const Json& noise = require(document, "the scenario", "noise_indices");
    if (!noise.is_array()) {
        throw ParseError("noise_indices must be an array");
    }
    for (const auto& entry : noise) {
        scenario.noise_indices.push_back(as_integer(entry, "a noise index"));
    }
    if (document.contains("integer_mode")) {
        scenario.integer_mode = as_boolean(document["integer_mode"], "integer_mode");
    }
    if (document.contains("tolerances")) {
        scenario.tolerances = parse_tolerances(document["tolerances"]);
    }
    scenario.problem();  // validate the partition eagerly
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
    Json document;
    document["schema_version"] = Scenario::kSchemaVersion;
    document["name"] = scenario.name;
    document["functions"] = functions_to_json(scenario.functions);
    Json sensors;
    sensors["positions"] = Json::array();
    for (const Vector& position : scenario.sensors.positions()) {
        sensors["positions"].push_back(
            std::vector<double>(position.data(), position.data() + position.size()));
    }
    sensors["qubit_counts"] = scenario.sensors.qubit_counts();
    document["sensors"] = std::move(sensors);
    document["signal_index"] = scenario.signal_index;
    document["noise_indices"] = scenario.noise_indices;
    document["integer_mode"] = scenario.integer_mode;
    Json tolerances;
    tolerances["constraint"] = scenario.tolerances.constraint;
    tolerances["twirl_grouping"] = scenario.tolerances.twirl_grouping;
    tolerances["normalization"] = scenario.tolerances.normalization;
    tolerances["rank"] = scenario.tolerances.rank;
    document["tolerances"] = std::move(tolerances);
    return document.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read scenario file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

void write_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write scenario file '" + path + "'");
    }
    out << serialize_scenario(scenario);
    if (!out) {
        throw ParseError("failed while writing scenario file '" + path + "'");
    }
}

bool scenarios_equal(const Scenario& a, const Scenario& b) {
    const auto functions_equal = [](const GeneratingFunctionSet& x,
                                    const GeneratingFunctionSet& y) {
        if (x.kind().index() != y.kind().index()) {
            return false;
        }
        if (const auto* tx = std::get_if<TaylorSeries>(&x.kind())) {
            const auto* ty = std::get_if<TaylorSeries>(&y.kind());
            return tx->count == ty->count && tx->length_scale == ty->length_scale;
        }
        if (const auto* fx = std::get_if<FourierSineSeries>(&x.kind())) {
            const auto* fy = std::get_if<FourierSineSeries>(&y.kind());
            return fx->count == fy->count && fx->length_scale == fy->length_scale;
        }
        if (const auto* px = std::get_if<PointSourceSet>(&x.kind())) {
            const auto* py = std::get_if<PointSourceSet>(&y.kind());
            if (px->exponent != py->exponent || px->sources.size() != py->sources.size()) {
                return false;
            }
            for (std::size_t i = 0; i < px->sources.size(); ++i) {
                if (px->sources[i].strength != py->sources[i].strength ||
                    px->sources[i].position != py->sources[i].position) {
                    return false;
                }
            }
            return true;
        }
        const auto& vx = std::get<TabulatedValues>(x.kind()).values;
        const auto& vy = std::get<TabulatedValues>(y.kind()).values;
        return vx.rows() == vy.rows() && vx.cols() == vy.cols() && vx == vy;
    };
    return a.name == b.name && functions_equal(a.functions, b.functions) &&
           a.sensors.positions() == b.sensors.positions() &&
           a.sensors.qubit_counts() == b.sensors.qubit_counts() &&
           a.signal_index == b.signal_index && a.noise_indices == b.noise_indices &&
           a.integer_mode == b.integer_mode && a.tolerances == b.tolerances;
}

Scenario example_taylor_scenario() {
    std::vector<Vector> positions;
    for (double r : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        Vector position(1);
        position[0] = r;
        positions.push_back(std::move(position));
    }
    Scenario scenario{"taylor",
                      GeneratingFunctionSet::taylor(6, 1.0),
                      SensorArray(std::move(positions), {1, 2, 0, 2, 1}),
                      3,
                      {0, 1, 2, 4},
                      false,
                      Tolerances{}};
    return scenario;
}

Scenario example_fourier_scenario() {
    std::vector<Vector> positions;
    for (double r : fourier_extremal_positions(4, 1.0)) {
        Vector position(1);
        position[0] = r;
        positions.push_back(std::move(position));
    }
    Scenario scenario{"fourier",
                      GeneratingFunctionSet::fourier_sine(8, 1.0),
                      SensorArray(std::move(positions), {1, 1, 1, 1}),
                      3,
                      {0, 1, 2, 4, 5, 6, 7},
                      false,
                      Tolerances{}};
    return scenario;
}

Scenario example_pointsource_scenario() {
    // Three collinear sensors; one signal emitter at unit distance from the
    // first sensor, plus a pair of equal noise emitters placed symmetrically
    // so their difference field vanishes at the first two sensors. Sampling
    // that geometry gives the rows below; they are tabulated so the combined
    // noise process stays a single row.
    Matrix values(2, 3);
    values << 1.0, 0.5, 0.25,  //
        0.0, 0.0, 1.0;
    std::vector<Vector> positions;
    for (double r : {0.0, 1.0, 2.0}) {
        Vector position(1);
        position[0] = r;
        positions.push_back(std::move(position));
    }
    Scenario scenario{"pointsource",
                      GeneratingFunctionSet::tabulated(std::move(values)),
                      SensorArray(std::move(positions), {1, 1, 1}),
                      0,
                      {1},
                      true,
                      Tolerances{}};
    return scenario;
}

std::vector<std::string> write_example_scenarios(const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw ParseError("cannot create directory '" + directory + "': " + ec.message());
    }
    std::vector<std::string> written;
    for (const Scenario& scenario :
         {example_taylor_scenario(), example_fourier_scenario(), example_pointsource_scenario()}) {
        const std::string path =
            (std::filesystem::path(directory) / (scenario.name + ".json")).string();
        write_scenario(scenario, path);
        written.push_back(path);
    }
    return written;
}

}  // namespace qsense
