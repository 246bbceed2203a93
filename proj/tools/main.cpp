#include <cmath>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "qsense/pipeline.hpp"

namespace {

std::string vec(const qsense::Vector& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += qsense::format_double(v[i]);
    }
    return out + "]";
}

/// Apply f to every input, optionally through a thread pool of `jobs`
/// futures, and return results in input order.
template <typename Input, typename F>
auto ordered_map(const std::vector<Input>& inputs, int jobs, F f)
    -> std::vector<decltype(f(inputs.front()))> {
    std::vector<decltype(f(inputs.front()))> results;
    results.reserve(inputs.size());
    if (jobs <= 1) {
        for (const Input& input : inputs) {
            results.push_back(f(input));
        }
        return results;
    }
    std::vector<std::future<decltype(f(inputs.front()))>> futures;
    futures.reserve(inputs.size());
    for (const Input& input : inputs) {
        futures.push_back(std::async(std::launch::async, f, input));
    }
    for (auto& future : futures) {
        results.push_back(future.get());
    }
    return results;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
    if (path.empty()) {
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw qsense::ParseError("cannot write CSV file '" + path + "'");
    }
    out << header << '\n';
    for (const std::string& row : rows) {
        out << row << '\n';
    }
    fmt::print("wrote {} rows to {}\n", rows.size(), path);
}

qsense::Scenario load_with_overrides(const std::string& path, double tol_override) {
    qsense::Scenario scenario = qsense::load_scenario(path);
    if (tol_override > 0.0) {
        scenario.tolerances.constraint = tol_override;
        scenario.tolerances.twirl_grouping = tol_override;
        scenario.tolerances.rank = tol_override;
    }
    return scenario;
}

int cmd_design(const std::vector<std::string>& paths, const std::string& csv_path, int jobs,
               double tol_override) {
    struct Item {
        qsense::Scenario scenario;
        qsense::DesignOutput output;
    };
    const auto outputs = ordered_map(paths, jobs, [&](const std::string& path) {
        qsense::Scenario scenario = load_with_overrides(path, tol_override);
        qsense::DesignOutput output = qsense::run_design(scenario);
        return Item{std::move(scenario), std::move(output)};
    });

    std::vector<std::string> rows;
    for (const Item& item : outputs) {
        const auto& d = item.output;
        fmt::print("scenario: {} ({} sites, {} qubits, signal row {})\n", item.scenario.name,
                   d.row.sites, d.row.qubits, d.row.signal_index);
        fmt::print("  f_perp    : {}\n", vec(d.decomposition.perp));
        fmt::print("  dfs dim   : {}\n", d.decomposition.dfs_basis.size());
        fmt::print("  s*        : {}\n", vec(d.pair.s));
        fmt::print("  r*        : {}\n", vec(d.pair.r));
        fmt::print("  qfi       : {}\n", qsense::format_double(d.pair.qfi));
        fmt::print("  noiseless : {}\n", qsense::format_double(d.noiseless.qfi));
        fmt::print("  residual  : {}\n", qsense::format_double(d.max_residual));
        fmt::print("  blocks    : {}\n", d.row.block_census);
        rows.push_back(qsense::to_csv(d.row));
    }
    write_csv(csv_path, qsense::report_csv_header(), rows);
    return 0;
}

int cmd_simulate(const std::vector<std::string>& paths, const std::vector<double>& phases,
                 const std::string& csv_path, int jobs, double tol_override) {
    struct Item {
        qsense::Scenario scenario;
        qsense::SimulateOutput output;
    };
    const auto outputs = ordered_map(paths, jobs, [&](const std::string& path) {
        qsense::Scenario scenario = load_with_overrides(path, tol_override);
        const int functions = scenario.functions.function_count();
        qsense::Vector full = qsense::Vector::Constant(functions, 0.25);
        if (!phases.empty()) {
            if (static_cast<int>(phases.size()) != functions) {
                throw qsense::DimensionMismatch(
                    fmt::format("scenario '{}' has {} generator rows but {} phases were given",
                                scenario.name, functions, phases.size()));
            }
            for (int k = 0; k < functions; ++k) {
                full[k] = phases[static_cast<std::size_t>(k)];
            }
        }
        qsense::SimulateOutput output = qsense::run_simulate(scenario, full);
        return Item{std::move(scenario), std::move(output)};
    });

    bool mismatch = false;
    std::vector<std::string> rows;
    for (const Item& item : outputs) {
        const auto& s = item.output;
        fmt::print("scenario: {}\n", item.scenario.name);
        fmt::print("  qfi pure     : {}\n", qsense::format_double(s.qfi_pure));
        fmt::print("  qfi twirled  : {}\n", qsense::format_double(s.qfi_twirled));
        fmt::print("  purity       : {}\n", qsense::format_double(s.purity));
        fmt::print("  parity Fisher: {}\n", qsense::format_double(s.parity_information));
        fmt::print("  oracle       : {}\n", s.oracle_detail);
        if (s.oracle_status == qsense::OracleStatus::Mismatch) {
            mismatch = true;
            fmt::print(stderr, "error: {}: {}\n", item.scenario.name, s.oracle_detail);
        }
        rows.push_back(qsense::to_csv(s.row));
    }
    write_csv(csv_path, qsense::report_csv_header(), rows);
    return mismatch ? 2 : 0;
}

int cmd_advantage(const std::vector<int>& site_counts, int samples, const std::string& csv_path,
                  int jobs) {
    const auto rows = ordered_map(site_counts, jobs, [&](int sites) {
        return qsense::run_advantage(sites, samples);
    });

    int status = 0;
    std::vector<std::string> csv_rows;
    fmt::print("{:>5} {:>16} {:>20} {:>22} {:>12}\n", "sites", "optimal_qfi", "max_product_qfi",
               "ratio", "bound");
    for (const qsense::AdvantageRow& row : rows) {
        fmt::print("{:>5} {:>16} {:>20} {:>22} {:>12}\n", row.sites,
                   qsense::format_double(row.optimal_qfi),
                   qsense::format_double(row.max_product_qfi), qsense::format_double(row.ratio),
                   qsense::format_double(row.bound));
        if (row.ratio > row.bound + 1e-9) {
            status = 2;
            fmt::print(stderr,
                       "error: {} sites: product-state ratio {} exceeds the bound {}\n",
                       row.sites, qsense::format_double(row.ratio),
                       qsense::format_double(row.bound));
        }
        csv_rows.push_back(qsense::to_csv(row));
    }
    write_csv(csv_path, qsense::advantage_csv_header(), csv_rows);
    return status;
}

int cmd_examples(const std::string& directory) {
    for (const std::string& path : qsense::write_example_scenarios(directory)) {
        fmt::print("{}\n", path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design and verify noise-insensitive probes for distributed quantum sensing"};
    app.require_subcommand(1);

    std::vector<std::string> paths;
    std::vector<double> phases;
    std::vector<int> site_counts;
    std::string csv_path;
    std::string directory = "scenarios";
    int jobs = 1;
    int samples = 4096;
    double tol_override = 0.0;

    CLI::App* design = app.add_subcommand("design", "Compute the optimal noise-insensitive probe");
    design->add_option("scenarios", paths, "Scenario JSON files")->required()->expected(-1);
    design->add_option("--csv", csv_path, "Write machine-readable rows to this file");
    design->add_option("--jobs", jobs, "Process scenarios in parallel")->check(CLI::PositiveNumber);
    design->add_option("--tol", tol_override, "Override constraint/twirl/rank tolerances")
        ->check(CLI::PositiveNumber);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Evolve, twirl, and cross-check the designed probe");
    simulate->add_option("scenarios", paths, "Scenario JSON files")->required()->expected(-1);
    simulate->add_option("--phases", phases, "Accumulated phase per generator row (default 0.25)");
    simulate->add_option("--csv", csv_path, "Write machine-readable rows to this file");
    simulate->add_option("--jobs", jobs, "Process scenarios in parallel")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--tol", tol_override, "Override constraint/twirl/rank tolerances")
        ->check(CLI::PositiveNumber);

    CLI::App* advantage = app.add_subcommand(
        "advantage", "Entangled vs product probes for the alternating scenario");
    advantage->add_option("sites", site_counts, "Even site counts (J <= 12)")
        ->required()
        ->expected(-1);
    advantage->add_option("--samples", samples, "Random product-state samples for J > 4")
        ->check(CLI::NonNegativeNumber);
    advantage->add_option("--csv", csv_path, "Write machine-readable rows to this file");
    advantage->add_option("--jobs", jobs, "Process site counts in parallel")
        ->check(CLI::PositiveNumber);

    CLI::App* examples = app.add_subcommand("examples", "Write the bundled example scenarios");
    examples->add_option("directory", directory, "Target directory (created if missing)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (design->parsed()) {
            return cmd_design(paths, csv_path, jobs, tol_override);
        }
        if (simulate->parsed()) {
            return cmd_simulate(paths, phases, csv_path, jobs, tol_override);
        }
        if (advantage->parsed()) {
            return cmd_advantage(site_counts, samples, csv_path, jobs);
        }
        return cmd_examples(directory);
    } catch (const qsense::ParseError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    } catch (const qsense::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "unexpected error: {}\n", e.what());
        return 2;
    }
}
