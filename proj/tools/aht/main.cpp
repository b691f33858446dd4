// Command-line front end: simulate | sweep | report.
//
// Exit codes: 0 success, 2 config error, 3 blow-up detected, 4 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aht/errors.hpp"
#include "aht/experiment.hpp"

namespace {

aht::ExperimentConfig resolve_config(const std::string& config_path,
                                     const std::string& preset,
                                     const std::vector<std::string>& overrides) {
    aht::ExperimentConfig cfg;
    if (!config_path.empty() && !preset.empty())
        throw aht::ConfigError("give either --config or --preset, not both");
    if (!config_path.empty())
        cfg = aht::load_config_file(config_path);
    else if (!preset.empty())
        cfg = aht::scenario_preset(preset);
    else
        throw aht::ConfigError("one of --config or --preset is required");
    for (const auto& kv : overrides) aht::apply_override(cfg, kv);
    return cfg;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw aht::ConfigError("--values: '" + item + "' is not a number");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral AHT transport-flow simulator on the 2-torus"};
    app.require_subcommand(1);

    std::string config_path, preset, param, values_csv, report_dir;
    std::vector<std::string> overrides;

    auto* simulate = app.add_subcommand("simulate", "Run one experiment");
    simulate->add_option("--config", config_path, "config file (flat key=value or JSON)");
    simulate->add_option("--preset", preset, "named scenario preset");
    simulate->add_option("--set", overrides, "key=value override (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
    sweep->add_option("--config", config_path, "base config file");
    sweep->add_option("--preset", preset, "base scenario preset");
    sweep->add_option("--set", overrides, "key=value override (repeatable)");
    sweep->add_option("--param", param, "amplitude | n | theta0_scale | epsilon")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();

    auto* report = app.add_subcommand("report", "Aggregate diagnostics JSONs into a CSV");
    report->add_option("--dir", report_dir, "directory holding run outputs")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            auto cfg = resolve_config(config_path, preset, overrides);
            auto out = aht::run_experiment(cfg);
            if (out.exit_code == aht::kExitBlowup)
                std::cerr << "blow-up detected: " << out.message << "\n";
            std::cout << "wrote " << out.output_dir << "\n";
            return out.exit_code;
        }
        if (sweep->parsed()) {
            auto cfg = resolve_config(config_path, preset, overrides);
            auto values = parse_values(values_csv);
            auto summary = aht::run_sweep(cfg, param, values);
            int failures = 0;
            for (const auto& row : summary.rows)
                if (row.exit_code != 0) ++failures;
            std::cout << "wrote " << cfg.output_dir << "/sweep_summary.csv ("
                      << summary.rows.size() << " rows, " << failures << " failed)\n";
            return 0;
        }
        if (report->parsed()) {
            const int n = aht::write_report(report_dir);
            std::cout << "wrote " << report_dir << "/report.csv (" << n << " rows)\n";
            return 0;
        }
    } catch (const aht::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return aht::kExitConfig;
    } catch (const aht::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return aht::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
