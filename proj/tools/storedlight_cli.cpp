// Command-line front end: figure datasets, parameter sweeps and one-shot
// evaluations, all written as CSV.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "storedlight/errors.hpp"
#include "storedlight/experiment.hpp"

namespace {

using storedlight::ConfigError;
using storedlight::ExperimentConfig;

void apply_settings(ExperimentConfig& config, const std::vector<std::string>& settings) {
    for (const auto& s : settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("setting '" + s + "' must have the form key=value");
        }
        config.set(s.substr(0, eq), s.substr(eq + 1));
    }
}

void emit(const storedlight::Dataset& data, const std::string& path) {
    if (path.empty() || path == "-") {
        storedlight::write_csv(data, std::cout);
    } else {
        storedlight::write_csv_file(data, path);
    }
}

std::string one_line(std::string msg) {
    for (char& c : msg) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    return msg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stored-light beam splitter simulator: counting, quadrature and homodyne statistics"};
    app.require_subcommand(1);
    unsigned workers = 0;
    app.add_option("--workers", workers, "Worker threads for grid evaluation (0 = hardware concurrency)");

    int figure_id = 0;
    std::string figure_out;
    auto* figure = app.add_subcommand("figure", "Regenerate one of the preset figure datasets (1..5)");
    figure->add_option("--id", figure_id, "Figure number")->required()->check(CLI::Range(1, 5));
    figure->add_option("--out", figure_out, "Output CSV path (default stdout)");

    std::string config_path;
    std::vector<std::string> sweep_settings;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep described by a config file");
    sweep->add_option("--config", config_path, "Config file with key = value lines")->required();
    sweep->add_option("--set", sweep_settings, "Override a config entry, key=value (repeatable)");
    sweep->add_option("--out", sweep_out, "Output CSV path (overrides the config's out)");

    std::string eval_kind;
    std::vector<std::string> eval_settings;
    std::vector<std::string> eval_positional;
    std::string eval_out;
    auto* eval = app.add_subcommand("eval", "Evaluate one experiment kind at the given parameters");
    eval->add_option("--kind", eval_kind, "fock-distribution | quadratures | uncertainty-product | homodyne")
        ->required();
    eval->add_option("--set", eval_settings, "Parameter, key=value (repeatable)");
    eval->add_option("params", eval_positional, "Parameters as key=value");
    eval->add_option("--out", eval_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (*figure) {
            const auto config = storedlight::figure_config(figure_id);
            emit(storedlight::run_experiment(config, workers), figure_out);
        } else if (*sweep) {
            auto config = ExperimentConfig::from_file(config_path);
            apply_settings(config, sweep_settings);
            if (!sweep_out.empty()) {
                config.output = sweep_out;
            }
            emit(storedlight::run_experiment(config, workers), config.output);
        } else if (*eval) {
            ExperimentConfig config;
            config.set("kind", eval_kind);
            apply_settings(config, eval_positional);
            apply_settings(config, eval_settings);
            if (!eval_out.empty()) {
                config.output = eval_out;
            }
            emit(storedlight::run_experiment(config, workers), config.output);
        }
    } catch (const storedlight::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 0;
}
