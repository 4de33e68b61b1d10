// Command-line front end: runs, validates and lists scenarios.

#include <krod/runner.hpp>
#include <krod/scenario.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw krod::ScenarioError("cannot read scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void report(const std::string& path, const krod::ScenarioError& e) {
    // Messages carry their own "line N:" prefix when tied to a line.
    std::cerr << path << ": error: " << e.what() << '\n';
}

/// Parses and validates; models of rod jobs are built once so that boundary and
/// constraint problems surface here, before any output is written.
krod::Scenario load(const std::string& path, const std::vector<std::string>& overrides) {
    krod::Scenario s = krod::parse_scenario(read_file(path), overrides);
    const bool rod_job = s.job != krod::JobKind::Pendulum && s.job != krod::JobKind::DetProbe;
    if (rod_job) {
        try {
            (void)krod::build_model(s);
        } catch (const krod::ConstraintError& e) {
            throw krod::ScenarioError(e.what(), "bc.start");
        } catch (const std::invalid_argument& e) {
            throw krod::ScenarioError(e.what());
        }
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kirchhoff rod simulator (B-spline discretization, energy-momentum time stepping)"};
    app.set_version_flag("--version", std::string(krod::kVersion));
    app.require_subcommand(1);

    std::string scenario_file;
    std::vector<std::string> overrides;
    std::string out_dir = "krod_out";

    auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
    run->add_option("scenario", scenario_file, "Scenario file")->required();
    run->add_option("--override", overrides, "Override one key: key=value (repeatable)");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
    validate->add_option("scenario", scenario_file, "Scenario file")->required();
    validate->add_option("--override", overrides, "Override one key: key=value (repeatable)");

    auto* list = app.add_subcommand("list-presets", "List the built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : krod::kExitValidation;
    }

    if (*list) {
        for (const auto& name : krod::preset_names())
            std::cout << name << "  " << krod::preset_description(name) << '\n';
        return krod::kExitSuccess;
    }

    krod::Scenario scenario;
    try {
        scenario = load(scenario_file, overrides);
    } catch (const krod::ScenarioError& e) {
        report(scenario_file, e);
        return krod::kExitValidation;
    }

    if (*validate) {
        std::cout << krod::serialize_scenario(scenario);
        return krod::kExitSuccess;
    }

    try {
        krod::RunSettings settings;
        settings.workers = krod::workers_from_environment();
        const auto outcome = krod::run_scenario(scenario, out_dir, settings);
        for (const auto& f : outcome.files) std::cout << f.string() << '\n';
        if (outcome.exit_code != krod::kExitSuccess)
            std::cerr << "solver failure (" << krod::to_string(outcome.status)
                      << "): " << outcome.message << '\n';
        return outcome.exit_code;
    } catch (const krod::ScenarioError& e) {
        report(scenario_file, e);
        return krod::kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return krod::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
